#include "symladder/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

namespace symladder {

double shape_rms(const Mesh &a, const Mesh &b) {
  check_corresponded(a, b, "shape_rms");
  return std::sqrt((a.vertices - b.vertices).squaredNorm() / static_cast<double>(a.size()));
}

double midpoint_distance_error(const Mesh &T, const Mesh &S, Registrar &registrar, Variant variant) {
  const Mesh from_t = midpoint(T, S, registrar, variant).result;
  const Mesh from_s = midpoint(S, T, registrar, variant).result;
  return shape_rms(from_t, from_s);
}

double centrality_error(const Mesh &T, const Mesh &S, Registrar &registrar, Variant variant) {
  const Mesh M = midpoint(T, S, registrar, variant).result;
  return shape_rms(symmetry(M, T, registrar, variant).result, S);
}

double involutivity_error(const Mesh &T, const Mesh &S, const Mesh &S2, Registrar &registrar,
                          Variant variant) {
  const Mesh M = midpoint(T, S, registrar, variant).result;
  const Mesh once = symmetry(M, S2, registrar, variant).result;
  return shape_rms(symmetry(M, once, registrar, variant).result, S2);
}

double transvectivity_error(const Mesh &T, const Mesh &S, const Mesh &S2, Registrar &registrar,
                            Variant variant) {
  const Mesh M = midpoint(T, S, registrar, variant).result;
  const Mesh left = symmetry(T, symmetry(M, S2, registrar, variant).result, registrar, variant).result;
  const Mesh right = symmetry(M, symmetry(S, S2, registrar, variant).result, registrar, variant).result;
  return shape_rms(left, right);
}

double inverse_consistency_error(const Mesh &T, const Mesh &S, Registrar &registrar) {
  const RegistrationResult forward = registrar(T, S);
  const RegistrationResult backward = registrar(S, T);
  const auto &cfg = registrar.config();
  const Mesh round_trip = exponential(forward.deformed, backward.system, cfg.n_steps, 1.0, cfg.scheme);
  return shape_rms(round_trip, T);
}

std::string_view error_type_name(ErrorType t) {
  switch (t) {
  case ErrorType::midpoint_distance:
    return "midpoint_distance";
  case ErrorType::centrality:
    return "centrality";
  case ErrorType::involutivity:
    return "involutivity";
  case ErrorType::transvectivity:
    return "transvectivity";
  case ErrorType::inverse_consistency:
    return "inverse_consistency";
  case ErrorType::registration_error:
    return "registration_error";
  case ErrorType::registration_norm:
    return "registration_norm";
  }
  return "unknown";
}

namespace {

ErrorValue measure(Registrar &registrar, const std::function<double()> &fn) {
  ErrorValue v;
  registrar.reset_convergence();
  try {
    v.value = fn();
    v.ok = std::isfinite(v.value);
    if (!v.ok)
      v.failure = "non-finite error value";
  } catch (const std::exception &e) {
    v.value = std::numeric_limits<double>::quiet_NaN();
    v.failure = e.what();
  }
  v.converged = v.ok && registrar.all_converged();
  return v;
}

double quantile(const std::vector<double> &sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

std::vector<ErrorCell> evaluate_cells(const SubjectPair &pair, std::size_t subject_id, const Mesh &T,
                                      const std::vector<Variant> &variants, Registrar &registrar) {
  const Mesh &S = pair.S;
  const Mesh &S2 = pair.S2;

  const ErrorValue reg_error = measure(registrar, [&] { return shape_rms(registrar(T, S).deformed, S); });
  const ErrorValue reg_norm = measure(registrar, [&] { return registrar(T, S).velocity_norm(); });
  const ErrorValue inverse = measure(registrar, [&] { return inverse_consistency_error(T, S, registrar); });

  std::vector<ErrorCell> cells;
  for (const Variant v : variants) {
    ErrorCell cell;
    cell.subject = subject_id;
    cell.alpha_squared = registrar.config().alpha_squared;
    cell.variant = v;
    auto set = [&cell](ErrorType t, ErrorValue e) { cell.errors[static_cast<std::size_t>(t)] = std::move(e); };
    set(ErrorType::midpoint_distance,
        measure(registrar, [&] { return midpoint_distance_error(T, S, registrar, v); }));
    set(ErrorType::centrality, measure(registrar, [&] { return centrality_error(T, S, registrar, v); }));
    set(ErrorType::involutivity,
        measure(registrar, [&] { return involutivity_error(T, S, S2, registrar, v); }));
    set(ErrorType::transvectivity,
        measure(registrar, [&] { return transvectivity_error(T, S, S2, registrar, v); }));
    set(ErrorType::inverse_consistency, inverse);
    set(ErrorType::registration_error, reg_error);
    set(ErrorType::registration_norm, reg_norm);
    cells.push_back(std::move(cell));
  }
  return cells;
}

ErrorReport run_suite(const std::vector<SubjectPair> &population, const Mesh &T,
                      const std::vector<double> &alphas_squared, const std::vector<Variant> &variants,
                      const RegistrationConfig &cfg, const SuiteOptions &options) {
  ErrorReport report;
  if (population.empty() || alphas_squared.empty() || variants.empty())
    return report;
  for (const auto &p : population) {
    check_corresponded(T, p.S, "run_suite");
    check_corresponded(T, p.S2, "run_suite");
  }

  const std::size_t n_alpha = alphas_squared.size();
  const std::size_t n_groups = population.size() * n_alpha;
  std::vector<std::vector<ErrorCell>> groups(n_groups);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t g = next++; g < n_groups; g = next++) {
      const std::size_t subject = g / n_alpha;
      RegistrationConfig local = cfg;
      local.alpha_squared = alphas_squared[g % n_alpha];
      Registrar registrar(local, options.cache_registrations);
      groups[g] = evaluate_cells(population[subject], subject, T, variants, registrar);
    }
  };

  std::size_t threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, n_groups);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back(worker);
  }

  for (auto &g : groups)
    for (auto &c : g)
      report.cells.push_back(std::move(c));
  return report;
}

SummaryStats ErrorReport::summary(double alpha_squared, Variant variant, ErrorType type) const {
  std::vector<double> values;
  for (const auto &c : cells)
    if (c.alpha_squared == alpha_squared && c.variant == variant && c[type].ok)
      values.push_back(c[type].value);
  SummaryStats s;
  s.count = values.size();
  if (values.empty()) {
    s.mean = s.median = s.q1 = s.q3 = s.min = s.max = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values)
    sum += v;
  s.mean = sum / static_cast<double>(values.size());
  s.median = quantile(values, 0.5);
  s.q1 = quantile(values, 0.25);
  s.q3 = quantile(values, 0.75);
  s.min = values.front();
  s.max = values.back();
  return s;
}

} // namespace symladder
