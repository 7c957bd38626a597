#include "symladder/registration.hpp"

#include <cmath>
#include <cstring>
#include <span>

#include "flow.hpp"
#include "symladder/simd/kernel_ops.hpp"

namespace symladder {

void RegistrationConfig::validate() const {
  if (!(alpha_squared > 0.0) || !std::isfinite(alpha_squared))
    throw InvalidArgument("alpha_squared must be positive");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidArgument("sigma must be positive");
  if (n_steps < 1)
    throw InvalidArgument("n_steps must be at least 1");
  if (control_point_spacing < 0.0)
    throw InvalidArgument("control_point_spacing must be positive (or 0 for sigma)");
  if (max_iterations < 1)
    throw InvalidArgument("max_iterations must be at least 1");
  if (!(convergence_tol > 0.0))
    throw InvalidArgument("convergence_tol must be positive");
  if (!(initial_step > 0.0))
    throw InvalidArgument("initial_step must be positive");
}

double RegistrationResult::velocity_norm() const { return std::sqrt(std::max(regularity_term, 0.0)); }

DisplacementField residual(const Mesh &target, const Mesh &deformed) {
  check_corresponded(target, deformed, "residual");
  return target.vertices - deformed.vertices;
}

namespace {

void check_problem(const ControlSystem &sys, const Mesh &templ, const Mesh &target) {
  check_corresponded(templ, target, "registration");
  sys.validate();
  if (sys.dim() != templ.dim())
    throw ShapeMismatch("registration: control points and meshes differ in dimension");
}

double regularity(const ControlSystem &sys) {
  return hilbert_product(sys.points, sys.momenta, sys.points, sys.momenta, sys.kernel);
}

// Forward shot of the template only, no storage.
CriterionValue evaluate(const ControlSystem &sys, const Mesh &templ, const Mesh &target,
                        const RegistrationConfig &cfg) {
  detail::FlowState y{sys.points, sys.momenta, templ.vertices};
  const double bound = detail::blowup_bound(y, sys.kernel);
  const double h = 1.0 / cfg.n_steps;
  for (int i = 1; i <= cfg.n_steps; ++i) {
    y = detail::step(y, h, cfg.scheme, sys.kernel);
    detail::check_state(y, bound, i);
  }
  CriterionValue v;
  v.data = (target.vertices - y.x).squaredNorm();
  v.regularity = regularity(sys);
  v.total = v.data + cfg.alpha_squared * v.regularity;
  return v;
}

ControlSystem with_kernel(ControlSystem sys, const RegistrationConfig &cfg) {
  sys.kernel = cfg.kernel();
  return sys;
}

} // namespace

CriterionValue criterion(const ControlSystem &sys, const Mesh &templ, const Mesh &target,
                         const RegistrationConfig &cfg) {
  cfg.validate();
  check_problem(sys, templ, target);
  return evaluate(with_kernel(sys, cfg), templ, target, cfg);
}

CriterionGradient criterion_gradient(const ControlSystem &sys_in, const Mesh &templ,
                                     const Mesh &target, const RegistrationConfig &cfg,
                                     CriterionValue *value) {
  cfg.validate();
  check_problem(sys_in, templ, target);
  const ControlSystem sys = with_kernel(sys_in, cfg);
  const KernelParams &k = sys.kernel;
  const int n = cfg.n_steps;
  const double h = 1.0 / n;

  std::vector<detail::FlowState> states;
  std::vector<detail::FlowState> mids;
  states.reserve(n + 1);
  if (cfg.scheme == Scheme::rk2)
    mids.resize(n);
  states.push_back({sys.points, sys.momenta, templ.vertices});
  const double bound = detail::blowup_bound(states.front(), k);
  for (int i = 0; i < n; ++i) {
    detail::FlowState *mid = cfg.scheme == Scheme::rk2 ? &mids[i] : nullptr;
    states.push_back(detail::step(states.back(), h, cfg.scheme, k, mid));
    detail::check_state(states.back(), bound, i + 1);
  }

  const Matrix diff = target.vertices - states.back().x;
  const double reg = regularity(sys);
  if (value) {
    value->data = diff.squaredNorm();
    value->regularity = reg;
    value->total = value->data + cfg.alpha_squared * reg;
  }

  const Eigen::Index nc = sys.size(), d = sys.dim(), nx = templ.size();
  auto zeros = [&] {
    return detail::FlowState{Matrix::Zero(nc, d), Matrix::Zero(nc, d), Matrix::Zero(nx, d)};
  };

  // Adjoint of the final state, propagated back through each step.
  detail::FlowState adj = zeros();
  adj.x = -2.0 * diff;
  for (int i = n - 1; i >= 0; --i) {
    if (cfg.scheme == Scheme::euler) {
      detail::FlowState cot{h * adj.c, h * adj.mu, h * adj.x};
      detail::rates_vjp(states[i], cot, k, adj);
    } else {
      // y' = y + h f(y_m),  y_m = y + h/2 f(y)
      detail::FlowState adj_mid = zeros();
      detail::FlowState cot{h * adj.c, h * adj.mu, h * adj.x};
      detail::rates_vjp(mids[i], cot, k, adj_mid);
      detail::FlowState cot_mid{0.5 * h * adj_mid.c, 0.5 * h * adj_mid.mu, 0.5 * h * adj_mid.x};
      adj.c += adj_mid.c;
      adj.mu += adj_mid.mu;
      adj.x += adj_mid.x;
      detail::rates_vjp(states[i], cot_mid, k, adj);
    }
  }

  // d|v0|^2/dmu = 2 K mu, d|v0|^2/dc = -2 dmu/dt(0).
  const detail::FlowState r0 = detail::rates(detail::FlowState{sys.points, sys.momenta, Matrix(0, d)}, k);
  CriterionGradient g;
  g.momenta = adj.mu + (2.0 * cfg.alpha_squared) * r0.c;
  if (cfg.freeze_control_points)
    g.points = Matrix::Zero(nc, d);
  else
    g.points = adj.c - (2.0 * cfg.alpha_squared) * r0.mu;
  return g;
}

PointSet initial_control_points(const Mesh &templ, const RegistrationConfig &cfg) {
  templ.validate();
  const double grow = 0.5 * cfg.sigma;
  const double spacing = cfg.spacing();
  const Eigen::RowVectorXd lo = templ.vertices.colwise().minCoeff().array() - grow;
  const Eigen::RowVectorXd hi = templ.vertices.colwise().maxCoeff().array() + grow;
  const Eigen::Index d = templ.dim();

  std::vector<int> counts(d);
  std::vector<double> start(d);
  Eigen::Index total = 1;
  for (Eigen::Index a = 0; a < d; ++a) {
    const double len = hi[a] - lo[a];
    counts[a] = static_cast<int>(std::floor(len / spacing + 1e-9)) + 1;
    start[a] = lo[a] + 0.5 * (len - (counts[a] - 1) * spacing);
    total *= counts[a];
  }

  PointSet grid(total, d);
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index rem = idx;
    for (Eigen::Index a = d - 1; a >= 0; --a) {
      grid(idx, a) = start[a] + (rem % counts[a]) * spacing;
      rem /= counts[a];
    }
  }
  return grid;
}

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;

} // namespace

RegistrationResult register_meshes(const Mesh &templ, const Mesh &target,
                                   const RegistrationConfig &cfg) {
  cfg.validate();
  const PointSet grid = initial_control_points(templ, cfg);
  return register_meshes(templ, target, cfg,
                         ControlSystem{grid, MomentaSet::Zero(grid.rows(), grid.cols()), cfg.kernel()});
}

RegistrationResult register_meshes(const Mesh &templ, const Mesh &target,
                                   const RegistrationConfig &cfg, const ControlSystem &init) {
  cfg.validate();
  templ.validate();
  target.validate();
  check_problem(init, templ, target);

  ControlSystem sys = with_kernel(init, cfg);
  CriterionValue value;
  CriterionGradient grad = criterion_gradient(sys, templ, target, cfg, &value);

  RegistrationResult res;
  res.history.push_back(value.total);
  double step = cfg.initial_step;

  for (int it = 0; it < cfg.max_iterations; ++it) {
    const double gnorm2 = grad.momenta.squaredNorm() + grad.points.squaredNorm();
    if (gnorm2 == 0.0) {
      res.converged = true;
      break;
    }

    double t = step;
    bool accepted = false;
    ControlSystem trial = sys;
    CriterionValue trial_value;
    for (int halving = 0; halving < kMaxHalvings; ++halving, t *= 0.5) {
      trial.momenta = sys.momenta - t * grad.momenta;
      trial.points = sys.points - t * grad.points;
      try {
        trial_value = evaluate(trial, templ, target, cfg);
      } catch (const NonFiniteState &) {
        continue;
      }
      if (trial_value.total <= value.total - kArmijo * t * gnorm2) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // No descent step at working precision: numerically stationary.
      res.converged = true;
      break;
    }

    const double decrease = (value.total - trial_value.total) / std::max(value.total, 1e-300);
    sys = std::move(trial);
    res.iterations = it + 1;
    step = 2.0 * t;
    if (decrease < cfg.convergence_tol) {
      value = trial_value;
      res.history.push_back(value.total);
      res.converged = true;
      break;
    }
    grad = criterion_gradient(sys, templ, target, cfg, &value);
    res.history.push_back(value.total);
  }

  res.deformed = exponential(templ, sys, cfg.n_steps, 1.0, cfg.scheme);
  res.delta = residual(target, res.deformed);
  const CriterionValue final_value = evaluate(sys, templ, target, cfg);
  res.data_term = final_value.data;
  res.regularity_term = final_value.regularity;
  res.total = final_value.total;
  res.system = std::move(sys);
  return res;
}

Registrar::Registrar(RegistrationConfig cfg, bool cache) : cfg_(std::move(cfg)), cache_(cache) {
  cfg_.validate();
}

RegistrationResult Registrar::operator()(const Mesh &source, const Mesh &target) {
  if (!cache_) {
    ++computed_;
    RegistrationResult r = register_meshes(source, target, cfg_);
    all_converged_ = all_converged_ && r.converged;
    return r;
  }
  std::string key;
  const auto append = [&key](const Matrix &m) {
    const auto rows = m.rows(), cols = m.cols();
    key.append(reinterpret_cast<const char *>(&rows), sizeof rows);
    key.append(reinterpret_cast<const char *>(&cols), sizeof cols);
    key.append(reinterpret_cast<const char *>(m.data()), m.size() * sizeof(double));
  };
  append(source.vertices);
  append(target.vertices);
  if (auto it = memo_.find(key); it != memo_.end()) {
    ++hits_;
    all_converged_ = all_converged_ && it->second.converged;
    return it->second;
  }
  ++computed_;
  RegistrationResult r = register_meshes(source, target, cfg_);
  all_converged_ = all_converged_ && r.converged;
  memo_.emplace(std::move(key), r);
  return r;
}

} // namespace symladder
