#include "symladder/transport.hpp"

#include <cmath>
#include <Eigen/Cholesky>

#include "flow.hpp"

namespace symladder {

bool PoleLadderTrace::all_converged() const {
  for (const auto &r : rungs)
    if (!r.midpoint_converged || !r.reflect_converged || !r.result_converged)
      return false;
  return true;
}

namespace {

void subdivide(const Mesh &a, const Mesh &b, int pieces, Registrar &registrar,
               std::vector<Mesh> &out) {
  if (pieces == 1) {
    out.push_back(b);
    return;
  }
  const Mesh m = midpoint(a, b, registrar, Variant::with_residual).result;
  subdivide(a, m, pieces / 2, registrar, out);
  subdivide(m, b, pieces / 2, registrar, out);
}

} // namespace

PoleLadderResult pole_ladder(const Mesh &templ, const Mesh &subject, const Mesh &followup,
                             Registrar &registrar, Variant variant, int n_rungs) {
  if (n_rungs < 1 || (n_rungs & (n_rungs - 1)) != 0)
    throw InvalidArgument("n_rungs must be a power of two (the base geodesic is split by midpoints)");
  check_corresponded(templ, subject, "pole_ladder");
  check_corresponded(templ, followup, "pole_ladder");

  PoleLadderResult out;
  auto &trace = out.trace;
  trace.subdivision.push_back(templ);
  subdivide(templ, subject, n_rungs, registrar, trace.subdivision);

  Mesh carried = followup;
  for (int r = n_rungs; r >= 1; --r) {
    const Mesh &dest = trace.subdivision[r - 1];
    const Mesh &base = trace.subdivision[r];
    LadderRung rung;
    rung.destination = dest;

    MidpointOutcome m = midpoint(dest, base, registrar, variant);
    ++trace.midpoints;
    SymmetryOutcome reflected = symmetry(m.result, carried, registrar, variant);
    ++trace.symmetries;
    SymmetryOutcome result = symmetry(dest, reflected.result, registrar, variant);
    ++trace.symmetries;

    rung.midpoint = std::move(m.result);
    rung.midpoint_converged = m.registration.converged;
    rung.reflected = std::move(reflected.result);
    rung.reflect_converged = reflected.registration.converged;
    rung.result = result.result;
    rung.result_converged = result.registration.converged;
    carried = std::move(result.result);
    trace.rungs.push_back(std::move(rung));
  }
  out.transported = std::move(carried);
  return out;
}

PoleLadderResult pole_ladder(const Mesh &templ, const Mesh &subject, const Mesh &followup,
                             const RegistrationConfig &cfg, Variant variant, int n_rungs) {
  Registrar registrar(cfg);
  return pole_ladder(templ, subject, followup, registrar, variant, n_rungs);
}

RegistrationResult transported_log(const Mesh &templ, const Mesh &transported,
                                   Registrar &registrar) {
  return registrar(templ, transported);
}

ControlSystem fanning_transport_vector(const RegistrationResult &base, const MomentaSet &w,
                                       const RegistrationConfig &cfg) {
  cfg.validate();
  check_paired(base.system.momenta, w, "fanning_transport");
  const KernelParams k = cfg.kernel();
  const ControlSystem start{base.system.points, base.system.momenta, k};
  const GeodesicTrajectory traj = shoot(start, cfg.n_steps, 1.0, cfg.scheme);
  const double h = 1.0 / cfg.n_steps;

  const auto hnorm2 = [&](const PointSet &c, const MomentaSet &m) {
    return hilbert_product(c, m, c, m, k);
  };

  MomentaSet wt = w;
  const double target_norm2 = hnorm2(traj.control_points[0], wt);
  const Eigen::Index d = w.cols();

  for (int i = 0; i < cfg.n_steps; ++i) {
    const PointSet &c = traj.control_points[i];
    const MomentaSet &mu = traj.momenta[i];
    const PointSet &c_next = traj.control_points[i + 1];
    const double wnorm = wt.norm();
    if (wnorm == 0.0)
      break;
    const double munorm = mu.norm();
    const double eps = munorm > 0.0 ? 1e-3 * munorm / wnorm : 1e-3;

    const detail::FlowState plus =
        detail::step({c, mu + eps * wt, Matrix(0, d)}, h, cfg.scheme, k);
    const detail::FlowState minus =
        detail::step({c, mu - eps * wt, Matrix(0, d)}, h, cfg.scheme, k);
    const Matrix jacobi = (plus.c - minus.c) / (2.0 * eps);
    if (!jacobi.allFinite())
      throw NonFiniteState("fanning_transport: non-finite Jacobi field at step " +
                           std::to_string(i + 1));

    const Matrix kn = kernel_matrix(c_next, c_next, k);
    const Eigen::LDLT<Matrix> ldlt(kn);
    MomentaSet next = ldlt.solve(jacobi / h);
    const double n2 = hnorm2(c_next, next);
    if (!next.allFinite() || !(n2 > 0.0))
      throw NonFiniteState("fanning_transport: transported vector degenerated at step " +
                           std::to_string(i + 1));
    next *= std::sqrt(target_norm2 / n2);
    wt = std::move(next);
  }
  return ControlSystem{traj.control_points.back(), std::move(wt), k};
}

Mesh fanning_transport(const Mesh &templ, const RegistrationResult &base, const MomentaSet &w,
                       const RegistrationConfig &cfg) {
  const ControlSystem transported = fanning_transport_vector(base, w, cfg);
  return exponential(templ, transported, cfg.n_steps, 1.0, cfg.scheme);
}

} // namespace symladder
