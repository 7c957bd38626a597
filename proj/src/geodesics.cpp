#include "symladder/geodesics.hpp"

#include <string>

#include "flow.hpp"

namespace symladder {

std::string_view scheme_name(Scheme s) { return s == Scheme::euler ? "euler" : "rk2"; }

Scheme parse_scheme(std::string_view name) {
  if (name == "euler")
    return Scheme::euler;
  if (name == "rk2")
    return Scheme::rk2;
  throw InvalidArgument("unknown integration scheme '" + std::string(name) + "'");
}

void ControlSystem::validate() const {
  check_point_set(points, "control points");
  check_paired(points, momenta, "momenta");
  if (!momenta.allFinite())
    throw InvalidArgument("momenta: non-finite entry");
}

ControlSystem GeodesicTrajectory::state(std::size_t i) const {
  return ControlSystem{control_points.at(i), momenta.at(i), kernel};
}

double hamiltonian_energy(const ControlSystem &sys) {
  return 0.5 * hilbert_product(sys.points, sys.momenta, sys.points, sys.momenta, sys.kernel);
}

namespace {

void check_steps(int n_steps, double t_end) {
  if (n_steps < 1)
    throw InvalidArgument("n_steps must be at least 1");
  if (!(t_end > 0.0) || t_end > 1.0)
    throw InvalidArgument("t_end must lie in (0, 1]");
}

GeodesicTrajectory integrate(const ControlSystem &sys, const PointSet *shape, int n_steps,
                             double t_end, Scheme scheme) {
  sys.validate();
  check_steps(n_steps, t_end);
  detail::FlowState y{sys.points, sys.momenta, Matrix(0, sys.dim())};
  if (shape) {
    if (shape->cols() != sys.dim())
      throw ShapeMismatch("shoot: shape and control points differ in dimension");
    y.x = *shape;
  }
  const double bound = detail::blowup_bound(y, sys.kernel);
  const double h = t_end / n_steps;

  GeodesicTrajectory traj;
  traj.scheme = scheme;
  traj.n_steps = n_steps;
  traj.kernel = sys.kernel;
  traj.times.reserve(n_steps + 1);
  traj.times.push_back(0.0);
  traj.control_points.push_back(y.c);
  traj.momenta.push_back(y.mu);
  if (shape)
    traj.shape_points.push_back(y.x);

  for (int i = 1; i <= n_steps; ++i) {
    y = detail::step(y, h, scheme, sys.kernel);
    detail::check_state(y, bound, i);
    traj.times.push_back(t_end * i / n_steps);
    traj.control_points.push_back(y.c);
    traj.momenta.push_back(y.mu);
    if (shape)
      traj.shape_points.push_back(y.x);
  }
  return traj;
}

} // namespace

GeodesicTrajectory shoot(const ControlSystem &sys, int n_steps, double t_end, Scheme scheme) {
  return integrate(sys, nullptr, n_steps, t_end, scheme);
}

GeodesicTrajectory shoot(const ControlSystem &sys, const PointSet &shape, int n_steps,
                         double t_end, Scheme scheme) {
  check_point_set(shape, "shape");
  return integrate(sys, &shape, n_steps, t_end, scheme);
}

std::vector<PointSet> flow_points(const PointSet &x0, const GeodesicTrajectory &traj) {
  check_point_set(x0, "flow_points");
  if (traj.times.size() < 2 || traj.control_points.size() != traj.times.size())
    throw InvalidArgument("flow_points: malformed trajectory");
  if (x0.cols() != traj.control_points.front().cols())
    throw ShapeMismatch("flow_points: points and trajectory differ in dimension");

  std::vector<PointSet> path;
  path.reserve(traj.times.size());
  path.push_back(x0);
  detail::FlowState y0{traj.control_points[0], traj.momenta[0], x0};
  const double bound = detail::blowup_bound(y0, traj.kernel);
  for (std::size_t i = 0; i + 1 < traj.times.size(); ++i) {
    // Re-running the combined step from the stored (c, mu) keeps the
    // arithmetic identical to the original shot.
    detail::FlowState y{traj.control_points[i], traj.momenta[i], path.back()};
    const double h = traj.times.back() / traj.n_steps;
    detail::FlowState next = detail::step(y, h, traj.scheme, traj.kernel);
    detail::check_state(next, bound, static_cast<int>(i) + 1);
    path.push_back(std::move(next.x));
  }
  return path;
}

Mesh exponential(const Mesh &shape, const ControlSystem &sys, int n_steps, double t_end,
                 Scheme scheme) {
  shape.validate();
  if (t_end == 0.0)
    return shape;
  GeodesicTrajectory traj = shoot(sys, shape.vertices, n_steps, t_end, scheme);
  return shape.with_vertices(std::move(traj.shape_points.back()));
}

} // namespace symladder
