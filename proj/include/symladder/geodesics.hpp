#pragma once

#include <string_view>
#include <vector>

#include "symladder/kernel.hpp"
#include "symladder/mesh.hpp"

namespace symladder {

enum class Scheme { euler, rk2 };

std::string_view scheme_name(Scheme s);
Scheme parse_scheme(std::string_view name);

/// Initial control points and momenta of a geodesic, with the kernel that
/// turns them into a velocity field.
struct ControlSystem {
  PointSet points;
  MomentaSet momenta;
  KernelParams kernel;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }
  void validate() const;
};

/// Time-discretized solution of the geodesic equations.
///
/// control_points[i], momenta[i] (and shape_points[i] when a shape was
/// advected) are the state at times[i]; index 0 is the initial system.
struct GeodesicTrajectory {
  std::vector<double> times;
  std::vector<PointSet> control_points;
  std::vector<MomentaSet> momenta;
  std::vector<PointSet> shape_points; // empty when no shape was advected
  Scheme scheme = Scheme::rk2;
  int n_steps = 0;
  KernelParams kernel;

  ControlSystem state(std::size_t i) const;
  ControlSystem final_state() const { return state(times.size() - 1); }
};

inline constexpr int kDefaultSteps = 10;

/// H = 1/2 sum_ij K(c_i, c_j) mu_i . mu_j, conserved along geodesics.
double hamiltonian_energy(const ControlSystem &sys);

/// Integrates the geodesic equations
///   dc_k/dt  =  sum_j K(c_k, c_j) mu_j
///   dmu_k/dt = -sum_j grad_1 K(c_k, c_j) (mu_k . mu_j)
/// from t = 0 to t_end with n_steps equal steps of forward Euler or the
/// RK2 midpoint rule. Throws NonFiniteState on blow-up.
GeodesicTrajectory shoot(const ControlSystem &sys, int n_steps = kDefaultSteps,
                         double t_end = 1.0, Scheme scheme = Scheme::rk2);

/// Same as shoot() but also advects `shape` through v_t in the same
/// combined state, so shape and control points see the same discretization.
GeodesicTrajectory shoot(const ControlSystem &sys, const PointSet &shape, int n_steps,
                         double t_end, Scheme scheme);

/// Advects x0 along an existing trajectory with its scheme and time grid.
/// Element i of the result is phi_{times[i]}(x0).
std::vector<PointSet> flow_points(const PointSet &x0, const GeodesicTrajectory &traj);

/// Exp map at identity applied to a shape: vertices replaced by their image
/// under phi_{t_end}. t_end = 0 returns the shape unchanged.
Mesh exponential(const Mesh &shape, const ControlSystem &sys, int n_steps = kDefaultSteps,
                 double t_end = 1.0, Scheme scheme = Scheme::rk2);

} // namespace symladder
