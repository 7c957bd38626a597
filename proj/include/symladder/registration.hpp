#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "symladder/geodesics.hpp"
#include "symladder/mesh.hpp"

namespace symladder {

/// Settings of one landmark registration.
struct RegistrationConfig {
  double alpha_squared = 1.0;        ///< weight of |v0|_H^2 in the criterion
  double sigma = 1.0;                ///< kernel width
  int n_steps = kDefaultSteps;
  Scheme scheme = Scheme::rk2;
  double control_point_spacing = 0.0; ///< grid spacing; 0 means sigma
  int max_iterations = 200;
  double convergence_tol = 1e-6;     ///< stop when the relative decrease drops below this
  double initial_step = 1e-2;
  bool freeze_control_points = false;

  KernelParams kernel() const { return KernelParams(sigma); }
  double spacing() const { return control_point_spacing > 0.0 ? control_point_spacing : sigma; }
  void validate() const;
};

struct CriterionValue {
  double total = 0.0;
  double data = 0.0;       ///< |S - phi_1(T)|^2 summed over vertices
  double regularity = 0.0; ///< |v0|_H^2
};

struct CriterionGradient {
  Matrix points;  ///< dC/dc0
  Matrix momenta; ///< dC/dmu0
};

/// C(c, mu) = |S - phi_1^{c,mu}(T)|^2 + alpha^2 |v0^{c,mu}|_H^2
CriterionValue criterion(const ControlSystem &sys, const Mesh &templ, const Mesh &target,
                         const RegistrationConfig &cfg);

/// Exact gradient of the discretized criterion, obtained by reverse
/// accumulation through the integrator steps. Control-point gradient is
/// zero when cfg.freeze_control_points is set.
CriterionGradient criterion_gradient(const ControlSystem &sys, const Mesh &templ,
                                     const Mesh &target, const RegistrationConfig &cfg,
                                     CriterionValue *value = nullptr);

/// Regular grid of spacing cfg.spacing() over the template's bounding box
/// grown by sigma / 2 on every side, centred in that box.
PointSet initial_control_points(const Mesh &templ, const RegistrationConfig &cfg);

struct RegistrationResult {
  ControlSystem system;        ///< optimal initial control points and momenta (Log at identity)
  Mesh deformed;               ///< phi_1(T)
  DisplacementField delta;     ///< S - phi_1(T)
  double data_term = 0.0;
  double regularity_term = 0.0;
  double total = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history; ///< criterion after each accepted step, starting with the initial value

  double velocity_norm() const;
};

/// target - deformed, vertex by vertex.
DisplacementField residual(const Mesh &target, const Mesh &deformed);

/// Gradient descent with Armijo backtracking from the grid initialization
/// with zero momenta.
RegistrationResult register_meshes(const Mesh &templ, const Mesh &target,
                                   const RegistrationConfig &cfg);

/// Same, starting from a given control system (its kernel is replaced by cfg's).
RegistrationResult register_meshes(const Mesh &templ, const Mesh &target,
                                   const RegistrationConfig &cfg, const ControlSystem &init);

/// Runs registrations under one configuration, optionally memoizing them by
/// the exact coordinates of the (source, target) pair.
class Registrar {
public:
  explicit Registrar(RegistrationConfig cfg, bool cache = false);

  const RegistrationConfig &config() const { return cfg_; }

  RegistrationResult operator()(const Mesh &source, const Mesh &target);

  std::size_t computed() const { return computed_; }
  std::size_t cache_hits() const { return hits_; }

  /// Whether every registration returned since the last reset converged.
  bool all_converged() const { return all_converged_; }
  void reset_convergence() { all_converged_ = true; }

private:
  RegistrationConfig cfg_;
  bool cache_;
  std::map<std::string, RegistrationResult> memo_;
  std::size_t computed_ = 0;
  std::size_t hits_ = 0;
  bool all_converged_ = true;
};

} // namespace symladder
