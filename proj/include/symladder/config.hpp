#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "symladder/registration.hpp"
#include "symladder/symmetric_ops.hpp"

namespace symladder {

/// Parameters of the synthetic ellipsoid population.
struct SyntheticConfig {
  int n_subjects = 20;
  int subdivisions = 2;                        ///< icosphere levels; 2 gives 162 vertices
  std::array<double, 3> radii = {20.0, 24.0, 36.0};
  double deformation_sigma = 24.0;             ///< kernel width of the random subject deformations
  double deformation_scale = 2.5;              ///< std-dev of the random subject momenta
  double noise_scale = 0.3;                    ///< std-dev of per-vertex noise on S
  double systolic_contraction = 0.12;          ///< radial contraction of S' (fraction)
  double systolic_scale = 1.0;                 ///< std-dev of the random component of S'
};

/// Everything a batch run needs, read from a flat `key = value` file.
struct ExperimentConfig {
  double sigma = 20.0;
  std::vector<double> alpha_squared = {0.01, 1.0, 100.0};
  int n_steps = kDefaultSteps;
  Scheme scheme = Scheme::rk2;
  double control_point_spacing = 0.0;
  int max_iterations = 200;
  double convergence_tol = 1e-6;
  double initial_step = 1e-2;
  bool freeze_control_points = false;
  std::vector<Variant> variants = {Variant::with_residual, Variant::without_residual};
  int n_rungs = 1;
  std::uint64_t seed = 0;
  std::string output_dir;
  SyntheticConfig synthetic;

  void validate() const;

  /// Registration settings with the given alpha^2.
  RegistrationConfig registration(double alpha_squared) const;
  /// Registration settings with the first alpha^2 of the list.
  RegistrationConfig registration() const { return registration(alpha_squared.front()); }
};

/// Parses `key = value` lines; `#` starts a comment, lists are comma
/// separated. Unknown keys and malformed values throw ParseError.
ExperimentConfig parse_config(const std::string &text, const std::string &source = "<config>");
ExperimentConfig load_config(const std::filesystem::path &path);

/// Canonical text form: every key, fixed order, 17-digit numbers.
std::string serialize_config(const ExperimentConfig &cfg);

} // namespace symladder
