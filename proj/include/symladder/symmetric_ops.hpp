#pragma once

#include <string_view>

#include "symladder/registration.hpp"

namespace symladder {

/// Whether the registration residual delta = S - phi_1(T) is carried
/// through the midpoint and symmetry constructions.
enum class Variant { with_residual, without_residual };

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);

struct MidpointOutcome {
  Mesh result;
  RegistrationResult registration; ///< base -> other
  Variant variant;
};

struct SymmetryOutcome {
  Mesh result;
  RegistrationResult registration; ///< center -> subject
  Variant variant;
};

/// Point halfway along the geodesic from `base` towards `other`:
///   M = phi_{1/2}(base) + delta / 2   (with_residual)
///   M = phi_{1/2}(base)               (without_residual)
/// The half geodesic is integrated to t = 1/2 in ceil(n_steps / 2) steps.
/// Not symmetric in its arguments: midpoint(T, S) != midpoint(S, T) in general.
MidpointOutcome midpoint(const Mesh &base, const Mesh &other, Registrar &registrar, Variant variant);
MidpointOutcome midpoint(const Mesh &base, const Mesh &other, const RegistrationConfig &cfg,
                         Variant variant);

/// Geodesic reflection of `subject` through `center`:
///   s_C(S) = Exp_C(-Log_C(S)) - delta   (with_residual)
/// registering center -> subject, shooting the negated momenta from the same
/// control points, then subtracting the residual by vertex index.
SymmetryOutcome symmetry(const Mesh &center, const Mesh &subject, Registrar &registrar,
                         Variant variant);
SymmetryOutcome symmetry(const Mesh &center, const Mesh &subject, const RegistrationConfig &cfg,
                         Variant variant);

/// Midpoint / symmetry built from an existing registration of base (center).
Mesh midpoint_from(const Mesh &base, const RegistrationResult &reg, const RegistrationConfig &cfg,
                   Variant variant);
Mesh symmetry_from(const Mesh &center, const RegistrationResult &reg,
                   const RegistrationConfig &cfg, Variant variant);

} // namespace symladder
