#pragma once

#include <cstdint>
#include <vector>

#include "symladder/config.hpp"
#include "symladder/diagnostics.hpp"

namespace symladder {

/// Unit icosphere after `subdivisions` midpoint refinements
/// (12, 42, 162, 642, ... vertices), outward-oriented faces.
Mesh icosphere(int subdivisions);

/// Icosphere scaled to an axis-aligned ellipsoid centred at the origin.
Mesh ellipsoid(const std::array<double, 3> &radii, int subdivisions);

struct Population {
  Mesh templ;
  std::vector<SubjectPair> subjects;
};

/// Ellipsoid template T and n_subjects (S, S') pairs. Each S is T shot
/// along a random geodesic (random momenta on a coarse control grid) plus
/// vertex noise; each S' is S contracted towards its long axis and deformed
/// by a second independent random geodesic. Deterministic in `seed`.
Population generate_synthetic_population(std::uint64_t seed, int n_subjects,
                                         const SyntheticConfig &cfg);

} // namespace symladder
