#pragma once

#include <vector>

#include "symladder/mesh.hpp"

namespace symladder {

/// Per-face triangle area (half the cross-product norm).
std::vector<double> triangle_areas(const Mesh &mesh);

/// Local area strain of b relative to a, per vertex:
///   LAS_i = (1 / k_i) sum_{faces f around i} (area_a(f) - area_b(f)) / area_a(f)
/// Faces with area_a below 1e-12 * diag(a)^2 are left out of the mean.
/// Shrinking gives positive strain. Throws DegenerateNeighborhood when a
/// vertex is left with no usable face.
std::vector<double> local_area_strain(const Mesh &a, const Mesh &b);

/// sqrt(sum_i (las1_i - las2_i)^2), not normalized by the vertex count.
double area_strain_error(const std::vector<double> &las1, const std::vector<double> &las2);

} // namespace symladder
