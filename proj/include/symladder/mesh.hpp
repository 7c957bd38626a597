#pragma once

#include "symladder/types.hpp"

namespace symladder {

/// Triangulated surface (or bare landmark set when `faces` is empty).
///
/// Shapes used together in one experiment share topology and are
/// corresponded by vertex index.
struct Mesh {
  PointSet vertices;
  FaceMatrix faces;

  Eigen::Index size() const { return vertices.rows(); }
  Eigen::Index dim() const { return vertices.cols(); }

  /// Same connectivity, new vertex positions.
  Mesh with_vertices(PointSet v) const;

  /// Throws InvalidArgument when face indices are out of range, the
  /// dimension is not 2 or 3, or coordinates are not finite.
  void validate() const;
};

/// Throws ShapeMismatch unless both meshes have the same vertex count and dimension.
void check_corresponded(const Mesh &a, const Mesh &b, const char *what);

/// Diagonal of the axis-aligned bounding box of the points.
double bounding_box_diagonal(const PointSet &points);

} // namespace symladder
