#pragma once

#include <Eigen/Core>

#include "symladder/errors.hpp"

namespace symladder {

/// Row-major N x d block of coordinates; row i is point i.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Control points, evaluation points and shape vertices all share this layout.
using PointSet = Matrix;

/// Covectors paired index-wise with a PointSet.
using MomentaSet = Matrix;

/// Per-vertex displacement field, same layout as a PointSet.
using DisplacementField = Matrix;

using FaceMatrix = Eigen::Matrix<int, Eigen::Dynamic, 3, Eigen::RowMajor>;

/// True when every coefficient is finite.
inline bool all_finite(const Matrix &m) { return m.allFinite(); }

/// Throws InvalidArgument unless the point set is non-empty, 2D or 3D and finite.
void check_point_set(const PointSet &points, const char *what);

/// Throws ShapeMismatch unless a and b have identical shape.
void check_paired(const Matrix &a, const Matrix &b, const char *what);

} // namespace symladder
