#pragma once

#include <Eigen/Core>

#include "symladder/types.hpp"

namespace symladder {

/// Width of the Gaussian reproducing kernel.
///
/// The kernel is K(x, y) = exp(-|x - y|^2 / sigma^2). Note there is no
/// factor 2 in the denominator, unlike the common exp(-r^2 / (2 sigma^2))
/// convention; a width of sigma here corresponds to sigma / sqrt(2) there.
struct KernelParams {
  double sigma = 1.0;

  explicit KernelParams(double s = 1.0);

  double inv_sigma2() const { return 1.0 / (sigma * sigma); }
};

using Point = Eigen::RowVectorXd;

double eval_kernel(const Eigen::Ref<const Point> &x, const Eigen::Ref<const Point> &y,
                   const KernelParams &params);

/// Gradient of eval_kernel with respect to its first argument,
/// -(2 / sigma^2) (x - y) K(x, y).
Point grad1_kernel(const Eigen::Ref<const Point> &x, const Eigen::Ref<const Point> &y,
                   const KernelParams &params);

/// v(x) = sum_k K(x, c_k) mu_k.
Point eval_velocity_at(const Eigen::Ref<const Point> &x, const PointSet &c, const MomentaSet &mu,
                       const KernelParams &params);

/// Velocity of the field (c, mu) at every row of `points`.
Matrix eval_velocity(const PointSet &points, const PointSet &c, const MomentaSet &mu,
                     const KernelParams &params);

/// <v, v'>_H = sum_i sum_j K(c_i, c'_j) mu_i . mu'_j
double hilbert_product(const PointSet &c, const MomentaSet &mu, const PointSet &c2,
                       const MomentaSet &mu2, const KernelParams &params);

/// Dense kernel matrix K(a_i, b_j).
Matrix kernel_matrix(const PointSet &a, const PointSet &b, const KernelParams &params);

} // namespace symladder
