#include "symladder/kernel.hpp"

#include <cmath>
#include <span>

#include "symladder/simd/kernel_ops.hpp"

namespace symladder {

KernelParams::KernelParams(double s) : sigma(s) {
  if (!(s > 0.0) || !std::isfinite(s))
    throw InvalidArgument("kernel width sigma must be positive and finite");
}

void check_point_set(const PointSet &points, const char *what) {
  if (points.rows() < 1)
    throw InvalidArgument(std::string(what) + ": point set is empty");
  if (points.cols() != 2 && points.cols() != 3)
    throw InvalidArgument(std::string(what) + ": points must be 2D or 3D");
  if (!points.allFinite())
    throw InvalidArgument(std::string(what) + ": non-finite coordinate");
}

void check_paired(const Matrix &a, const Matrix &b, const char *what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeMismatch(std::string(what) + ": expected " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + ", got " + std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()));
}

double eval_kernel(const Eigen::Ref<const Point> &x, const Eigen::Ref<const Point> &y,
                   const KernelParams &params) {
  return std::exp(-(x - y).squaredNorm() * params.inv_sigma2());
}

Point grad1_kernel(const Eigen::Ref<const Point> &x, const Eigen::Ref<const Point> &y,
                   const KernelParams &params) {
  const double k = eval_kernel(x, y, params);
  return (-2.0 * params.inv_sigma2() * k) * (x - y);
}

Matrix eval_velocity(const PointSet &points, const PointSet &c, const MomentaSet &mu,
                     const KernelParams &params) {
  check_point_set(c, "eval_velocity");
  check_paired(c, mu, "eval_velocity");
  if (!mu.allFinite() || !points.allFinite())
    throw InvalidArgument("eval_velocity: non-finite input");
  if (points.cols() != c.cols())
    throw ShapeMismatch("eval_velocity: evaluation points and control points differ in dimension");
  const auto dim = static_cast<std::size_t>(c.cols());
  const simd::Centers centers(std::span(c.data(), c.size()), c.rows(), dim);
  Matrix out(points.rows(), points.cols());
  simd::kernel_combine(points.data(), points.rows(), dim, centers, mu.data(),
                       params.inv_sigma2(), out.data());
  return out;
}

Point eval_velocity_at(const Eigen::Ref<const Point> &x, const PointSet &c, const MomentaSet &mu,
                    const KernelParams &params) {
  Matrix p = x;
  return eval_velocity(p, c, mu, params).row(0);
}

double hilbert_product(const PointSet &c, const MomentaSet &mu, const PointSet &c2,
                       const MomentaSet &mu2, const KernelParams &params) {
  check_paired(c, mu, "hilbert_product");
  check_paired(c2, mu2, "hilbert_product");
  if (c.cols() != c2.cols())
    throw ShapeMismatch("hilbert_product: fields live in different dimensions");
  const Matrix v = eval_velocity(c, c2, mu2, params);
  double total = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    total += mu.row(i).dot(v.row(i));
  return total;
}

Matrix kernel_matrix(const PointSet &a, const PointSet &b, const KernelParams &params) {
  if (a.cols() != b.cols())
    throw ShapeMismatch("kernel_matrix: point sets differ in dimension");
  const auto dim = static_cast<std::size_t>(b.cols());
  const simd::Centers centers(std::span(b.data(), b.size()), b.rows(), dim);
  Matrix k(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    simd::gaussian_row(a.row(i).data(), dim, centers, params.inv_sigma2(), k.row(i).data());
  return k;
}

} // namespace symladder
