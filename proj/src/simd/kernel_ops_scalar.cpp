#include <cmath>

#include "symladder/simd/kernel_ops.hpp"

// Reference loops. Sums run over j in increasing order, one accumulator per
// output coordinate.

namespace symladder::simd {

namespace {

inline double sq_dist(const double *p, std::size_t dim, const Centers &c, std::size_t j) {
  const double dx = p[0] - c.x[j];
  const double dy = p[1] - c.y[j];
  const double dz = dim == 3 ? p[2] - c.z[j] : 0.0;
  return dx * dx + dy * dy + dz * dz;
}

void gaussian_row_scalar(const double *p, std::size_t dim, const Centers &centers,
                         double inv_sigma2, double *out) {
  for (std::size_t j = 0; j < centers.count; ++j)
    out[j] = std::exp(-sq_dist(p, dim, centers, j) * inv_sigma2);
}

void kernel_combine_scalar(const double *points, std::size_t n_points, std::size_t dim,
                           const Centers &centers, const double *weights, double inv_sigma2,
                           double *out) {
  for (std::size_t i = 0; i < n_points; ++i) {
    const double *p = points + i * dim;
    double acc[3] = {0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < centers.count; ++j) {
      const double k = std::exp(-sq_dist(p, dim, centers, j) * inv_sigma2);
      const double *w = weights + j * dim;
      for (std::size_t a = 0; a < dim; ++a)
        acc[a] += k * w[a];
    }
    for (std::size_t a = 0; a < dim; ++a)
      out[i * dim + a] = acc[a];
  }
}

void momentum_rate_scalar(const double *c, const double *mu, std::size_t n, std::size_t dim,
                          const Centers &centers, double inv_sigma2, double *out) {
  const double two_s = 2.0 * inv_sigma2;
  for (std::size_t k = 0; k < n; ++k) {
    const double *ck = c + k * dim;
    const double *mk = mu + k * dim;
    double acc[3] = {0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < centers.count; ++j) {
      const double *mj = mu + j * dim;
      double dot = 0.0;
      for (std::size_t a = 0; a < dim; ++a)
        dot += mk[a] * mj[a];
      const double kern = std::exp(-sq_dist(ck, dim, centers, j) * inv_sigma2);
      const double scale = kern * dot;
      acc[0] += scale * (ck[0] - centers.x[j]);
      acc[1] += scale * (ck[1] - centers.y[j]);
      if (dim == 3)
        acc[2] += scale * (ck[2] - centers.z[j]);
    }
    for (std::size_t a = 0; a < dim; ++a)
      out[k * dim + a] = two_s * acc[a];
  }
}

} // namespace

namespace detail {
const KernelOps &scalar_ops() {
  static const KernelOps ops{gaussian_row_scalar, kernel_combine_scalar, momentum_rate_scalar};
  return ops;
}
} // namespace detail

} // namespace symladder::simd
