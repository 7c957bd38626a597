#include "symladder/simd/kernel_ops.hpp"

#include <atomic>

#include "symladder/errors.hpp"

namespace symladder::simd {

namespace {

constexpr std::size_t kPadWidth = 4;

std::atomic<Backend> &active() {
  static std::atomic<Backend> backend{detect_backend()};
  return backend;
}

} // namespace

Centers::Centers(std::span<const double> rowmajor, std::size_t n, std::size_t dim) : count(n) {
  if (dim != 2 && dim != 3)
    throw InvalidArgument("kernel centres must be 2D or 3D");
  const std::size_t padded = (n + kPadWidth - 1) / kPadWidth * kPadWidth;
  x.assign(padded, 0.0);
  y.assign(padded, 0.0);
  z.assign(padded, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = rowmajor[j * dim];
    y[j] = rowmajor[j * dim + 1];
    if (dim == 3)
      z[j] = rowmajor[j * dim + 2];
  }
}

std::string_view backend_name(Backend b) {
  switch (b) {
  case Backend::scalar:
    return "scalar";
  case Backend::avx2:
    return "avx2";
  }
  return "unknown";
}

bool backend_available(Backend b) {
  switch (b) {
  case Backend::scalar:
    return true;
  case Backend::avx2:
#if defined(SYMLADDER_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
  }
  return false;
}

Backend detect_backend() {
  return backend_available(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

Backend active_backend() { return active().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!backend_available(b))
    throw InvalidArgument("kernel backend '" + std::string(backend_name(b)) +
                          "' is not available on this machine");
  active().store(b, std::memory_order_relaxed);
}

const KernelOps &ops_for(Backend b) {
#if defined(SYMLADDER_HAVE_AVX2)
  if (b == Backend::avx2) {
    if (!backend_available(b))
      throw InvalidArgument("avx2 kernel backend is not available on this machine");
    return detail::avx2_ops();
  }
#endif
  if (b != Backend::scalar)
    throw InvalidArgument("kernel backend not compiled in");
  return detail::scalar_ops();
}

void gaussian_row(const double *p, std::size_t dim, const Centers &centers, double inv_sigma2,
                  double *out) {
  ops_for(active_backend()).gaussian_row(p, dim, centers, inv_sigma2, out);
}

void kernel_combine(const double *points, std::size_t n_points, std::size_t dim,
                    const Centers &centers, const double *weights, double inv_sigma2,
                    double *out) {
  ops_for(active_backend())
      .kernel_combine(points, n_points, dim, centers, weights, inv_sigma2, out);
}

void momentum_rate(const double *c, const double *mu, std::size_t n, std::size_t dim,
                   const Centers &centers, double inv_sigma2, double *out) {
  ops_for(active_backend()).momentum_rate(c, mu, n, dim, centers, inv_sigma2, out);
}

} // namespace symladder::simd
