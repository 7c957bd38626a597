#pragma once

// Batched Gaussian-kernel loops behind a runtime-selected backend.
//
// Every routine has a scalar reference implementation and (on x86-64 with
// AVX2 + FMA) a vectorized one. Vectorization runs over the centre index j,
// so the output for an evaluation point depends only on that point: two
// identical evaluation points always get bit-identical results.
//
// Points are row-major N x d with d in {2, 3}; kernel values are
// exp(-|x - c|^2 * inv_sigma2).

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace symladder::simd {

enum class Backend { scalar, avx2 };

std::string_view backend_name(Backend b);

/// True when this binary contains the backend and the CPU can run it.
bool backend_available(Backend b);

/// Backend currently used by the dispatching entry points below.
Backend active_backend();

/// Pins the dispatch. Throws InvalidArgument if the backend is unavailable.
void set_backend(Backend b);

/// Best available backend (what active_backend() starts as).
Backend detect_backend();

/// Structure-of-arrays copy of a centre set, zero-padded to three
/// coordinates and to a multiple of the vector width.
struct Centers {
  std::size_t count = 0;
  std::vector<double> x, y, z;

  Centers() = default;
  Centers(std::span<const double> rowmajor, std::size_t n, std::size_t dim);
};

/// One kernel row: out[j] = K(p, c_j) for j < centers.count.
void gaussian_row(const double *p, std::size_t dim, const Centers &centers, double inv_sigma2,
                  double *out);

/// out_i = sum_j K(p_i, c_j) w_j for each of the n_points rows of `points`.
/// `weights` is centers.count x dim row-major, `out` is n_points x dim.
void kernel_combine(const double *points, std::size_t n_points, std::size_t dim,
                    const Centers &centers, const double *weights, double inv_sigma2,
                    double *out);

/// Momentum rate of the geodesic equations:
/// out_k = sum_j (2 inv_sigma2) K(c_k, c_j) (mu_k . mu_j) (c_k - c_j).
void momentum_rate(const double *c, const double *mu, std::size_t n, std::size_t dim,
                   const Centers &centers, double inv_sigma2, double *out);

/// Direct access to one backend's implementation, for equivalence testing.
struct KernelOps {
  void (*gaussian_row)(const double *, std::size_t, const Centers &, double, double *);
  void (*kernel_combine)(const double *, std::size_t, std::size_t, const Centers &,
                         const double *, double, double *);
  void (*momentum_rate)(const double *, const double *, std::size_t, std::size_t,
                        const Centers &, double, double *);
};

const KernelOps &ops_for(Backend b);

namespace detail {
const KernelOps &scalar_ops();
#if defined(SYMLADDER_HAVE_AVX2)
const KernelOps &avx2_ops();
#endif
} // namespace detail

} // namespace symladder::simd
