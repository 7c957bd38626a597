// AVX2 + FMA variants of the Gaussian-kernel loops.
//
// Compiled with -mavx2 -mfma; only reached through the runtime dispatch
// after a cpuid check. Vectorized over centres, 4 doubles per register.

#include <immintrin.h>

#include <cstdint>
#include <vector>

#include "symladder/simd/kernel_ops.hpp"

namespace symladder::simd {

namespace {

// exp(x) for x <= 0. Range reduction x = n ln2 + r, |r| <= ln2 / 2, then the
// Cephes rational approximation exp(r) = 1 + 2 r P(r^2) / (Q(r^2) - r P(r^2)).
// Arguments below -708 (results under DBL_MIN) flush to zero.
inline __m256d exp_nonpositive(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125E-1);
  const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212E-6);
  const __m256d lower = _mm256_set1_pd(-708.0);

  const __m256d underflow = _mm256_cmp_pd(x, lower, _CMP_LT_OQ);
  x = _mm256_max_pd(x, lower);

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);
  const __m256d rr = _mm256_mul_pd(r, r);

  __m256d p = _mm256_set1_pd(1.26177193074810590878E-4);
  p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(3.02994407707441961300E-2));
  p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(9.99999999999999999910E-1));
  p = _mm256_mul_pd(p, r);

  __m256d q = _mm256_set1_pd(3.00198505138664455042E-6);
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.52448340349684104192E-3));
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.27265548208155028766E-1));
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.00000000000000000009E0));

  const __m256d ratio = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  const __m256d er = _mm256_fmadd_pd(_mm256_set1_pd(2.0), ratio, _mm256_set1_pd(1.0));

  const __m128i n32 = _mm256_cvtpd_epi32(n);
  __m256i bits = _mm256_cvtepi32_epi64(n32);
  bits = _mm256_add_epi64(bits, _mm256_set1_epi64x(1023));
  bits = _mm256_slli_epi64(bits, 52);
  const __m256d result = _mm256_mul_pd(er, _mm256_castsi256_pd(bits));
  return _mm256_andnot_pd(underflow, result);
}

// Lane order is fixed: (l0 + l1) + (l2 + l3).
inline double hsum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

inline __m256d kernel_block(__m256d px, __m256d py, __m256d pz, const Centers &c, std::size_t j,
                            __m256d neg_s) {
  const __m256d dx = _mm256_sub_pd(px, _mm256_loadu_pd(&c.x[j]));
  const __m256d dy = _mm256_sub_pd(py, _mm256_loadu_pd(&c.y[j]));
  const __m256d dz = _mm256_sub_pd(pz, _mm256_loadu_pd(&c.z[j]));
  __m256d d2 = _mm256_mul_pd(dx, dx);
  d2 = _mm256_fmadd_pd(dy, dy, d2);
  d2 = _mm256_fmadd_pd(dz, dz, d2);
  return exp_nonpositive(_mm256_mul_pd(d2, neg_s));
}

// Zero-padded structure-of-arrays copy of a row-major weight block.
struct PaddedSoA {
  std::vector<double> a[3];
  PaddedSoA(const double *rowmajor, std::size_t n, std::size_t padded, std::size_t dim) {
    for (auto &v : a)
      v.assign(padded, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t d = 0; d < dim; ++d)
        a[d][j] = rowmajor[j * dim + d];
  }
};

void gaussian_row_avx2(const double *p, std::size_t dim, const Centers &centers,
                       double inv_sigma2, double *out) {
  const __m256d px = _mm256_set1_pd(p[0]);
  const __m256d py = _mm256_set1_pd(p[1]);
  const __m256d pz = _mm256_set1_pd(dim == 3 ? p[2] : 0.0);
  const __m256d neg_s = _mm256_set1_pd(-inv_sigma2);
  const std::size_t n = centers.count;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4)
    _mm256_storeu_pd(out + j, kernel_block(px, py, pz, centers, j, neg_s));
  if (j < n) {
    alignas(32) double tail[4];
    _mm256_store_pd(tail, kernel_block(px, py, pz, centers, j, neg_s));
    for (std::size_t t = 0; j + t < n; ++t)
      out[j + t] = tail[t];
  }
}

void kernel_combine_avx2(const double *points, std::size_t n_points, std::size_t dim,
                         const Centers &centers, const double *weights, double inv_sigma2,
                         double *out) {
  const std::size_t padded = centers.x.size();
  const PaddedSoA w(weights, centers.count, padded, dim);
  const __m256d neg_s = _mm256_set1_pd(-inv_sigma2);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double *p = points + i * dim;
    const __m256d px = _mm256_set1_pd(p[0]);
    const __m256d py = _mm256_set1_pd(p[1]);
    const __m256d pz = _mm256_set1_pd(dim == 3 ? p[2] : 0.0);
    __m256d ax = _mm256_setzero_pd(), ay = _mm256_setzero_pd(), az = _mm256_setzero_pd();
    for (std::size_t j = 0; j < padded; j += 4) {
      const __m256d k = kernel_block(px, py, pz, centers, j, neg_s);
      ax = _mm256_fmadd_pd(k, _mm256_loadu_pd(&w.a[0][j]), ax);
      ay = _mm256_fmadd_pd(k, _mm256_loadu_pd(&w.a[1][j]), ay);
      az = _mm256_fmadd_pd(k, _mm256_loadu_pd(&w.a[2][j]), az);
    }
    out[i * dim] = hsum(ax);
    out[i * dim + 1] = hsum(ay);
    if (dim == 3)
      out[i * dim + 2] = hsum(az);
  }
}

void momentum_rate_avx2(const double *c, const double *mu, std::size_t n, std::size_t dim,
                        const Centers &centers, double inv_sigma2, double *out) {
  const std::size_t padded = centers.x.size();
  const PaddedSoA m(mu, centers.count, padded, dim);
  const __m256d neg_s = _mm256_set1_pd(-inv_sigma2);
  const double two_s = 2.0 * inv_sigma2;
  for (std::size_t k = 0; k < n; ++k) {
    const double *ck = c + k * dim;
    const double *mk = mu + k * dim;
    const __m256d px = _mm256_set1_pd(ck[0]);
    const __m256d py = _mm256_set1_pd(ck[1]);
    const __m256d pz = _mm256_set1_pd(dim == 3 ? ck[2] : 0.0);
    const __m256d mx = _mm256_set1_pd(mk[0]);
    const __m256d my = _mm256_set1_pd(mk[1]);
    const __m256d mz = _mm256_set1_pd(dim == 3 ? mk[2] : 0.0);
    __m256d ax = _mm256_setzero_pd(), ay = _mm256_setzero_pd(), az = _mm256_setzero_pd();
    for (std::size_t j = 0; j < padded; j += 4) {
      const __m256d kern = kernel_block(px, py, pz, centers, j, neg_s);
      __m256d dot = _mm256_mul_pd(mx, _mm256_loadu_pd(&m.a[0][j]));
      dot = _mm256_fmadd_pd(my, _mm256_loadu_pd(&m.a[1][j]), dot);
      dot = _mm256_fmadd_pd(mz, _mm256_loadu_pd(&m.a[2][j]), dot);
      const __m256d scale = _mm256_mul_pd(kern, dot);
      ax = _mm256_fmadd_pd(scale, _mm256_sub_pd(px, _mm256_loadu_pd(&centers.x[j])), ax);
      ay = _mm256_fmadd_pd(scale, _mm256_sub_pd(py, _mm256_loadu_pd(&centers.y[j])), ay);
      az = _mm256_fmadd_pd(scale, _mm256_sub_pd(pz, _mm256_loadu_pd(&centers.z[j])), az);
    }
    out[k * dim] = two_s * hsum(ax);
    out[k * dim + 1] = two_s * hsum(ay);
    if (dim == 3)
      out[k * dim + 2] = two_s * hsum(az);
  }
}

} // namespace

namespace detail {
const KernelOps &avx2_ops() {
  static const KernelOps ops{gaussian_row_avx2, kernel_combine_avx2, momentum_rate_avx2};
  return ops;
}
} // namespace detail

} // namespace symladder::simd
