#include "flow.hpp"

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "symladder/simd/kernel_ops.hpp"

namespace symladder::detail {

namespace {

simd::Centers centers_of(const Matrix &c) {
  return simd::Centers(std::span(c.data(), c.size()), c.rows(), c.cols());
}

} // namespace

FlowState rates(const FlowState &y, const KernelParams &k) {
  const auto n = static_cast<std::size_t>(y.c.rows());
  const auto dim = static_cast<std::size_t>(y.c.cols());
  const double s = k.inv_sigma2();
  const simd::Centers centers = centers_of(y.c);

  FlowState r;
  r.c.resize(y.c.rows(), y.c.cols());
  r.mu.resize(y.mu.rows(), y.mu.cols());
  r.x.resize(y.x.rows(), y.x.cols());
  simd::kernel_combine(y.c.data(), n, dim, centers, y.mu.data(), s, r.c.data());
  simd::momentum_rate(y.c.data(), y.mu.data(), n, dim, centers, s, r.mu.data());
  if (y.x.rows() > 0)
    simd::kernel_combine(y.x.data(), y.x.rows(), dim, centers, y.mu.data(), s, r.x.data());
  return r;
}

FlowState step(const FlowState &y, double h, Scheme scheme, const KernelParams &k,
               FlowState *mid) {
  const FlowState k1 = rates(y, k);
  if (scheme == Scheme::euler)
    return FlowState{y.c + h * k1.c, y.mu + h * k1.mu, y.x + h * k1.x};

  const double half = 0.5 * h;
  FlowState ym{y.c + half * k1.c, y.mu + half * k1.mu, y.x + half * k1.x};
  const FlowState k2 = rates(ym, k);
  FlowState next{y.c + h * k2.c, y.mu + h * k2.mu, y.x + h * k2.x};
  if (mid)
    *mid = std::move(ym);
  return next;
}

// Derivatives of the three rate terms, written per ordered pair (k, j) with
// d = c_k - c_j and K = K(c_k, c_j), dK/dc_k = -2 s d K:
//   dc_k/dt  contributes  K (xi_c_k . mu_j)
//   dmu_k/dt contributes  2 s K (mu_k . mu_j) (xi_mu_k . d)
//   dx_i/dt  contributes  K(x_i, c_j) (xi_x_i . mu_j)
template <int D>
void rates_vjp_fixed(const FlowState &y, const FlowState &cot, const KernelParams &k, FlowState &acc) {
  const std::size_t n = static_cast<std::size_t>(y.c.rows());
  const std::size_t m = static_cast<std::size_t>(y.x.rows());
  const double s = k.inv_sigma2();
  const double two_s = 2.0 * s;
  const simd::Centers centers = centers_of(y.c);
  std::vector<double> krow(n);

  const double *c = y.c.data();
  const double *mu = y.mu.data();
  const double *xi_c = cot.c.data();
  const double *xi_mu = cot.mu.data();
  double *g_c = acc.c.data();
  double *g_mu = acc.mu.data();

  for (std::size_t a = 0; a < n; ++a) {
    simd::gaussian_row(c + a * D, D, centers, s, krow.data());
    const double *ca = c + a * D;
    const double *mua = mu + a * D;
    const double *xca = xi_c + a * D;
    const double *xma = xi_mu + a * D;
    double ga_c[D] = {}, ga_mu[D] = {};
    for (std::size_t b = 0; b < n; ++b) {
      const double kab = krow[b];
      const double *cb = c + b * D;
      const double *mub = mu + b * D;
      double d[D];
      double xc_dot_mub = 0.0, w = 0.0, p = 0.0;
      for (int q = 0; q < D; ++q) {
        d[q] = ca[q] - cb[q];
        xc_dot_mub += xca[q] * mub[q];
        w += xma[q] * d[q];
        p += mua[q] * mub[q];
      }
      const double coef_pos = -two_s * kab * xc_dot_mub;
      const double coef_w = two_s * kab * w;
      const double coef_p = two_s * p * kab;
      double *gcb = g_c + b * D;
      double *gmb = g_mu + b * D;
      for (int q = 0; q < D; ++q) {
        ga_mu[q] += coef_w * mub[q];
        gmb[q] += kab * xca[q] + coef_w * mua[q];
        const double g = coef_pos * d[q] + coef_p * (xma[q] - two_s * w * d[q]);
        ga_c[q] += g;
        gcb[q] -= g;
      }
    }
    for (int q = 0; q < D; ++q) {
      g_mu[a * D + q] += ga_mu[q];
      g_c[a * D + q] += ga_c[q];
    }
  }

  const double *x = y.x.data();
  const double *xi_x = cot.x.data();
  double *g_x = acc.x.data();
  for (std::size_t i = 0; i < m; ++i) {
    const double *xi = xi_x + i * D;
    bool zero = true;
    for (int q = 0; q < D; ++q)
      zero = zero && xi[q] == 0.0;
    if (zero)
      continue;
    const double *xp = x + i * D;
    simd::gaussian_row(xp, D, centers, s, krow.data());
    double gi[D] = {};
    for (std::size_t b = 0; b < n; ++b) {
      const double kib = krow[b];
      const double *cb = c + b * D;
      const double *mub = mu + b * D;
      double dot = 0.0;
      for (int q = 0; q < D; ++q)
        dot += xi[q] * mub[q];
      const double coef = -two_s * kib * dot;
      double *gmb = g_mu + b * D;
      double *gcb = g_c + b * D;
      for (int q = 0; q < D; ++q) {
        gmb[q] += kib * xi[q];
        const double g = coef * (xp[q] - cb[q]);
        gi[q] += g;
        gcb[q] -= g;
      }
    }
    for (int q = 0; q < D; ++q)
      g_x[i * D + q] += gi[q];
  }
}

void rates_vjp(const FlowState &y, const FlowState &cot, const KernelParams &k, FlowState &acc) {
  if (y.c.cols() == 3)
    rates_vjp_fixed<3>(y, cot, k, acc);
  else
    rates_vjp_fixed<2>(y, cot, k, acc);
}

double blowup_bound(const FlowState &y0, const KernelParams &k) {
  Matrix all(y0.c.rows() + y0.x.rows(), y0.c.cols());
  all << y0.c, y0.x;
  const double extent = std::max(bounding_box_diagonal(all), k.sigma);
  const double offset = all.size() ? all.cwiseAbs().maxCoeff() : 0.0;
  return 1e6 * extent + offset;
}

void check_state(const FlowState &y, double bound, int step_index) {
  auto fail = [&](const char *what) {
    throw NonFiniteState(std::string("geodesic integration diverged at step ") +
                         std::to_string(step_index) + ": " + what);
  };
  if (!y.mu.allFinite())
    fail("non-finite momentum");
  if (!y.c.allFinite() || !y.x.allFinite())
    fail("non-finite coordinate");
  if ((y.c.size() && y.c.cwiseAbs().maxCoeff() > bound) ||
      (y.x.size() && y.x.cwiseAbs().maxCoeff() > bound))
    fail("coordinate exceeds blow-up bound");
}

} // namespace symladder::detail
