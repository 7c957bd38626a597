#include <doctest.h>

#include "symladder/errors.hpp"
#include "symladder/kernel.hpp"
#include "symladder/simd/kernel_ops.hpp"
#include "test_support.hpp"

using namespace symladder;
using namespace testing;
namespace simd = symladder::simd;

namespace {

struct Case {
  Matrix c, mu, x;
  double inv_sigma2;
};

Case make_case(std::mt19937_64 &rng, int n, int m, int d, double sigma) {
  return {random_matrix(rng, n, d, 1.0), random_matrix(rng, n, d, 1.0), random_matrix(rng, m, d, 1.2),
          1.0 / (sigma * sigma)};
}

simd::Centers centers(const Matrix &c) {
  return simd::Centers({c.data(), static_cast<std::size_t>(c.size())}, c.rows(), c.cols());
}

// Elementwise agreement, measured against the magnitude of the summed terms.
void check_close(const std::vector<double> &a, const std::vector<double> &b, const std::vector<double> &scale,
                 double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(std::abs(a[i] - b[i]) <= tol * std::max(scale[i], 1e-300));
}

} // namespace

TEST_CASE("scalar backend matches the brute-force oracle") {
  std::mt19937_64 rng(1);
  const auto &ops = simd::ops_for(simd::Backend::scalar);
  for (int d : {2, 3}) {
    const Case k = make_case(rng, 13, 7, d, 0.9);
    const simd::Centers cs = centers(k.c);
    std::vector<double> row(13);
    ops.gaussian_row(&k.x(2, 0), d, cs, k.inv_sigma2, row.data());
    for (int j = 0; j < 13; ++j)
      CHECK(row[j] == doctest::Approx(oracle_kernel(&k.x(2, 0), &k.c(j, 0), d, 0.9)).epsilon(1e-15));

    Matrix out(7, d);
    ops.kernel_combine(k.x.data(), 7, d, cs, k.mu.data(), k.inv_sigma2, out.data());
    CHECK(max_abs(out - oracle_velocity(k.x, k.c, k.mu, 0.9)) <= 1e-14);

    OracleState y{k.c, k.mu, Matrix::Zero(0, d)};
    Matrix rate(13, d);
    ops.momentum_rate(k.c.data(), k.mu.data(), 13, d, cs, k.inv_sigma2, rate.data());
    CHECK(max_abs(rate - oracle_rates(y, 0.9).mu) <= 1e-13);
  }
}

TEST_CASE("AVX2 backend is equivalent to the scalar reference") {
  if (!simd::backend_available(simd::Backend::avx2)) {
    MESSAGE("AVX2 backend not available on this machine; skipping");
    return;
  }
  const auto &ref = simd::ops_for(simd::Backend::scalar);
  const auto &vec = simd::ops_for(simd::Backend::avx2);
  std::mt19937_64 rng(2);
  // Sizes straddle the 4-lane width so every tail length is exercised.
  for (int n = 1; n <= 19; ++n)
    for (int d : {2, 3}) {
      const double sigma = 0.4 + 0.1 * n;
      const int m = 1 + n % 6;
      const Case k = make_case(rng, n, m, d, sigma);
      const simd::Centers cs = centers(k.c);

      std::vector<double> r1(n), r2(n), ones(n, 1.0);
      ref.gaussian_row(&k.x(0, 0), d, cs, k.inv_sigma2, r1.data());
      vec.gaussian_row(&k.x(0, 0), d, cs, k.inv_sigma2, r2.data());
      check_close(r1, r2, r1, 1e-14);

      std::vector<double> o1(m * d), o2(m * d), scale(m * d);
      ref.kernel_combine(k.x.data(), m, d, cs, k.mu.data(), k.inv_sigma2, o1.data());
      vec.kernel_combine(k.x.data(), m, d, cs, k.mu.data(), k.inv_sigma2, o2.data());
      const Matrix abs_mu = k.mu.cwiseAbs();
      ref.kernel_combine(k.x.data(), m, d, cs, abs_mu.data(), k.inv_sigma2, scale.data());
      check_close(o1, o2, scale, 1e-13);

      std::vector<double> p1(n * d), p2(n * d);
      ref.momentum_rate(k.c.data(), k.mu.data(), n, d, cs, k.inv_sigma2, p1.data());
      vec.momentum_rate(k.c.data(), k.mu.data(), n, d, cs, k.inv_sigma2, p2.data());
      const Matrix abs_c = k.c.cwiseAbs();
      std::vector<double> bound(n * d);
      for (int i = 0; i < n; ++i)
        for (int q = 0; q < d; ++q) {
          double b = 0.0;
          for (int j = 0; j < n; ++j)
            b += 2 * k.inv_sigma2 * oracle_kernel(&k.c(i, 0), &k.c(j, 0), d, sigma) *
                 abs_mu.row(i).dot(abs_mu.row(j)) * (abs_c(i, q) + abs_c(j, q));
          bound[i * d + q] = b;
        }
      check_close(p1, p2, bound, 1e-13);
    }
}

TEST_CASE("AVX2 exponential handles underflow and exact zero distance") {
  if (!simd::backend_available(simd::Backend::avx2))
    return;
  const auto &vec = simd::ops_for(simd::Backend::avx2);
  Matrix c(6, 3);
  c << 0, 0, 0, 1, 0, 0, 30, 0, 0, 0, 40, 0, 0, 0, 1e3, 0.5, 0.5, 0.5;
  const simd::Centers cs = centers(c);
  std::vector<double> row(6);
  const double p[3] = {0, 0, 0};
  vec.gaussian_row(p, 3, cs, 1.0, row.data());
  CHECK(row[0] == 1.0);
  CHECK(row[1] == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(row[2] == 0.0);
  CHECK(row[3] == 0.0);
  CHECK(row[4] == 0.0);
  CHECK(row[5] == doctest::Approx(std::exp(-0.75)).epsilon(1e-15));
  for (double v : row)
    CHECK(std::isfinite(v));
}

TEST_CASE("backend selection") {
  const simd::Backend initial = simd::active_backend();
  CHECK(initial == simd::detect_backend());
  CHECK(simd::backend_available(simd::Backend::scalar));
  CHECK(simd::backend_name(simd::Backend::scalar) == "scalar");
  CHECK(simd::backend_name(simd::Backend::avx2) == "avx2");

  std::mt19937_64 rng(4);
  const Matrix c = random_matrix(rng, 11, 3, 1.0), mu = random_matrix(rng, 11, 3, 1.0);
  const Matrix x = random_matrix(rng, 5, 3, 1.0);
  const KernelParams p(1.1);

  simd::set_backend(simd::Backend::scalar);
  CHECK(simd::active_backend() == simd::Backend::scalar);
  const Matrix vs = eval_velocity(x, c, mu, p);
  if (simd::backend_available(simd::Backend::avx2)) {
    simd::set_backend(simd::Backend::avx2);
    const Matrix va = eval_velocity(x, c, mu, p);
    CHECK(max_abs(va - vs) <= 1e-13 * max_abs(vs));
  } else {
    CHECK_THROWS_AS(simd::set_backend(simd::Backend::avx2), InvalidArgument);
  }
  simd::set_backend(initial);
}

TEST_CASE("identical evaluation points give bit-identical results") {
  std::mt19937_64 rng(8);
  const Matrix c = random_matrix(rng, 23, 3, 1.0), mu = random_matrix(rng, 23, 3, 1.0);
  Matrix x = random_matrix(rng, 4, 3, 1.0);
  x.row(3) = x.row(1);
  const Matrix v = eval_velocity(x, c, mu, KernelParams(0.9));
  CHECK((v.row(3).array() == v.row(1).array()).all());
}
