#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "symladder/errors.hpp"
#include "symladder/kernel.hpp"
#include "test_support.hpp"

using namespace symladder;
using namespace testing;

TEST_CASE("kernel has no factor two and is symmetric") {
  const KernelParams p(2.0);
  Point x(3), y(3);
  x << 1.0, 0.0, 0.0;
  y << 0.0, 2.0, -1.0;
  CHECK(eval_kernel(x, y, p) == doctest::Approx(std::exp(-6.0 / 4.0)).epsilon(1e-15));
  CHECK(eval_kernel(x, y, p) == eval_kernel(y, x, p));
  CHECK(eval_kernel(x, x, p) == 1.0);
}

TEST_CASE("kernel gradient matches central differences") {
  std::mt19937_64 rng(11);
  const KernelParams p(1.3);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = trial % 2 ? 3 : 2;
    const Point x = random_matrix(rng, 1, d, 1.0);
    const Point y = random_matrix(rng, 1, d, 1.0);
    const Point g = grad1_kernel(x, y, p);
    for (int q = 0; q < d; ++q) {
      const double h = 1e-6;
      Point xp = x, xm = x;
      xp(q) += h;
      xm(q) -= h;
      const double fd = (eval_kernel(xp, y, p) - eval_kernel(xm, y, p)) / (2 * h);
      CHECK(std::abs(fd - g(q)) <= 1e-8);
    }
  }
}

TEST_CASE("velocity and Hilbert product match double-loop oracles") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = trial % 2 ? 3 : 2;
    const double sigma = std::uniform_real_distribution<double>(0.3, 3.0)(rng);
    const int n = 1 + trial % 17, n2 = 1 + (trial * 7) % 13, m = 1 + (trial * 3) % 11;
    const Matrix c = random_matrix(rng, n, d, 1.5), mu = random_matrix(rng, n, d, 1.0);
    const Matrix c2 = random_matrix(rng, n2, d, 1.5), mu2 = random_matrix(rng, n2, d, 1.0);
    const Matrix x = random_matrix(rng, m, d, 2.0);
    const KernelParams p(sigma);

    const Matrix v = eval_velocity(x, c, mu, p);
    const Matrix vo = oracle_velocity(x, c, mu, sigma);
    CHECK(max_abs(v - vo) <= 1e-12 * std::max(1.0, max_abs(vo)));
    const Point v0 = eval_velocity_at(x.row(0), c, mu, p);
    CHECK(max_abs(v0 - vo.row(0)) <= 1e-12 * std::max(1.0, max_abs(vo)));

    const double h = hilbert_product(c, mu, c2, mu2, p);
    const double ho = oracle_hilbert(c, mu, c2, mu2, sigma);
    // Relative to the magnitude of the summed terms, which bounds cancellation.
    const double terms = oracle_hilbert(c, mu.cwiseAbs(), c2, mu2.cwiseAbs(), sigma);
    CHECK(std::abs(h - ho) <= 1e-12 * std::max(terms, 1e-300));
  }
}

TEST_CASE("Hilbert product is symmetric, bilinear and positive") {
  std::mt19937_64 rng(9);
  const KernelParams p(0.8);
  const Matrix c = random_matrix(rng, 9, 3, 1.0), mu = random_matrix(rng, 9, 3, 1.0);
  const Matrix c2 = random_matrix(rng, 6, 3, 1.0), mu2 = random_matrix(rng, 6, 3, 1.0);
  const Matrix nu = random_matrix(rng, 9, 3, 1.0);
  CHECK(hilbert_product(c, mu, c2, mu2, p) == doctest::Approx(hilbert_product(c2, mu2, c, mu, p)).epsilon(1e-13));
  CHECK(hilbert_product(c, 2.0 * mu - 3.0 * nu, c2, mu2, p) ==
        doctest::Approx(2.0 * hilbert_product(c, mu, c2, mu2, p) - 3.0 * hilbert_product(c, nu, c2, mu2, p))
            .epsilon(1e-12));
  CHECK(hilbert_product(c, mu, c, mu, p) > 0.0);
  CHECK(hilbert_product(c, Matrix::Zero(9, 3), c2, mu2, p) == 0.0);
}

TEST_CASE("kernel matrix is the symmetric positive semi-definite Gram matrix") {
  std::mt19937_64 rng(21);
  const Matrix c = random_matrix(rng, 30, 3, 1.0);
  const KernelParams p(0.7);
  const Matrix k = kernel_matrix(c, c, p);
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.rows(); ++j)
      CHECK(k(i, j) == doctest::Approx(oracle_kernel(&c(i, 0), &c(j, 0), 3, 0.7)).epsilon(1e-14));
  CHECK(max_abs(k - k.transpose()) == 0.0);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12 * es.eigenvalues().maxCoeff());
}

TEST_CASE("kernel preconditions") {
  CHECK_THROWS_AS(KernelParams(0.0), InvalidArgument);
  CHECK_THROWS_AS(KernelParams(-1.0), InvalidArgument);
  CHECK_THROWS_AS(KernelParams(std::nan("")), InvalidArgument);
  const KernelParams p(1.0);
  const Matrix c = Matrix::Zero(3, 3), mu = Matrix::Zero(2, 3);
  CHECK_THROWS_AS(eval_velocity(Matrix(Matrix::Zero(1, 3)), c, mu, p), ShapeMismatch);
  CHECK_THROWS_AS(eval_velocity(Matrix(Matrix::Zero(1, 2)), c, Matrix(Matrix::Zero(3, 3)), p), ShapeMismatch);
  CHECK_THROWS_AS(hilbert_product(c, Matrix::Zero(3, 3), Matrix::Zero(2, 2), Matrix::Zero(2, 2), p),
                  ShapeMismatch);
  Matrix bad = Matrix::Zero(2, 3);
  bad(1, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(eval_velocity(Matrix(Matrix::Zero(1, 3)), bad, Matrix(Matrix::Zero(2, 3)), p), InvalidArgument);
}
