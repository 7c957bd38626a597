#include <doctest.h>

#include "symladder/errors.hpp"
#include "symladder/synthetic.hpp"
#include "symladder/transport.hpp"
#include "test_support.hpp"

using namespace symladder;
using namespace testing;

namespace {

RegistrationConfig small_cfg(double alpha_squared = 0.1) {
  RegistrationConfig cfg;
  cfg.sigma = 0.8;
  cfg.alpha_squared = alpha_squared;
  return cfg;
}

Mesh stretched(const Mesh &m, int axis, double f) {
  Mesh out = m;
  out.vertices.col(axis) *= f;
  return out;
}

} // namespace

TEST_CASE("transporting a zero deformation returns the template") {
  const Mesh T = ellipsoid({1.0, 0.8, 0.6}, 1);
  const Mesh S = stretched(T, 0, 1.2);
  Registrar registrar(small_cfg(), true);
  // Noise floor: what registration T -> S leaves unexplained.
  const double floor = rms(registrar(T, S).deformed.vertices, S.vertices);
  for (Variant v : {Variant::with_residual, Variant::without_residual}) {
    const PoleLadderResult r = pole_ladder(T, S, S, registrar, v);
    CHECK(rms(r.transported.vertices, T.vertices) <= floor);
  }
}

TEST_CASE("translations are transported exactly in the flat regime") {
  const Mesh T = ellipsoid({1.0, 0.8, 0.6}, 1);
  Eigen::RowVectorXd a(3), b(3);
  a << 0.3, 0.1, -0.2;
  b << -0.1, 0.2, 0.05;
  const Mesh S = translated(T, a), S2 = translated(S, b);
  RegistrationConfig cfg;
  cfg.sigma = 50.0;
  cfg.alpha_squared = 1e-3;
  for (int rungs : {1, 2}) {
    const PoleLadderResult r = pole_ladder(T, S, S2, cfg, Variant::with_residual, rungs);
    CHECK(rms(r.transported.vertices, translated(T, b).vertices) <= 1e-2 * b.norm());
  }
}

TEST_CASE("in the large-alpha limit the ladder transports vertex displacements") {
  const Mesh T = ellipsoid({1.0, 0.8, 0.6}, 1);
  const Mesh S = stretched(T, 1, 1.3);
  const Mesh S2 = stretched(S, 2, 0.9);
  const PoleLadderResult r = pole_ladder(T, S, S2, small_cfg(1e9), Variant::with_residual);
  CHECK(max_abs(r.transported.vertices - (T.vertices + S2.vertices - S.vertices)) <= 1e-6);
}

TEST_CASE("trace records rung construction") {
  const Mesh T = ellipsoid({1.0, 0.8, 0.6}, 1);
  const Mesh S = stretched(T, 0, 1.15);
  const Mesh S2 = stretched(S, 1, 0.9);
  Registrar registrar(small_cfg(), true);

  const PoleLadderResult one = pole_ladder(T, S, S2, registrar, Variant::with_residual, 1);
  REQUIRE(one.trace.rungs.size() == 1);
  CHECK(one.trace.midpoints == 1);
  CHECK(one.trace.symmetries == 2);
  REQUIRE(one.trace.subdivision.size() == 2);
  CHECK(max_abs(one.trace.subdivision.front().vertices - T.vertices) == 0.0);
  CHECK(max_abs(one.trace.subdivision.back().vertices - S.vertices) == 0.0);
  const LadderRung &rung = one.trace.rungs[0];
  CHECK(max_abs(rung.destination.vertices - T.vertices) == 0.0);
  CHECK(max_abs(rung.midpoint.vertices - midpoint(T, S, registrar, Variant::with_residual).result.vertices) == 0.0);
  CHECK(max_abs(rung.reflected.vertices -
                symmetry(rung.midpoint, S2, registrar, Variant::with_residual).result.vertices) == 0.0);
  CHECK(max_abs(rung.result.vertices - one.transported.vertices) == 0.0);
  CHECK(one.trace.all_converged() == (rung.midpoint_converged && rung.reflect_converged && rung.result_converged));

  const PoleLadderResult four = pole_ladder(T, S, S2, registrar, Variant::with_residual, 4);
  CHECK(four.trace.rungs.size() == 4);
  CHECK(four.trace.midpoints == 4);
  CHECK(four.trace.symmetries == 8);
  CHECK(four.trace.subdivision.size() == 5);
  CHECK(max_abs(four.trace.rungs.back().destination.vertices - T.vertices) == 0.0);
  // More rungs approximate the same transport.
  CHECK(rms(four.transported.vertices, one.transported.vertices) <= 0.2 * rms(S2.vertices, S.vertices));
}

TEST_CASE("rung count must be a power of two") {
  const Mesh T = ellipsoid({1.0, 0.8, 0.6}, 1);
  for (int bad : {0, 3, 6, -2})
    CHECK_THROWS_AS(pole_ladder(T, T, T, small_cfg(), Variant::with_residual, bad), InvalidArgument);
}

TEST_CASE("transported log registers the template to the result") {
  const Mesh T = ellipsoid({1.0, 0.8, 0.6}, 1);
  const Mesh S = stretched(T, 0, 1.1);
  Registrar registrar(small_cfg(), true);
  const RegistrationResult log = transported_log(T, S, registrar);
  CHECK(max_abs(log.system.momenta - registrar(T, S).system.momenta) == 0.0);
}

TEST_CASE("fanning transport of the zero vector is the identity") {
  const Mesh T = ellipsoid({1.0, 0.8, 0.6}, 1);
  const Mesh S = stretched(T, 0, 1.2);
  const RegistrationConfig cfg = small_cfg();
  const RegistrationResult base = register_meshes(S, T, cfg);
  const MomentaSet zero = MomentaSet::Zero(base.system.size(), 3);
  const ControlSystem w1 = fanning_transport_vector(base, zero, cfg);
  CHECK(max_abs(w1.momenta) == 0.0);
  CHECK(max_abs(fanning_transport(T, base, zero, cfg).vertices - T.vertices) == 0.0);
}

TEST_CASE("fanning transport preserves the H-norm and ends on the geodesic") {
  std::mt19937_64 rng(7);
  const Mesh T = ellipsoid({1.0, 0.8, 0.6}, 1);
  const Mesh S = stretched(T, 0, 1.2);
  const RegistrationConfig cfg = small_cfg();
  const RegistrationResult base = register_meshes(S, T, cfg);
  const MomentaSet w = random_matrix(rng, base.system.size(), 3, 0.1);
  const ControlSystem w1 = fanning_transport_vector(base, w, cfg);
  const GeodesicTrajectory traj = shoot(base.system, cfg.n_steps, 1.0, cfg.scheme);
  CHECK(max_abs(w1.points - traj.control_points.back()) == 0.0);
  const double n0 = oracle_hilbert(base.system.points, w, base.system.points, w, cfg.sigma);
  const double n1 = oracle_hilbert(w1.points, w1.momenta, w1.points, w1.momenta, cfg.sigma);
  CHECK(n1 == doctest::Approx(n0).epsilon(1e-10));
}

TEST_CASE("fanning along a zero geodesic leaves the vector unchanged") {
  std::mt19937_64 rng(8);
  const Mesh T = ellipsoid({1.0, 0.8, 0.6}, 1);
  const RegistrationConfig cfg = small_cfg();
  const RegistrationResult base = register_meshes(T, T, cfg);
  const MomentaSet w = random_matrix(rng, base.system.size(), 3, 0.1);
  const ControlSystem w1 = fanning_transport_vector(base, w, cfg);
  CHECK(max_abs(w1.momenta - w) <= 1e-8 * max_abs(w));
}

TEST_CASE("fanning transports translations unchanged in the flat regime") {
  const Mesh T = ellipsoid({1.0, 0.8, 0.6}, 1);
  Eigen::RowVectorXd a(3), b(3);
  a << 0.3, 0.1, -0.2;
  b << -0.1, 0.2, 0.05;
  RegistrationConfig cfg;
  cfg.sigma = 50.0;
  cfg.alpha_squared = 1e-3;
  const Mesh S = translated(T, a);
  const RegistrationResult base = register_meshes(S, T, cfg);
  RegistrationConfig frozen = cfg;
  frozen.freeze_control_points = true;
  const ControlSystem init{base.system.points, MomentaSet::Zero(base.system.size(), 3), base.system.kernel};
  const RegistrationResult dw = register_meshes(S, translated(S, b), frozen, init);
  const Mesh moved = fanning_transport(T, base, dw.system.momenta, cfg);
  CHECK(rms(moved.vertices, translated(T, b).vertices) <= 1e-2 * b.norm());
}
