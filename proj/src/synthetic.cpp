#include "symladder/synthetic.hpp"

#include <cmath>
#include <map>
#include <random>
#include <utility>

namespace symladder {

Mesh icosphere(int subdivisions) {
  if (subdivisions < 0)
    throw InvalidArgument("icosphere: subdivisions must be non-negative");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> verts = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
      {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto &v : verts)
    v.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> cache;
    auto middle = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      if (auto it = cache.find(key); it != cache.end())
        return it->second;
      verts.push_back((verts[a] + verts[b]).normalized());
      const int idx = static_cast<int>(verts.size()) - 1;
      cache.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto &f : faces) {
      const int a = middle(f[0], f[1]);
      const int b = middle(f[1], f[2]);
      const int c = middle(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    faces = std::move(next);
  }

  Mesh mesh;
  mesh.vertices.resize(static_cast<Eigen::Index>(verts.size()), 3);
  for (std::size_t i = 0; i < verts.size(); ++i)
    mesh.vertices.row(static_cast<Eigen::Index>(i)) = verts[i].transpose();
  mesh.faces.resize(static_cast<Eigen::Index>(faces.size()), 3);
  for (std::size_t f = 0; f < faces.size(); ++f)
    mesh.faces.row(static_cast<Eigen::Index>(f)) << faces[f][0], faces[f][1], faces[f][2];
  return mesh;
}

Mesh ellipsoid(const std::array<double, 3> &radii, int subdivisions) {
  Mesh m = icosphere(subdivisions);
  for (int a = 0; a < 3; ++a)
    m.vertices.col(a) *= radii[a];
  return m;
}

namespace {

Mesh random_geodesic(const Mesh &shape, double sigma, double scale, std::mt19937_64 &rng) {
  RegistrationConfig grid_cfg;
  grid_cfg.sigma = sigma;
  const PointSet c = initial_control_points(shape, grid_cfg);
  std::normal_distribution<double> normal(0.0, 1.0);
  MomentaSet mu(c.rows(), c.cols());
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    mu.data()[i] = scale * normal(rng);
  if (scale == 0.0)
    return shape;
  return exponential(shape, ControlSystem{c, mu, KernelParams(sigma)}, kDefaultSteps, 1.0, Scheme::rk2);
}

} // namespace

Population generate_synthetic_population(std::uint64_t seed, int n_subjects,
                                         const SyntheticConfig &cfg) {
  if (n_subjects < 1)
    throw InvalidArgument("generate_synthetic_population: n_subjects must be at least 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Population pop;
  pop.templ = ellipsoid(cfg.radii, cfg.subdivisions);
  const auto &T = pop.templ;

  for (int s = 0; s < n_subjects; ++s) {
    Mesh S = random_geodesic(T, cfg.deformation_sigma, cfg.deformation_scale, rng);
    for (Eigen::Index i = 0; i < S.vertices.size(); ++i) {
      const double eps = normal(rng);
      S.vertices.data()[i] += cfg.noise_scale * eps;
    }

    // Systole: shrink towards the long (z) axis, less along it.
    Mesh S2 = S;
    const Eigen::RowVector3d centroid = S.vertices.colwise().mean();
    const double k = cfg.systolic_contraction;
    const Eigen::RowVector3d factors(1.0 - k, 1.0 - k, 1.0 - k / 3.0);
    for (Eigen::Index i = 0; k > 0.0 && i < S2.size(); ++i)
      S2.vertices.row(i) = centroid + (S.vertices.row(i) - centroid).cwiseProduct(factors);
    S2 = random_geodesic(S2, cfg.deformation_sigma, cfg.systolic_scale, rng);

    pop.subjects.push_back(SubjectPair{std::move(S), std::move(S2)});
  }
  return pop;
}

} // namespace symladder
