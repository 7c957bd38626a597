#include "symladder/strain.hpp"

#include <cmath>
#include <string>

#include <Eigen/Geometry>

namespace symladder {

std::vector<double> triangle_areas(const Mesh &mesh) {
  std::vector<double> areas(static_cast<std::size_t>(mesh.faces.rows()));
  const auto &v = mesh.vertices;
  for (Eigen::Index f = 0; f < mesh.faces.rows(); ++f) {
    const auto p0 = v.row(mesh.faces(f, 0));
    const Eigen::RowVectorXd e1 = v.row(mesh.faces(f, 1)) - p0;
    const Eigen::RowVectorXd e2 = v.row(mesh.faces(f, 2)) - p0;
    double twice;
    if (mesh.dim() == 3) {
      const Eigen::Vector3d a(e1[0], e1[1], e1[2]), b(e2[0], e2[1], e2[2]);
      twice = a.cross(b).norm();
    } else {
      twice = std::abs(e1[0] * e2[1] - e1[1] * e2[0]);
    }
    areas[static_cast<std::size_t>(f)] = 0.5 * twice;
  }
  return areas;
}

std::vector<double> local_area_strain(const Mesh &a, const Mesh &b) {
  check_corresponded(a, b, "local_area_strain");
  if (a.faces != b.faces)
    throw ShapeMismatch("local_area_strain: meshes do not share connectivity");
  a.validate();

  const std::vector<double> area_a = triangle_areas(a);
  const std::vector<double> area_b = triangle_areas(b);
  const double scale = bounding_box_diagonal(a.vertices);
  const double tiny = 1e-12 * scale * scale;

  const auto n = static_cast<std::size_t>(a.size());
  std::vector<double> sum(n, 0.0);
  std::vector<int> used(n, 0);
  for (std::size_t f = 0; f < area_a.size(); ++f) {
    if (area_a[f] < tiny)
      continue;
    const double strain = (area_a[f] - area_b[f]) / area_a[f];
    for (int c = 0; c < 3; ++c) {
      const auto i = static_cast<std::size_t>(a.faces(static_cast<Eigen::Index>(f), c));
      sum[i] += strain;
      ++used[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (used[i] == 0)
      throw DegenerateNeighborhood("local_area_strain: vertex " + std::to_string(i) +
                                       " has no non-degenerate incident face",
                                   i);
    sum[i] /= used[i];
  }
  return sum;
}

double area_strain_error(const std::vector<double> &las1, const std::vector<double> &las2) {
  if (las1.size() != las2.size())
    throw LengthMismatch("area_strain_error: strain maps have " + std::to_string(las1.size()) +
                         " and " + std::to_string(las2.size()) + " entries");
  double acc = 0.0;
  for (std::size_t i = 0; i < las1.size(); ++i) {
    const double d = las1[i] - las2[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

} // namespace symladder
