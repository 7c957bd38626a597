#include "symladder/mesh.hpp"

#include <string>

namespace symladder {

Mesh Mesh::with_vertices(PointSet v) const {
  if (v.rows() != vertices.rows())
    throw ShapeMismatch("with_vertices: vertex count changed");
  return Mesh{std::move(v), faces};
}

void Mesh::validate() const {
  check_point_set(vertices, "mesh");
  const int n = static_cast<int>(vertices.rows());
  for (Eigen::Index f = 0; f < faces.rows(); ++f)
    for (int a = 0; a < 3; ++a)
      if (faces(f, a) < 0 || faces(f, a) >= n)
        throw InvalidArgument("mesh face " + std::to_string(f) + " references vertex " +
                              std::to_string(faces(f, a)) + " outside [0, " +
                              std::to_string(n) + ")");
}

void check_corresponded(const Mesh &a, const Mesh &b, const char *what) {
  if (a.size() != b.size() || a.dim() != b.dim())
    throw ShapeMismatch(std::string(what) + ": meshes are not corresponded (" +
                        std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                        " vertices)");
}

double bounding_box_diagonal(const PointSet &points) {
  if (points.rows() == 0)
    return 0.0;
  return (points.colwise().maxCoeff() - points.colwise().minCoeff()).norm();
}

} // namespace symladder
