#include "symladder/mesh_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace symladder {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

struct LineReader {
  std::istream &in;
  const std::string &source;
  std::size_t line_no = 0;

  // Next line that is not blank or a comment; false at end of input, with
  // line_no then pointing one past the last line.
  bool next(std::string &line) {
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos)
        line.erase(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        return true;
    }
    ++line_no;
    return false;
  }

  [[noreturn]] void fail(const std::string &msg) const { throw ParseError(source, line_no, msg); }
};

} // namespace

Mesh parse_off(std::istream &in, const std::string &source) {
  LineReader reader{in, source};
  std::string line;
  if (!reader.next(line))
    reader.fail("empty file, expected OFF header");
  {
    std::istringstream ss(line);
    std::string magic, extra;
    ss >> magic;
    if (magic != "OFF" || (ss >> extra))
      reader.fail("malformed header, expected 'OFF'");
  }

  if (!reader.next(line))
    reader.fail("missing counts line");
  long n_vertices = -1, n_faces = -1, n_edges = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> n_vertices >> n_faces) || n_vertices < 1 || n_faces < 0)
      reader.fail("malformed counts line, expected 'N M 0' with N >= 1");
    ss >> n_edges;
  }

  Mesh mesh;
  mesh.vertices.resize(n_vertices, 3);
  for (long i = 0; i < n_vertices; ++i) {
    if (!reader.next(line))
      reader.fail("unexpected end of file in vertex list");
    std::istringstream ss(line);
    double x, y, z;
    std::string extra;
    if (!(ss >> x >> y >> z) || (ss >> extra))
      reader.fail("malformed vertex line, expected three coordinates");
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
      reader.fail("non-finite vertex coordinate");
    mesh.vertices.row(i) << x, y, z;
  }

  mesh.faces.resize(n_faces, 3);
  for (long f = 0; f < n_faces; ++f) {
    if (!reader.next(line))
      reader.fail("unexpected end of file in face list");
    std::istringstream ss(line);
    long count;
    long idx[3];
    std::string extra;
    if (!(ss >> count) || count != 3)
      reader.fail("only triangular faces ('3 i j k') are supported");
    if (!(ss >> idx[0] >> idx[1] >> idx[2]) || (ss >> extra))
      reader.fail("malformed face line");
    for (long v : idx) {
      if (v < 0 || v >= n_vertices)
        reader.fail("face index " + std::to_string(v) + " out of range [0, " +
                    std::to_string(n_vertices) + ")");
    }
    mesh.faces.row(f) << static_cast<int>(idx[0]), static_cast<int>(idx[1]), static_cast<int>(idx[2]);
  }
  return mesh;
}

Mesh load_mesh(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open mesh file '" + path.string() + "'");
  return parse_off(in, path.string());
}

void write_off(const Mesh &mesh, std::ostream &out) {
  mesh.validate();
  out << "OFF\n" << mesh.size() << ' ' << mesh.faces.rows() << " 0\n";
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    out << format_double(mesh.vertices(i, 0)) << ' ' << format_double(mesh.vertices(i, 1)) << ' '
        << format_double(mesh.dim() == 3 ? mesh.vertices(i, 2) : 0.0) << '\n';
  }
  for (Eigen::Index f = 0; f < mesh.faces.rows(); ++f)
    out << "3 " << mesh.faces(f, 0) << ' ' << mesh.faces(f, 1) << ' ' << mesh.faces(f, 2) << '\n';
}

void save_mesh(const Mesh &mesh, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot write mesh file '" + path.string() + "'");
  write_off(mesh, out);
  if (!out)
    throw IoError("error while writing '" + path.string() + "'");
}

} // namespace symladder
