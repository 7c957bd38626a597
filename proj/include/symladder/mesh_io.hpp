#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "symladder/mesh.hpp"

namespace symladder {

/// ASCII OFF: an `OFF` line, a counts line `N M 0`, N vertex lines and M
/// face lines `3 i j k`. Blank lines and `#` comments are ignored.
/// Always yields 3D vertices. Throws ParseError (with line number) or IoError.
Mesh load_mesh(const std::filesystem::path &path);
Mesh parse_off(std::istream &in, const std::string &source = "<stream>");

/// Writes coordinates with 17 significant digits so the file reloads to the
/// same doubles; 2D meshes get z = 0.
void save_mesh(const Mesh &mesh, const std::filesystem::path &path);
void write_off(const Mesh &mesh, std::ostream &out);

/// printf-style "%.17g".
std::string format_double(double v);

} // namespace symladder
