#include "symladder/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "symladder/mesh_io.hpp"

namespace symladder {

using ordered_json = nlohmann::ordered_json;

namespace {

std::ofstream open_out(const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot write '" + path.string() + "'");
  return out;
}

std::string subject_stem(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "subject_%03zu", i);
  return buf;
}

// NaN and infinities become JSON null.
ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

} // namespace

void write_text_file(const std::filesystem::path &path, const std::string &text) {
  auto out = open_out(path);
  out << text;
  if (!out)
    throw IoError("error while writing '" + path.string() + "'");
}

void write_control_system_csv(const ControlSystem &sys, std::ostream &out) {
  const bool three = sys.dim() == 3;
  out << (three ? "index,x,y,z,mx,my,mz\n" : "index,x,y,mx,my\n");
  for (Eigen::Index i = 0; i < sys.size(); ++i) {
    out << i;
    for (Eigen::Index a = 0; a < sys.dim(); ++a)
      out << ',' << format_double(sys.points(i, a));
    for (Eigen::Index a = 0; a < sys.dim(); ++a)
      out << ',' << format_double(sys.momenta(i, a));
    out << '\n';
  }
}

void save_control_system_csv(const ControlSystem &sys, const std::filesystem::path &path) {
  auto out = open_out(path);
  write_control_system_csv(sys, out);
}

ControlSystem load_control_system_csv(const std::filesystem::path &path, const KernelParams &kernel) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(path.string(), 1, "empty file");
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  int dim;
  if (line == "index,x,y,z,mx,my,mz")
    dim = 3;
  else if (line == "index,x,y,mx,my")
    dim = 2;
  else
    throw ParseError(path.string(), 1, "expected header 'index,x,y,z,mx,my,mz'");

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<double> row;
    while (std::getline(ss, field, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
      } catch (const std::exception &) {
        throw ParseError(path.string(), line_no, "malformed number '" + field + "'");
      }
    }
    if (row.size() != static_cast<std::size_t>(1 + 2 * dim))
      throw ParseError(path.string(), line_no, "wrong number of columns");
    if (row[0] != static_cast<double>(rows.size()))
      throw ParseError(path.string(), line_no, "indices must be consecutive from 0");
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw ParseError(path.string(), line_no, "no control points");
  ControlSystem sys{PointSet(rows.size(), dim), MomentaSet(rows.size(), dim), kernel};
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int a = 0; a < dim; ++a) {
      sys.points(i, a) = rows[i][1 + a];
      sys.momenta(i, a) = rows[i][1 + dim + a];
    }
  sys.validate();
  return sys;
}

void save_displacement_csv(const DisplacementField &delta, const std::filesystem::path &path) {
  auto out = open_out(path);
  out << (delta.cols() == 3 ? "index,dx,dy,dz\n" : "index,dx,dy\n");
  for (Eigen::Index i = 0; i < delta.rows(); ++i) {
    out << i;
    for (Eigen::Index a = 0; a < delta.cols(); ++a)
      out << ',' << format_double(delta(i, a));
    out << '\n';
  }
}

void save_strain_csv(const Mesh &mesh, const std::vector<double> &las, const std::filesystem::path &path) {
  if (las.size() != static_cast<std::size_t>(mesh.size()))
    throw LengthMismatch("save_strain_csv: one strain value per vertex expected");
  auto out = open_out(path);
  out << "index,x,y,z,las\n";
  for (Eigen::Index i = 0; i < mesh.size(); ++i) {
    out << i << ',' << format_double(mesh.vertices(i, 0)) << ',' << format_double(mesh.vertices(i, 1)) << ','
        << format_double(mesh.dim() == 3 ? mesh.vertices(i, 2) : 0.0) << ','
        << format_double(las[static_cast<std::size_t>(i)]) << '\n';
  }
}

void write_error_csv(const ErrorReport &report, std::ostream &out) {
  out << "subject_id,alpha_squared,variant,error_type,value,converged\n";
  for (const auto &cell : report.cells) {
    for (const ErrorType t : kAllErrorTypes) {
      const ErrorValue &e = cell[t];
      out << cell.subject << ',' << format_double(cell.alpha_squared) << ',' << variant_name(cell.variant)
          << ',' << error_type_name(t) << ',' << (e.ok ? format_double(e.value) : "nan") << ','
          << (e.converged ? "true" : "false") << '\n';
    }
  }
}

void save_error_csv(const ErrorReport &report, const std::filesystem::path &path) {
  auto out = open_out(path);
  write_error_csv(report, out);
}

std::string error_summary_json(const ErrorReport &report, const std::vector<double> &alphas,
                               const std::vector<Variant> &variants) {
  ordered_json root;
  std::size_t n_subjects = 0;
  for (const auto &c : report.cells)
    n_subjects = std::max(n_subjects, c.subject + 1);
  root["subjects"] = n_subjects;
  root["cells"] = report.cells.size();
  ordered_json groups = ordered_json::array();
  for (double a : alphas) {
    for (Variant v : variants) {
      ordered_json g;
      g["alpha_squared"] = a;
      g["variant"] = std::string(variant_name(v));
      for (ErrorType t : kAllErrorTypes) {
        const SummaryStats s = report.summary(a, v, t);
        ordered_json st;
        st["count"] = s.count;
        st["mean"] = number(s.mean);
        st["median"] = number(s.median);
        st["q1"] = number(s.q1);
        st["q3"] = number(s.q3);
        st["min"] = number(s.min);
        st["max"] = number(s.max);
        g[std::string(error_type_name(t))] = st;
      }
      groups.push_back(std::move(g));
    }
  }
  root["groups"] = std::move(groups);
  ordered_json failures = ordered_json::array();
  for (const auto &c : report.cells)
    for (ErrorType t : kAllErrorTypes)
      if (!c[t].ok)
        failures.push_back({{"subject_id", c.subject},
                            {"alpha_squared", c.alpha_squared},
                            {"variant", std::string(variant_name(c.variant))},
                            {"error_type", std::string(error_type_name(t))},
                            {"message", c[t].failure}});
  root["failures"] = std::move(failures);
  return root.dump(2) + "\n";
}

std::string registration_json(const RegistrationResult &r, const RegistrationConfig &cfg) {
  ordered_json j;
  j["alpha_squared"] = cfg.alpha_squared;
  j["sigma"] = cfg.sigma;
  j["n_steps"] = cfg.n_steps;
  j["scheme"] = std::string(scheme_name(cfg.scheme));
  j["control_points"] = r.system.size();
  j["data_term"] = number(r.data_term);
  j["regularity_term"] = number(r.regularity_term);
  j["total"] = number(r.total);
  j["velocity_norm"] = number(r.velocity_norm());
  j["residual_rms"] = number(r.delta.size() ? std::sqrt(r.delta.squaredNorm() / r.delta.rows()) : 0.0);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  return j.dump(2) + "\n";
}

void save_population(const Population &pop, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  save_mesh(pop.templ, dir / "template.off");
  for (std::size_t i = 0; i < pop.subjects.size(); ++i) {
    const std::string stem = subject_stem(i);
    save_mesh(pop.subjects[i].S, dir / (stem + "_S.off"));
    save_mesh(pop.subjects[i].S2, dir / (stem + "_S2.off"));
  }
}

Population load_population(const std::filesystem::path &dir) {
  if (!std::filesystem::is_directory(dir))
    throw IoError("population directory '" + dir.string() + "' does not exist");
  Population pop;
  pop.templ = load_mesh(dir / "template.off");
  for (std::size_t i = 0;; ++i) {
    const std::string stem = subject_stem(i);
    const auto s = dir / (stem + "_S.off");
    const auto s2 = dir / (stem + "_S2.off");
    if (!std::filesystem::exists(s))
      break;
    if (!std::filesystem::exists(s2))
      throw IoError("missing '" + s2.string() + "'");
    pop.subjects.push_back(SubjectPair{load_mesh(s), load_mesh(s2)});
  }
  return pop;
}

} // namespace symladder
