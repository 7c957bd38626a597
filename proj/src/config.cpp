#include "symladder/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "symladder/mesh_io.hpp"

namespace symladder {

void ExperimentConfig::validate() const {
  if (alpha_squared.empty())
    throw InvalidArgument("alpha_squared list must not be empty");
  for (double a : alpha_squared)
    if (!(a > 0.0))
      throw InvalidArgument("alpha_squared values must be positive");
  if (variants.empty())
    throw InvalidArgument("variants list must not be empty");
  if (n_rungs < 1 || (n_rungs & (n_rungs - 1)) != 0)
    throw InvalidArgument("n_rungs must be a power of two");
  registration(alpha_squared.front()).validate();
  const auto &s = synthetic;
  if (s.n_subjects < 1 || s.subdivisions < 0 || s.subdivisions > 6)
    throw InvalidArgument("synthetic: n_subjects >= 1 and subdivisions in [0, 6] required");
  for (double r : s.radii)
    if (!(r > 0.0))
      throw InvalidArgument("synthetic: radii must be positive");
  if (!(s.deformation_sigma > 0.0) || s.deformation_scale < 0.0 || s.noise_scale < 0.0 ||
      s.systolic_scale < 0.0 || s.systolic_contraction < 0.0 || s.systolic_contraction >= 1.0)
    throw InvalidArgument("synthetic: scales must be non-negative, contraction in [0, 1)");
}

RegistrationConfig ExperimentConfig::registration(double a2) const {
  RegistrationConfig r;
  r.alpha_squared = a2;
  r.sigma = sigma;
  r.n_steps = n_steps;
  r.scheme = scheme;
  r.control_point_spacing = control_point_spacing;
  r.max_iterations = max_iterations;
  r.convergence_tol = convergence_tol;
  r.initial_step = initial_step;
  r.freeze_control_points = freeze_control_points;
  return r;
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string &v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(v);
  while (std::getline(ss, item, ','))
    out.push_back(trim(item));
  return out;
}

struct ValueError {
  std::string msg;
};

double to_double(const std::string &s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
    throw ValueError{"expected a number, got '" + s + "'"};
  return v;
}

long long to_integer(const std::string &s) {
  long long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ValueError{"expected an integer, got '" + s + "'"};
  return v;
}

int to_int(const std::string &s) { return static_cast<int>(to_integer(s)); }

bool to_bool(const std::string &s) {
  std::string l = s;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
  if (l == "true" || l == "yes" || l == "1" || l == "on")
    return true;
  if (l == "false" || l == "no" || l == "0" || l == "off")
    return false;
  throw ValueError{"expected a boolean, got '" + s + "'"};
}

using Setter = std::function<void(ExperimentConfig &, const std::string &)>;

const std::map<std::string, Setter> &setters() {
  static const std::map<std::string, Setter> table = {
      {"sigma", [](auto &c, const auto &v) { c.sigma = to_double(v); }},
      {"alpha_squared",
       [](auto &c, const auto &v) {
         c.alpha_squared.clear();
         for (const auto &item : split_list(v))
           c.alpha_squared.push_back(to_double(item));
       }},
      {"n_steps", [](auto &c, const auto &v) { c.n_steps = to_int(v); }},
      {"scheme",
       [](auto &c, const auto &v) {
         try {
           c.scheme = parse_scheme(v);
         } catch (const InvalidArgument &e) {
           throw ValueError{e.what()};
         }
       }},
      {"control_point_spacing", [](auto &c, const auto &v) { c.control_point_spacing = to_double(v); }},
      {"max_iterations", [](auto &c, const auto &v) { c.max_iterations = to_int(v); }},
      {"convergence_tol", [](auto &c, const auto &v) { c.convergence_tol = to_double(v); }},
      {"initial_step", [](auto &c, const auto &v) { c.initial_step = to_double(v); }},
      {"freeze_control_points", [](auto &c, const auto &v) { c.freeze_control_points = to_bool(v); }},
      {"variants",
       [](auto &c, const auto &v) {
         c.variants.clear();
         for (const auto &item : split_list(v)) {
           try {
             c.variants.push_back(parse_variant(item));
           } catch (const InvalidArgument &e) {
             throw ValueError{e.what()};
           }
         }
       }},
      {"n_rungs", [](auto &c, const auto &v) { c.n_rungs = to_int(v); }},
      {"seed",
       [](auto &c, const auto &v) {
         const long long s = to_integer(v);
         if (s < 0)
           throw ValueError{"seed must be non-negative"};
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"output_dir", [](auto &c, const auto &v) { c.output_dir = v; }},
      {"synthetic.n_subjects", [](auto &c, const auto &v) { c.synthetic.n_subjects = to_int(v); }},
      {"synthetic.subdivisions", [](auto &c, const auto &v) { c.synthetic.subdivisions = to_int(v); }},
      {"synthetic.radii",
       [](auto &c, const auto &v) {
         const auto items = split_list(v);
         if (items.size() != 3)
           throw ValueError{"synthetic.radii needs three values"};
         for (int i = 0; i < 3; ++i)
           c.synthetic.radii[i] = to_double(items[i]);
       }},
      {"synthetic.deformation_sigma", [](auto &c, const auto &v) { c.synthetic.deformation_sigma = to_double(v); }},
      {"synthetic.deformation_scale", [](auto &c, const auto &v) { c.synthetic.deformation_scale = to_double(v); }},
      {"synthetic.noise_scale", [](auto &c, const auto &v) { c.synthetic.noise_scale = to_double(v); }},
      {"synthetic.systolic_contraction",
       [](auto &c, const auto &v) { c.synthetic.systolic_contraction = to_double(v); }},
      {"synthetic.systolic_scale", [](auto &c, const auto &v) { c.synthetic.systolic_scale = to_double(v); }},
  };
  return table;
}

} // namespace

ExperimentConfig parse_config(const std::string &text, const std::string &source) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(source, line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end())
      throw ParseError(source, line_no, "unknown key '" + key + "'");
    try {
      it->second(cfg, value);
    } catch (const ValueError &e) {
      throw ParseError(source, line_no, key + ": " + e.msg);
    }
    // Defaults are valid, so the first line that breaks validity is the culprit.
    try {
      cfg.validate();
    } catch (const InvalidArgument &e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string serialize_config(const ExperimentConfig &cfg) {
  auto list = [](const auto &values, auto fmt) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i)
        s += ", ";
      s += fmt(values[i]);
    }
    return s;
  };
  const auto &syn = cfg.synthetic;
  std::ostringstream out;
  out << "sigma = " << format_double(cfg.sigma) << '\n'
      << "alpha_squared = " << list(cfg.alpha_squared, format_double) << '\n'
      << "n_steps = " << cfg.n_steps << '\n'
      << "scheme = " << scheme_name(cfg.scheme) << '\n'
      << "control_point_spacing = " << format_double(cfg.control_point_spacing) << '\n'
      << "max_iterations = " << cfg.max_iterations << '\n'
      << "convergence_tol = " << format_double(cfg.convergence_tol) << '\n'
      << "initial_step = " << format_double(cfg.initial_step) << '\n'
      << "freeze_control_points = " << (cfg.freeze_control_points ? "true" : "false") << '\n'
      << "variants = " << list(cfg.variants, [](Variant v) { return std::string(variant_name(v)); }) << '\n'
      << "n_rungs = " << cfg.n_rungs << '\n'
      << "seed = " << cfg.seed << '\n'
      << "output_dir = " << cfg.output_dir << '\n'
      << "synthetic.n_subjects = " << syn.n_subjects << '\n'
      << "synthetic.subdivisions = " << syn.subdivisions << '\n'
      << "synthetic.radii = " << list(syn.radii, format_double) << '\n'
      << "synthetic.deformation_sigma = " << format_double(syn.deformation_sigma) << '\n'
      << "synthetic.deformation_scale = " << format_double(syn.deformation_scale) << '\n'
      << "synthetic.noise_scale = " << format_double(syn.noise_scale) << '\n'
      << "synthetic.systolic_contraction = " << format_double(syn.systolic_contraction) << '\n'
      << "synthetic.systolic_scale = " << format_double(syn.systolic_scale) << '\n';
  return out.str();
}

} // namespace symladder
