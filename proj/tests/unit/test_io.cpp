#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "symladder/config.hpp"
#include "symladder/errors.hpp"
#include "symladder/mesh_io.hpp"
#include "symladder/report_io.hpp"
#include "symladder/synthetic.hpp"
#include "test_support.hpp"

using namespace symladder;
using namespace testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string &name) {
  const fs::path p = fs::temp_directory_path() / ("symladder_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::size_t parse_error_line(const std::string &text) {
  std::istringstream in(text);
  try {
    parse_off(in, "mem.off");
  } catch (const ParseError &e) {
    CHECK(std::string(e.what()).rfind("mem.off:" + std::to_string(e.line()) + ":", 0) == 0);
    return e.line();
  }
  FAIL("expected a ParseError");
  return 0;
}

std::size_t config_error_line(const std::string &text) {
  try {
    parse_config(text, "exp.cfg");
  } catch (const ParseError &e) {
    return e.line();
  }
  FAIL("expected a ParseError");
  return 0;
}

} // namespace

TEST_CASE("OFF round trip preserves every double") {
  std::mt19937_64 rng(1);
  Mesh m = ellipsoid({1.0, 2.0, 3.0}, 2);
  m.vertices += random_matrix(rng, m.size(), 3, 1e-3);
  m.vertices(0, 0) = 1e-300;
  m.vertices(1, 1) = -123456.789012345678;
  std::stringstream ss;
  write_off(m, ss);
  const Mesh back = parse_off(ss);
  CHECK((back.vertices.array() == m.vertices.array()).all());
  CHECK(back.faces == m.faces);

  const fs::path dir = scratch_dir("roundtrip");
  save_mesh(m, dir / "m.off");
  const Mesh loaded = load_mesh(dir / "m.off");
  CHECK((loaded.vertices.array() == m.vertices.array()).all());
}

TEST_CASE("OFF parsing tolerates comments and blank lines and writes 2D as z = 0") {
  std::istringstream in("# header comment\nOFF\n\n3 1 0  # counts\n0 0 0\n1 0 0\n# mid\n0 1 0\n3 0 1 2\n");
  const Mesh m = parse_off(in);
  CHECK(m.size() == 3);
  CHECK(m.dim() == 3);
  CHECK(m.faces.rows() == 1);

  Mesh flat = grid_mesh(1, 2);
  std::stringstream ss;
  write_off(flat, ss);
  const Mesh back = parse_off(ss);
  CHECK(back.dim() == 3);
  CHECK(max_abs(back.vertices.leftCols(2) - flat.vertices) == 0.0);
  CHECK(max_abs(back.vertices.col(2)) == 0.0);
}

TEST_CASE("OFF errors carry the offending line number") {
  CHECK(parse_error_line("") == 1);
  CHECK(parse_error_line("PLY\n3 1 0\n") == 1);
  CHECK(parse_error_line("OFF\nthree 1 0\n") == 2);
  CHECK(parse_error_line("OFF\n3 1 0\n0 0 0\n1 0\n0 1 0\n3 0 1 2\n") == 4);
  CHECK(parse_error_line("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 nan\n3 0 1 2\n") == 5);
  CHECK(parse_error_line("OFF\n# c\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n") == 7);
  CHECK(parse_error_line("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n4 0 1 2 0\n") == 6);
  CHECK(parse_error_line("OFF\n3 2 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n") == 7);
  CHECK_THROWS_AS(load_mesh("/nonexistent/dir/x.off"), IoError);
}

TEST_CASE("config parses every key and round-trips through its canonical text") {
  const std::string text = R"(# experiment
sigma = 12.5
alpha_squared = 0.01, 1, 100   # list
n_steps = 20
scheme = euler
control_point_spacing = 15
max_iterations = 50
convergence_tol = 1e-5
initial_step = 0.5
freeze_control_points = true
variants = without_residual
n_rungs = 2
seed = 42
output_dir = out/run1
synthetic.n_subjects = 4
synthetic.subdivisions = 1
synthetic.radii = 1, 2, 3
synthetic.deformation_sigma = 3
synthetic.deformation_scale = 0.5
synthetic.noise_scale = 0
synthetic.systolic_contraction = 0.2
synthetic.systolic_scale = 0.1
)";
  const ExperimentConfig c = parse_config(text);
  CHECK(c.sigma == 12.5);
  CHECK(c.alpha_squared == std::vector<double>{0.01, 1.0, 100.0});
  CHECK(c.n_steps == 20);
  CHECK(c.scheme == Scheme::euler);
  CHECK(c.control_point_spacing == 15.0);
  CHECK(c.max_iterations == 50);
  CHECK(c.convergence_tol == 1e-5);
  CHECK(c.initial_step == 0.5);
  CHECK(c.freeze_control_points);
  CHECK(c.variants == std::vector<Variant>{Variant::without_residual});
  CHECK(c.n_rungs == 2);
  CHECK(c.seed == 42);
  CHECK(c.output_dir == "out/run1");
  CHECK(c.synthetic.n_subjects == 4);
  CHECK(c.synthetic.radii == std::array<double, 3>{1.0, 2.0, 3.0});
  CHECK(c.synthetic.noise_scale == 0.0);

  const RegistrationConfig r = c.registration(100.0);
  CHECK(r.alpha_squared == 100.0);
  CHECK(r.sigma == 12.5);
  CHECK(r.scheme == Scheme::euler);
  CHECK(r.freeze_control_points);

  const std::string canon = serialize_config(c);
  CHECK(serialize_config(parse_config(canon)) == canon);
  CHECK(serialize_config(ExperimentConfig{}) == serialize_config(parse_config("")));
}

TEST_CASE("config errors carry the offending line number") {
  CHECK(config_error_line("sigma = 1\nbogus = 3\n") == 2);
  CHECK(config_error_line("\n\nsigma = abc\n") == 3);
  CHECK(config_error_line("sigma\n") == 1);
  CHECK(config_error_line("scheme = rk4\n") == 1);
  CHECK(config_error_line("# c\nalpha_squared = 1, -2\n") == 2);
  CHECK(config_error_line("n_rungs = 3\n") == 1);
  CHECK(config_error_line("synthetic.radii = 1, 2\n") == 1);
  CHECK_THROWS_AS(load_config("/nonexistent/exp.cfg"), IoError);
}

TEST_CASE("synthetic population is deterministic in the seed") {
  SyntheticConfig sc;
  sc.subdivisions = 1;
  const Population a = generate_synthetic_population(5, 3, sc);
  const Population b = generate_synthetic_population(5, 3, sc);
  const Population c = generate_synthetic_population(6, 3, sc);
  REQUIRE(a.subjects.size() == 3);
  CHECK(a.templ.size() == 42);
  for (int i = 0; i < 3; ++i) {
    CHECK((a.subjects[i].S.vertices.array() == b.subjects[i].S.vertices.array()).all());
    CHECK((a.subjects[i].S2.vertices.array() == b.subjects[i].S2.vertices.array()).all());
    CHECK(max_abs(a.subjects[i].S.vertices - c.subjects[i].S.vertices) > 0.0);
    CHECK(a.subjects[i].S.faces == a.templ.faces);
  }
  CHECK(max_abs(a.subjects[0].S.vertices - a.subjects[1].S.vertices) > 0.0);
}

TEST_CASE("synthetic population sizes and scales") {
  SyntheticConfig sc;
  const Population p = generate_synthetic_population(1, 4, sc);
  CHECK(p.templ.size() == 162);
  const Eigen::RowVectorXd hi = p.templ.vertices.colwise().maxCoeff();
  CHECK(hi(0) == doctest::Approx(20.0));
  CHECK(hi(2) == doctest::Approx(36.0));
  const double diag = bounding_box_diagonal(p.templ.vertices);
  for (const auto &s : p.subjects) {
    const double d = rms(s.S.vertices, p.templ.vertices) / diag;
    CHECK(d >= 0.02);
    CHECK(d <= 0.2);
    CHECK(rms(s.S2.vertices, s.S.vertices) > 0.0);
  }
}

TEST_CASE("zero deformation settings reproduce the template") {
  SyntheticConfig sc;
  sc.subdivisions = 1;
  sc.deformation_scale = 0.0;
  sc.noise_scale = 0.0;
  sc.systolic_contraction = 0.0;
  sc.systolic_scale = 0.0;
  const Population p = generate_synthetic_population(3, 2, sc);
  for (const auto &s : p.subjects) {
    CHECK(max_abs(s.S.vertices - p.templ.vertices) == 0.0);
    CHECK(max_abs(s.S2.vertices - p.templ.vertices) == 0.0);
  }
}

TEST_CASE("systolic deformation contracts the shape") {
  SyntheticConfig sc;
  sc.subdivisions = 1;
  sc.deformation_scale = 0.0;
  sc.noise_scale = 0.0;
  sc.systolic_scale = 0.0;
  sc.systolic_contraction = 0.1;
  const Population p = generate_synthetic_population(3, 1, sc);
  const Matrix &S = p.subjects[0].S.vertices, &S2 = p.subjects[0].S2.vertices;
  CHECK(max_abs(S2.col(0) - 0.9 * S.col(0)) <= 1e-12);
  CHECK(max_abs(S2.col(1) - 0.9 * S.col(1)) <= 1e-12);
}

TEST_CASE("icosphere vertex counts and unit radius") {
  CHECK(icosphere(0).size() == 12);
  CHECK(icosphere(1).size() == 42);
  CHECK(icosphere(2).size() == 162);
  CHECK(icosphere(2).faces.rows() == 320);
  const Mesh s = icosphere(2);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    CHECK(s.vertices.row(i).norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("control system CSV round trip") {
  std::mt19937_64 rng(2);
  for (int d : {2, 3}) {
    const ControlSystem sys{random_matrix(rng, 7, d, 1.0), random_matrix(rng, 7, d, 1.0), KernelParams(2.0)};
    const fs::path dir = scratch_dir("csv" + std::to_string(d));
    save_control_system_csv(sys, dir / "m.csv");
    const ControlSystem back = load_control_system_csv(dir / "m.csv", KernelParams(2.0));
    CHECK((back.points.array() == sys.points.array()).all());
    CHECK((back.momenta.array() == sys.momenta.array()).all());
    CHECK(back.kernel.sigma == 2.0);
  }
  const fs::path dir = scratch_dir("csvbad");
  write_text_file(dir / "bad.csv", "index,x,y,z,mx,my,mz\n0,1,2,3,4,5,6\n1,1,2,3,4,5\n");
  try {
    load_control_system_csv(dir / "bad.csv", KernelParams(1.0));
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("error CSV layout") {
  ErrorReport r;
  ErrorCell c;
  c.subject = 2;
  c.alpha_squared = 0.01;
  c.variant = Variant::without_residual;
  for (auto &e : c.errors)
    e = {0.5, true, true, ""};
  c.errors[1] = {std::numeric_limits<double>::quiet_NaN(), false, false, "boom"};
  r.cells.push_back(c);
  std::ostringstream out;
  write_error_csv(r, out);
  std::istringstream in(out.str());
  std::string header, first, second;
  std::getline(in, header);
  std::getline(in, first);
  std::getline(in, second);
  CHECK(header == "subject_id,alpha_squared,variant,error_type,value,converged");
  CHECK(first == "2,0.01,without_residual,midpoint_distance,0.5,true");
  CHECK(second == "2,0.01,without_residual,centrality,nan,false");
  std::size_t lines = 0;
  for (char ch : out.str())
    lines += ch == '\n';
  CHECK(lines == 1 + kErrorTypeCount);
}

TEST_CASE("population directory round trip") {
  SyntheticConfig sc;
  sc.subdivisions = 1;
  const Population p = generate_synthetic_population(9, 2, sc);
  const fs::path dir = scratch_dir("pop");
  save_population(p, dir);
  CHECK(fs::exists(dir / "template.off"));
  CHECK(fs::exists(dir / "subject_000_S.off"));
  CHECK(fs::exists(dir / "subject_001_S2.off"));
  const Population q = load_population(dir);
  REQUIRE(q.subjects.size() == 2);
  CHECK((q.templ.vertices.array() == p.templ.vertices.array()).all());
  CHECK((q.subjects[1].S2.vertices.array() == p.subjects[1].S2.vertices.array()).all());
  CHECK_THROWS_AS(load_population(dir / "missing"), IoError);
}
