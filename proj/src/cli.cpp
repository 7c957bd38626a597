#include "symladder/cli.hpp"

#include <cctype>
#include <filesystem>
#include <functional>
#include <ostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "symladder/config.hpp"
#include "symladder/diagnostics.hpp"
#include "symladder/mesh_io.hpp"
#include "symladder/report_io.hpp"
#include "symladder/simd/kernel_ops.hpp"
#include "symladder/strain.hpp"
#include "symladder/synthetic.hpp"
#include "symladder/transport.hpp"

namespace symladder {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string template_path, target_path, momenta_path;
  std::string base_path, other_path, center_path, subject_path, followup_path;
  std::string population;
  std::string reference, deformed, reference2, deformed2;
  std::string variant = "with_residual";
  std::string backend;
  double alpha_squared = 0.0;
  double t_end = 1.0;
  int rungs = 0;
  int subjects = 0;
  long long seed = -1;
  std::size_t threads = 0;
};

ExperimentConfig read_config(const Options &o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (o.alpha_squared > 0.0)
    cfg.alpha_squared = {o.alpha_squared};
  if (o.rungs > 0)
    cfg.n_rungs = o.rungs;
  if (o.seed >= 0)
    cfg.seed = static_cast<std::uint64_t>(o.seed);
  if (o.subjects > 0)
    cfg.synthetic.n_subjects = o.subjects;
  cfg.validate();
  return cfg;
}

fs::path out_dir(const Options &o, const ExperimentConfig &cfg) {
  fs::path dir = !o.out.empty() ? fs::path(o.out) : fs::path(cfg.output_dir);
  if (dir.empty())
    throw InvalidArgument("no output directory: pass --out or set output_dir");
  fs::create_directories(dir);
  return dir;
}

int run_register(const Options &o, std::ostream &out) {
  const ExperimentConfig cfg = read_config(o);
  const RegistrationConfig rc = cfg.registration();
  const Mesh T = load_mesh(o.template_path);
  const Mesh S = load_mesh(o.target_path);
  const RegistrationResult r = register_meshes(T, S, rc);
  const fs::path dir = out_dir(o, cfg);
  write_text_file(dir / "result.json", registration_json(r, rc));
  save_control_system_csv(r.system, dir / "momenta.csv");
  save_mesh(r.deformed, dir / "deformed.off");
  save_displacement_csv(r.delta, dir / "delta.csv");
  out << "registered in " << r.iterations << " iterations, total " << format_double(r.total)
      << (r.converged ? "" : " (not converged)") << '\n';
  return kExitOk;
}

int run_shoot(const Options &o, std::ostream &out) {
  const ExperimentConfig cfg = read_config(o);
  const Mesh T = load_mesh(o.template_path);
  const ControlSystem sys = load_control_system_csv(o.momenta_path, KernelParams(cfg.sigma));
  const Mesh shot = exponential(T, sys, cfg.n_steps, o.t_end, cfg.scheme);
  const fs::path dir = out_dir(o, cfg);
  save_mesh(shot, dir / "shot.off");
  if (o.t_end > 0.0) {
    const GeodesicTrajectory traj = shoot(sys, cfg.n_steps, o.t_end, cfg.scheme);
    save_control_system_csv(traj.final_state(), dir / "final_momenta.csv");
  }
  out << "energy " << format_double(hamiltonian_energy(sys)) << '\n';
  return kExitOk;
}

int run_midpoint(const Options &o, std::ostream &out) {
  const ExperimentConfig cfg = read_config(o);
  const RegistrationConfig rc = cfg.registration();
  const MidpointOutcome m =
      midpoint(load_mesh(o.base_path), load_mesh(o.other_path), rc, parse_variant(o.variant));
  const fs::path dir = out_dir(o, cfg);
  save_mesh(m.result, dir / "midpoint.off");
  write_text_file(dir / "result.json", registration_json(m.registration, rc));
  out << "midpoint written to " << (dir / "midpoint.off").string() << '\n';
  return kExitOk;
}

int run_symmetry(const Options &o, std::ostream &out) {
  const ExperimentConfig cfg = read_config(o);
  const RegistrationConfig rc = cfg.registration();
  const SymmetryOutcome s =
      symmetry(load_mesh(o.center_path), load_mesh(o.subject_path), rc, parse_variant(o.variant));
  const fs::path dir = out_dir(o, cfg);
  save_mesh(s.result, dir / "symmetric.off");
  write_text_file(dir / "result.json", registration_json(s.registration, rc));
  out << "symmetric shape written to " << (dir / "symmetric.off").string() << '\n';
  return kExitOk;
}

int run_pole_ladder(const Options &o, std::ostream &out) {
  const ExperimentConfig cfg = read_config(o);
  const RegistrationConfig rc = cfg.registration();
  const Mesh T = load_mesh(o.template_path);
  Registrar registrar(rc, true);
  const PoleLadderResult pl = pole_ladder(T, load_mesh(o.subject_path), load_mesh(o.followup_path),
                                          registrar, parse_variant(o.variant), cfg.n_rungs);
  const fs::path dir = out_dir(o, cfg);
  save_mesh(pl.transported, dir / "transported.off");
  fs::create_directories(dir / "trace");
  for (std::size_t r = 0; r < pl.trace.rungs.size(); ++r) {
    const std::string stem = "rung_" + std::to_string(r);
    save_mesh(pl.trace.rungs[r].midpoint, dir / "trace" / (stem + "_midpoint.off"));
    save_mesh(pl.trace.rungs[r].reflected, dir / "trace" / (stem + "_reflected.off"));
  }
  const RegistrationResult log = transported_log(T, pl.transported, registrar);
  save_control_system_csv(log.system, dir / "log_momenta.csv");

  nlohmann::ordered_json j;
  j["variant"] = o.variant;
  j["n_rungs"] = cfg.n_rungs;
  j["midpoints"] = pl.trace.midpoints;
  j["symmetries"] = pl.trace.symmetries;
  j["all_converged"] = pl.trace.all_converged();
  j["log_velocity_norm"] = log.velocity_norm();
  j["log_residual_rms"] = std::sqrt(log.delta.squaredNorm() / static_cast<double>(log.delta.rows()));
  write_text_file(dir / "result.json", j.dump(2) + "\n");
  out << "transported shape written to " << (dir / "transported.off").string() << '\n';
  return kExitOk;
}

int run_errors(const Options &o, std::ostream &out) {
  const ExperimentConfig cfg = read_config(o);
  const Population pop = o.population.empty()
                             ? generate_synthetic_population(cfg.seed, cfg.synthetic.n_subjects, cfg.synthetic)
                             : load_population(o.population);
  SuiteOptions so;
  so.threads = o.threads;
  const ErrorReport report =
      run_suite(pop.subjects, pop.templ, cfg.alpha_squared, cfg.variants, cfg.registration(), so);
  const fs::path dir = out_dir(o, cfg);
  save_error_csv(report, dir / "errors.csv");
  write_text_file(dir / "summary.json", error_summary_json(report, cfg.alpha_squared, cfg.variants));
  out << report.cells.size() << " cells written to " << (dir / "errors.csv").string() << '\n';
  return kExitOk;
}

int run_strain(const Options &o, std::ostream &out) {
  const ExperimentConfig cfg = read_config(o);
  const Mesh a = load_mesh(o.reference);
  const Mesh b = load_mesh(o.deformed);
  const std::vector<double> las = local_area_strain(a, b);
  const fs::path dir = out_dir(o, cfg);
  save_strain_csv(a, las, dir / "las.csv");
  if (!o.reference2.empty() || !o.deformed2.empty()) {
    if (o.reference2.empty() || o.deformed2.empty())
      throw InvalidArgument("--reference2 and --deformed2 must be given together");
    const Mesh a2 = load_mesh(o.reference2);
    const std::vector<double> las2 = local_area_strain(a2, load_mesh(o.deformed2));
    save_strain_csv(a2, las2, dir / "las2.csv");
    const double ase = area_strain_error(las, las2);
    nlohmann::ordered_json j;
    j["area_strain_error"] = ase;
    j["vertices"] = las.size();
    write_text_file(dir / "strain.json", j.dump(2) + "\n");
    out << "ASE " << format_double(ase) << '\n';
  }
  return kExitOk;
}

int run_synth(const Options &o, std::ostream &out) {
  const ExperimentConfig cfg = read_config(o);
  const Population pop = generate_synthetic_population(cfg.seed, cfg.synthetic.n_subjects, cfg.synthetic);
  const fs::path dir = out_dir(o, cfg);
  save_population(pop, dir);
  out << pop.subjects.size() << " subjects written to " << dir.string() << '\n';
  return kExitOk;
}

// First dash-prefixed argument that neither the main app nor the chosen
// subcommand knows. CLI11 checks required options before leftovers, so
// without this an unknown flag can hide behind a "required" message.
std::string unknown_flag(CLI::App &app, int argc, const char *const *argv) {
  CLI::App *scope = nullptr;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (!scope && arg.rfind('-', 0) != 0) {
      scope = app.get_subcommand_no_throw(arg);
      continue;
    }
    if (arg.size() < 2 || arg[0] != '-' || arg == "--")
      continue;
    if (const auto eq = arg.find('='); eq != std::string::npos)
      arg.erase(eq);
    if (arg.size() > 1 && arg[1] != '-' && std::isdigit(static_cast<unsigned char>(arg[1])))
      continue; // negative number
    const bool known = app.get_option_no_throw(arg) != nullptr ||
                       (scope && scope->get_option_no_throw(arg) != nullptr);
    if (!known)
      return arg;
  }
  return {};
}

} // namespace

int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Symmetric shape-analysis components on LDDMM landmark registration"};
  app.require_subcommand(1);
  Options o;

  app.add_option("--backend", o.backend, "Kernel backend: scalar or avx2 (default: best available)");

  std::function<int(const Options &, std::ostream &)> action;
  auto add = [&](const std::string &name, const std::string &help, auto fn) {
    CLI::App *sub = app.add_subcommand(name, help);
    sub->add_option("--config", o.config, "Experiment config file (key = value)");
    sub->add_option("--out", o.out, "Output directory");
    sub->callback([&action, fn] { action = fn; });
    return sub;
  };

  auto *reg = add("register", "Register a template onto a target", run_register);
  reg->add_option("--template", o.template_path)->required()->check(CLI::ExistingFile);
  reg->add_option("--target", o.target_path)->required()->check(CLI::ExistingFile);
  reg->add_option("--alpha-squared", o.alpha_squared, "Override the first alpha^2 of the config")->check(CLI::PositiveNumber);

  auto *sh = add("shoot", "Deform a shape by shooting control points and momenta", run_shoot);
  sh->add_option("--template", o.template_path)->required()->check(CLI::ExistingFile);
  sh->add_option("--momenta", o.momenta_path, "CSV index,x,y,z,mx,my,mz")->required()->check(CLI::ExistingFile);
  sh->add_option("--t-end", o.t_end, "Integration end time in [0, 1]")->check(CLI::Range(0.0, 1.0));

  auto *mid = add("midpoint", "Midpoint of the geodesic from base to other", run_midpoint);
  mid->add_option("--base", o.base_path)->required()->check(CLI::ExistingFile);
  mid->add_option("--other", o.other_path)->required()->check(CLI::ExistingFile);
  mid->add_option("--variant", o.variant, "with_residual or without_residual");
  mid->add_option("--alpha-squared", o.alpha_squared)->check(CLI::PositiveNumber);

  auto *sym = add("symmetry", "Reflect a subject through a center shape", run_symmetry);
  sym->add_option("--center", o.center_path)->required()->check(CLI::ExistingFile);
  sym->add_option("--subject", o.subject_path)->required()->check(CLI::ExistingFile);
  sym->add_option("--variant", o.variant, "with_residual or without_residual");
  sym->add_option("--alpha-squared", o.alpha_squared)->check(CLI::PositiveNumber);

  auto *pl = add("pole-ladder", "Transport subject -> followup onto the template", run_pole_ladder);
  pl->add_option("--template", o.template_path)->required()->check(CLI::ExistingFile);
  pl->add_option("--subject", o.subject_path)->required()->check(CLI::ExistingFile);
  pl->add_option("--followup", o.followup_path)->required()->check(CLI::ExistingFile);
  pl->add_option("--variant", o.variant, "with_residual or without_residual");
  pl->add_option("--rungs", o.rungs, "Number of rungs (power of two)")->check(CLI::PositiveNumber);
  pl->add_option("--alpha-squared", o.alpha_squared)->check(CLI::PositiveNumber);

  auto *er = add("errors", "Run the error suite over a population directory", run_errors);
  er->add_option("--population", o.population, "Directory written by synth (default: generate from the config seed)")
      ->check(CLI::ExistingDirectory);
  er->add_option("--seed", o.seed, "Random seed of the generated population (overrides config)")->check(CLI::NonNegativeNumber);
  er->add_option("--subjects", o.subjects, "Size of the generated population (overrides config)")->check(CLI::PositiveNumber);
  er->add_option("--threads", o.threads, "Worker threads (0: all cores)");

  auto *st = add("strain", "Local area strain map (and ASE against a second pair)", run_strain);
  st->add_option("--reference", o.reference)->required()->check(CLI::ExistingFile);
  st->add_option("--deformed", o.deformed)->required()->check(CLI::ExistingFile);
  st->add_option("--reference2", o.reference2)->check(CLI::ExistingFile);
  st->add_option("--deformed2", o.deformed2)->check(CLI::ExistingFile);

  auto *sy = add("synth", "Generate the synthetic ellipsoid population", run_synth);
  sy->add_option("--subjects", o.subjects, "Number of subjects (overrides config)")->check(CLI::PositiveNumber);
  sy->add_option("--seed", o.seed, "Random seed (overrides config)")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    if (const std::string flag = unknown_flag(app, argc, argv); !flag.empty())
      err << "symladder: unknown option '" << flag << "'\n";
    else
      err << "symladder: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (!o.backend.empty()) {
      if (o.backend == "scalar")
        simd::set_backend(simd::Backend::scalar);
      else if (o.backend == "avx2")
        simd::set_backend(simd::Backend::avx2);
      else {
        err << "symladder: --backend: unknown backend '" << o.backend << "'\n";
        return kExitUsage;
      }
    }
    return action(o, out);
  } catch (const std::exception &e) {
    err << "symladder: " << e.what() << '\n';
    return kExitComputation;
  }
}

} // namespace symladder
