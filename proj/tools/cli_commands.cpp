#include "cli_commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "pvem/errors.hpp"
#include "pvem/mesh_io.hpp"
#include "pvem/oscillating_circle.hpp"

namespace pvem::cli {

namespace {

constexpr std::size_t kWarnDofs = 50'000;
constexpr int kWarnSteps = 5'000;

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / name);
  if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
  return f;
}

std::string resolution_tag(const MeshSpec& m) { return to_string(m.family) + "_" + std::to_string(m.resolution); }

void warn_desk_scale(std::size_t dofs, int steps, std::ostream& out) {
  if (dofs > kWarnDofs) out << "warning: " << dofs << " dofs exceeds the desk-scale guide of " << kWarnDofs << '\n';
  if (steps > kWarnSteps) out << "warning: " << steps << " steps exceeds the desk-scale guide of " << kWarnSteps << '\n';
}

struct CommonOptions {
  std::string family = "distorted";
  std::string problem = "oscillating-circle";
  std::string solver = "psor";
  double beta = 0.0;
  int max_iters = 0;
};

void add_mesh_options(CLI::App& sub, RunConfig& cfg, CommonOptions& opts) {
  sub.add_option("--family", opts.family, "Mesh family")
      ->check(CLI::IsMember({"distorted", "nonconvex", "voronoi"}))
      ->capture_default_str();
  sub.add_option("--resolution", cfg.mesh.resolution,
                 "Cells per side (distorted, nonconvex) or seeds per side (voronoi); 0 selects the family preset")
      ->capture_default_str();
  sub.add_option("--distortion", cfg.mesh.distortion, "Vertex perturbation of the distorted family, in [0, 0.5)")
      ->capture_default_str();
  sub.add_option("--lloyd", cfg.mesh.lloyd_iterations, "Lloyd iterations for the Voronoi family")->capture_default_str();
  sub.add_option("--seed", cfg.mesh.seed, "Random seed for mesh generation")->capture_default_str();
  sub.add_option("--output-dir", cfg.output_dir, "Output directory")->envname(kOutputDirEnv)->capture_default_str();
}

void add_run_options(CLI::App& sub, RunConfig& cfg, CommonOptions& opts) {
  add_mesh_options(sub, cfg, opts);
  sub.add_option("--problem", opts.problem, "Problem data")
      ->check(CLI::IsMember({"oscillating-circle", "zero"}))
      ->capture_default_str();
  sub.add_option("--dt", cfg.dt, "Time step")->capture_default_str();
  sub.add_option("--t-final", cfg.t_final, "Final time")->capture_default_str();
  sub.add_option("--solver", opts.solver, "Complementarity solver")
      ->check(CLI::IsMember({"psor", "projected-gradient"}))
      ->capture_default_str();
  sub.add_option("--omega", cfg.solver.relaxation_omega, "PSOR relaxation in (0, 2)")->capture_default_str();
  sub.add_option("--beta", opts.beta, "Projected-gradient step (0: 0.9 / lambda_max)")->capture_default_str();
  sub.add_option("--tol", cfg.solver.tol, "Complementarity residual tolerance")->capture_default_str();
  sub.add_option("--max-iters", opts.max_iters, "Iteration cap per step (0: 50 x free dofs)")->capture_default_str();
}

void finalize(RunConfig& cfg, const CommonOptions& opts, bool time_study) {
  cfg.mesh.family = parse_mesh_family(opts.family);
  cfg.problem = parse_problem(opts.problem);
  cfg.solver.method = parse_solver(opts.solver);
  if (opts.beta != 0.0) cfg.solver.beta = opts.beta;
  if (opts.max_iters != 0) cfg.solver.max_iters = opts.max_iters;
  if (cfg.mesh.resolution == 0)
    cfg.mesh.resolution = time_study ? time_study_resolution(cfg.mesh.family) : coarsest_space_resolution(cfg.mesh.family);
}

/// Pulls "--config FILE" / "--config=FILE" out of args and splices the file's
/// settings in right after the subcommand, so explicit flags take precedence.
void expand_config(std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      continue;
    }
    const auto extra = read_config_file(path);
    const auto at = args.empty() ? args.begin() : args.begin() + 1;
    args.insert(at, extra.begin(), extra.end());
    return;
  }
}

}  // namespace

std::vector<std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::vector<std::string> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(number) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto first = s.find_first_not_of(" \t\r");
      const auto last = s.find_last_not_of(" \t\r");
      return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(number) + ": empty key");
    out.push_back("--" + key + "=" + value);
  }
  return out;
}

void cmd_mesh_gen(const RunConfig& config, std::ostream& out) {
  const PolygonalMesh mesh = make_mesh(config.mesh);
  const RegularityReport report = check_regularity(mesh);
  const std::string tag = resolution_tag(config.mesh);

  auto mesh_file = open_output(config.output_dir, tag + ".mesh");
  write_mesh(mesh, mesh_file);
  auto report_file = open_output(config.output_dir, tag + ".regularity.txt");
  std::ostringstream text;
  text << "family=" << to_string(config.mesh.family) << '\n'
       << "resolution=" << config.mesh.resolution << '\n'
       << "cells=" << mesh.num_cells() << '\n'
       << "vertices=" << mesh.num_vertices() << '\n'
       << "h=" << format_real(mesh.mesh_size()) << '\n'
       << "min_edge_to_diameter_ratio=" << format_real(report.min_edge_to_diameter_ratio) << '\n'
       << "star_shaped_estimate=" << format_real(report.star_shaped_estimate) << '\n'
       << "worst_cell_id=" << report.worst_cell_id << '\n'
       << "worst_star_cell_id=" << report.worst_star_cell_id << '\n';
  report_file << text.str();
  out << text.str() << "wrote " << (config.output_dir / (tag + ".mesh")).string() << '\n';
}

void cmd_run(const RunConfig& config, std::ostream& out) {
  config.validate();
  const PolygonalMesh mesh = make_mesh(config.mesh);
  const TimeGrid grid = TimeGrid::from_step(config.t_final, config.dt);
  warn_desk_scale(mesh.num_vertices(), grid.n_steps(), out);

  if (config.dump_local_matrices) {
    auto f = open_output(config.output_dir, "local_matrices.txt");
    write_local_matrices(f, build_all_element_operators(mesh));
  }

  const RunResult result = run_experiment(mesh, config);

  {
    auto f = open_output(config.output_dir, "errors.csv");
    write_error_csv(f, result);
  }
  if (config.dump_snapshots) {
    auto f = open_output(config.output_dir, "snapshots.txt");
    write_snapshots(f, result.trajectory);
  }
  const SpaceTimeField exact = config.problem == ProblemKind::kZero
                                   ? SpaceTimeField([](Point2, double) { return 0.0; })
                                   : SpaceTimeField(oscillating_circle::exact_u);
  for (double t : config.snapshot_times) {
    const auto n = static_cast<std::size_t>(std::lround(t / grid.dt()));
    if (std::abs(grid.time(static_cast<int>(n)) - t) > 1e-9 * std::max(1.0, t))
      throw ConfigError("snapshot time " + format_real(t) + " is not on the time grid");
    auto f = open_output(config.output_dir, "solution_t" + format_real(t) + ".csv");
    write_solution_csv(f, mesh, result.trajectory.snapshots[n], &exact, grid.time(static_cast<int>(n)));
  }

  int total_iterations = 0;
  for (const auto& d : result.trajectory.diagnostics) total_iterations += d.iterations;
  std::ostringstream text;
  text << "family=" << to_string(config.mesh.family) << '\n'
       << "problem=" << to_string(config.problem) << '\n'
       << "h=" << format_real(result.mesh_size) << '\n'
       << "dofs=" << result.n_dofs << '\n'
       << "steps=" << grid.n_steps() << '\n'
       << "dt=" << format_real(grid.dt()) << '\n'
       << "solver=" << to_string(config.solver.method) << '\n'
       << "total_iterations=" << total_iterations << '\n'
       << "combined_error=" << format_real(result.errors.combined) << '\n'
       << "denominators_flagged=" << (result.errors.any_skipped() ? 1 : 0) << '\n';
  auto f = open_output(config.output_dir, "summary.txt");
  f << text.str();
  out << text.str();
}

void cmd_convergence(const StudyConfig& study, std::ostream& out) {
  study.validate();
  const RunConfig finest = study_level(study, study.n_levels - 1);
  if (study.axis == RefineAxis::kTime) {
    warn_desk_scale(0, TimeGrid::from_step(finest.t_final, finest.dt).n_steps(), out);
  }
  const ConvergenceTable table = run_study(study, &out);
  const std::string name = "convergence_" + table.axis + ".csv";
  {
    auto f = open_output(study.base.output_dir, name);
    write_convergence_csv(f, table);
  }
  write_convergence_csv(out, table);
  out << "family=" << to_string(study.base.mesh.family) << '\n'
      << "axis=" << table.axis << '\n'
      << "slope=" << format_real(table.fitted_slope) << '\n';
}

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Virtual element solver for parabolic obstacle problems on polygonal meshes", "pvem"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  RunConfig mesh_cfg;
  mesh_cfg.mesh.resolution = 0;
  CommonOptions mesh_opts;
  auto* mesh_gen = app.add_subcommand("mesh-gen", "Generate a mesh and its regularity report");
  add_mesh_options(*mesh_gen, mesh_cfg, mesh_opts);

  RunConfig run_cfg;
  run_cfg.mesh.resolution = 0;
  CommonOptions run_opts;
  std::vector<double> snapshot_times;
  auto* run = app.add_subcommand("run", "Solve the obstacle problem once and report errors");
  add_run_options(*run, run_cfg, run_opts);
  run->add_flag("--dump-snapshots", run_cfg.dump_snapshots, "Write every dof vector to snapshots.txt");
  run->add_flag("--dump-local", run_cfg.dump_local_matrices, "Write every local matrix to local_matrices.txt");
  run->add_option("--snapshot-time", snapshot_times, "Write solution_t<time>.csv at this time (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  StudyConfig space;
  space.base.mesh.resolution = 0;
  CommonOptions space_opts;
  auto* conv_space = app.add_subcommand("convergence-space", "Halve h over several levels at fixed dt");
  add_run_options(*conv_space, space.base, space_opts);
  conv_space->add_option("--levels", space.n_levels, "Number of refinement levels (>= 3)")->capture_default_str();
  conv_space->add_option("--skip-coarsest", space.skip_coarsest, "Levels excluded from the rate fit")
      ->capture_default_str();

  StudyConfig time;
  time.axis = RefineAxis::kTime;
  time.base.mesh.resolution = 0;
  time.base.dt = 0.125;
  CommonOptions time_opts;
  auto* conv_time = app.add_subcommand("convergence-time", "Halve dt over several levels on a fixed mesh");
  add_run_options(*conv_time, time.base, time_opts);
  conv_time->add_option("--levels", time.n_levels, "Number of refinement levels (>= 3)")->capture_default_str();
  conv_time->add_option("--skip-coarsest", time.skip_coarsest, "Levels excluded from the rate fit")
      ->capture_default_str();

  for (auto* sub : {mesh_gen, run, conv_space, conv_time})
    sub->set_help_flag("-h,--help", "Print help; every option also accepts key=value lines via --config FILE");

  try {
    expand_config(args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    // Subcommand help requests also arrive here.
    if (e.get_exit_code() == 0) {
      for (auto* sub : app.get_subcommands()) out << sub->help();
      if (app.get_subcommands().empty()) out << app.help();
      return kSuccess;
    }
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (mesh_gen->parsed()) {
      finalize(mesh_cfg, mesh_opts, false);
      cmd_mesh_gen(mesh_cfg, out);
    } else if (run->parsed()) {
      finalize(run_cfg, run_opts, false);
      run_cfg.snapshot_times = snapshot_times;
      cmd_run(run_cfg, out);
    } else if (conv_space->parsed()) {
      finalize(space.base, space_opts, false);
      cmd_convergence(space, out);
    } else if (conv_time->parsed()) {
      finalize(time.base, time_opts, true);
      cmd_convergence(time, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const StepFailure& e) {
    err << "numerical failure at " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kSuccess;
}

}  // namespace pvem::cli
