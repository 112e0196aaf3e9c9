#include "curvedcc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "curvedcc/catalog.hpp"
#include "curvedcc/config_io.hpp"
#include "curvedcc/errors.hpp"
#include "curvedcc/solver.hpp"

namespace curvedcc::cli {

namespace {

using std::numbers::pi;
namespace fs = std::filesystem;

std::string num(double v) { return format_number(v); }

// Loads a configuration file, reporting failures with the contract's exit codes.
std::optional<ConfigFile> load(const fs::path& path, std::ostream& err, int& status) {
  try {
    return read_config_file(path);
  } catch (const SingularPairError& e) {
    err << "error: singular pair (" << e.first() << "," << e.second() << ") in " << path.string() << "\n";
    status = exit_singular;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    status = exit_parse;
  }
  return std::nullopt;
}

// Writes to `path` when given, otherwise to `fallback`.
class Sink {
 public:
  Sink(const std::optional<fs::path>& path, std::ostream& fallback) : stream_(&fallback) {
    if (path) {
      if (path->has_parent_path()) fs::create_directories(path->parent_path());
      file_ = std::make_unique<std::ofstream>(*path);
      if (!*file_) throw Error(ErrorCode::invalid_argument, "cannot write " + path->string());
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::vector<double> linspace(double a, double b, int k) {
  std::vector<double> v(k);
  for (int i = 0; i < k; ++i) v[i] = k == 1 ? a : (a * (k - 1 - i) + b * i) / (k - 1);
  return v;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw Error(ErrorCode::invalid_argument, "not a number: '" + item + "'");
    values.push_back(v);
  }
  return values;
}

void write_verify_report(const Configuration& cfg, const CCReport& report, bool lambda_given, double tol,
                         const CCTolerances& tols, std::ostream& out) {
  out << "sigma: " << static_cast<int>(cfg.curvature) << "\n";
  out << "bodies: " << cfg.size() << "\n";
  out << "lambda: " << num(report.lambda) << "\n";
  out << "lambda_source: " << (lambda_given ? "given" : "fit") << "\n";
  out << "residual_inf: " << num(report.residual_inf) << "\n";
  for (std::size_t i = 0; i < report.residual_per_body.size(); ++i)
    out << "residual[" << i << "]: " << num(report.residual_per_body[i]) << "\n";
  out << "special: " << (report.is_special ? "true" : "false") << "\n";
  out << "dim: " << (report.dim_class ? to_string(*report.dim_class) : "degenerate") << "\n";
  out << "common_phi: " << (report.common_phi ? num(*report.common_phi) : std::string("none")) << "\n";
  const auto sums = necessary_sums(cfg, tols.rho);
  for (std::size_t i = 0; i < sums.values.size(); ++i)
    out << "necessary_sum[" << i << "]: " << (sums.defined[i] ? num(sums.values[i]) : std::string("undefined")) << "\n";
  out << "tolerance: " << num(tol) << "\n";
  out << "central_configuration: " << (report.residual_inf < tol ? "true" : "false") << "\n";
}

}  // namespace

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  int status = exit_ok;
  const auto file = load(opts.file, err, status);
  if (!file) return status;
  const auto report = analyze(file->config, opts.lambda, opts.tolerances);
  write_verify_report(file->config, report, opts.lambda.has_value(), opts.tol, opts.tolerances, out);
  return report.residual_inf < opts.tol ? exit_ok : exit_failure;
}

int cmd_family(const FamilyOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.out) fs::create_directories(*opts.out);
  Sink table(opts.out ? std::optional<fs::path>(*opts.out / (opts.special_curve ? "special_curve.csv" : "family.csv"))
                      : std::nullopt,
             out);

  if (opts.special_curve) {
    const auto cs = opts.c_values.empty() ? linspace(-0.9, -0.1, 9) : opts.c_values;
    table.get() << "c,branch,theta,lambda,max_force,status\n";
    for (const auto& point : special_curve(cs)) {
      if (point.error) {
        table.get() << num(point.c) << ",,,,," << to_string(*point.error) << "\n";
        continue;
      }
      for (std::size_t b = 0; b < point.roots.size(); ++b) {
        const double t = point.roots[b];
        table.get() << num(point.c) << "," << b << "," << num(t) << "," << num(catalog::lambda_single_formula(point.c, t))
                    << "," << num(point.max_force[b]) << ",ok\n";
      }
    }
    return exit_ok;
  }

  std::vector<std::pair<double, double>> params;
  if (opts.grid > 0) {
    const auto cs = linspace(-0.9, -0.1, opts.grid);
    const auto ts = linspace(0.1 * pi / 2, 0.9 * pi / 2, opts.grid);
    for (double c : cs)
      for (double t : ts) params.emplace_back(c, t);
    for (double c : cs)
      for (double t : ts) params.emplace_back(-c, pi - t);
  } else {
    if (!opts.c || !opts.theta) {
      err << "error: family needs --c and --theta, --grid, or --special-curve\n";
      return exit_failure;
    }
    params.emplace_back(*opts.c, *opts.theta);
  }
  if (opts.n < 3) {
    err << "error: --n must be at least 3\n";
    return exit_failure;
  }

  table.get() << "index,c,theta,n,m,lambda1,lambda2,lambda,residual,status\n";
  for (std::size_t idx = 0; idx < params.size(); ++idx) {
    const auto [c, t] = params[idx];
    table.get() << idx << "," << num(c) << "," << num(t) << "," << opts.n << ",";
    try {
      const Configuration cfg = opts.n == 3 ? catalog::family_q(c, t) : catalog::ngon_family(opts.n, c, t);
      // Residual against the fitted multiplier; the lambda column is the closed
      // form when one exists (n = 3).
      double lambda = fit_lambda(cfg).lambda;
      const auto report = cc_residual(cfg, lambda);
      std::string l1 = "";
      std::string l2 = "";
      if (opts.n == 3) {
        const auto closed = catalog::lambda_closed_form(c, t);
        l1 = num(closed.lambda1);
        l2 = num(closed.lambda2);
        lambda = closed.lambda;
      }
      table.get() << num(cfg.masses[0]) << "," << l1 << "," << l2 << "," << num(lambda) << "," << num(report.residual_inf)
                  << ",ok\n";
      if (opts.out) write_config_file(*opts.out / ("family_" + std::to_string(idx) + ".json"), cfg);
    } catch (const Error& e) {
      table.get() << ",,,,," << to_string(e.code()) << "\n";
    }
  }
  return exit_ok;
}

int cmd_solve(const SolveCommandOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.masses.size() < 2 || opts.trials < 1) {
    err << "error: need at least two masses and one trial\n";
    return exit_failure;
  }
  for (double m : opts.masses)
    if (!(m > 0.0)) {
      err << "error: masses must be positive\n";
      return exit_failure;
    }
  const Curvature k = curvature_from_int(opts.sigma);

  struct Class {
    SolveOutcome representative;
    Configuration canonical;
    int multiplicity = 1;
  };
  std::vector<Class> classes;
  int converged = 0;
  int no_convergence = 0;
  int singular = 0;

  SolveOptions so;
  so.max_iter = opts.max_iter;
  for (int trial = 0; trial < opts.trials; ++trial) {
    so.seed = opts.seed + static_cast<std::uint64_t>(trial);
    const auto outcome = find_cc(k, opts.masses, std::nullopt, so);
    if (!outcome.converged) {
      (outcome.status == SolveStatus::singular_pair ? singular : no_convergence)++;
      continue;
    }
    ++converged;
    auto match = std::find_if(classes.begin(), classes.end(),
                              [&](const Class& c) { return fingerprints_match(c.representative.fingerprint, outcome.fingerprint); });
    if (match != classes.end()) {
      ++match->multiplicity;
      continue;
    }
    Configuration canonical = outcome.config;
    try {
      canonical = canonical_gauge(outcome.config);
    } catch (const Error&) {
      // every body on the zw-plane: keep the solver's gauge
    }
    classes.push_back({outcome, canonical, 1});
  }

  if (opts.out) fs::create_directories(*opts.out);
  out << "sigma: " << opts.sigma << "\n";
  out << "trials: " << opts.trials << "\n";
  out << "converged: " << converged << "\n";
  out << "no_convergence: " << no_convergence << "\n";
  out << "singular: " << singular << "\n";
  out << "classes: " << classes.size() << "\n\n";

  Sink summary(opts.out ? std::optional<fs::path>(*opts.out / "summary.csv") : std::nullopt, out);
  summary.get() << "class,lambda,dim,residual,multiplicity,coplanar,common_phi,file\n";
  for (std::size_t id = 0; id < classes.size(); ++id) {
    const auto& c = classes[id];
    const auto& report = c.representative.report;
    const auto phi = common_phi(c.canonical);
    std::string file;
    if (opts.out) {
      file = "class_" + std::to_string(id) + ".json";
      write_config_file(*opts.out / file, c.canonical);
    }
    summary.get() << id << "," << num(report.lambda) << ","
                  << (report.dim_class ? to_string(*report.dim_class) : "degenerate") << "," << num(report.residual_inf)
                  << "," << c.multiplicity << "," << (phi ? "yes" : "no") << "," << (phi ? num(*phi) : std::string())
                  << "," << file << "\n";
  }
  return exit_ok;
}

int cmd_integrate(const IntegrateOptions& opts, std::ostream& out, std::ostream& err) {
  int status = exit_ok;
  const auto file = load(opts.file, err, status);
  if (!file) return status;
  if (!(opts.dt > 0.0) || !(opts.t_end > 0.0) || opts.stride < 1) {
    err << "error: --dt and --t-end must be positive and --stride at least 1\n";
    return exit_failure;
  }

  PhaseState initial{file->config, {}};
  if (opts.releq) {
    const double lambda = fit_lambda(file->config).lambda;
    const auto report = cc_residual(file->config, lambda);
    if (!(report.residual_inf < opts.tol)) {
      err << "error: --releq needs a central configuration; residual_inf = " << num(report.residual_inf) << "\n";
      return exit_releq_unverified;
    }
    try {
      initial.velocities = relative_equilibrium_velocities(file->config, lambda, *opts.releq);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return exit_failure;
    }
  } else if (file->velocities) {
    initial.velocities = *file->velocities;
  } else {
    err << "error: the file has no velocities; pass --releq <s>\n";
    return exit_failure;
  }

  const auto traj = integrate(initial, opts.dt, opts.t_end, opts.stride);
  const auto d0 = pairwise_distances(initial.config);

  Sink sink(opts.out, out);
  auto& csv = sink.get();
  const std::size_t n = initial.config.size();
  csv << "t";
  for (std::size_t i = 0; i < n; ++i)
    for (const char* axis : {"x", "y", "z", "w"}) csv << ",q" << i << "_" << axis;
  csv << ",E,J_xy,J_zw,max_distance_drift\n";

  double drift_max = 0.0;
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    const auto& state = traj.states[s];
    const auto d = pairwise_distances(state.config);
    double drift = 0.0;
    for (std::size_t p = 0; p < d.size(); ++p) drift = std::max(drift, std::abs(d[p] - d0[p]));
    drift_max = std::max(drift_max, drift);
    csv << num(traj.times[s]);
    for (const auto& q : state.config.positions) csv << "," << num(q.x) << "," << num(q.y) << "," << num(q.z) << "," << num(q.w);
    csv << "," << num(traj.energy[s]) << "," << num(traj.momentum_xy[s]) << "," << num(traj.momentum_zw[s]) << ","
        << num(drift) << "\n";
  }
  if (traj.aborted)
    csv << "abort," << num(traj.abort_time) << ",singular_pair," << traj.singular_pair.first << ","
        << traj.singular_pair.second << "\n";

  if (opts.out) {
    out << "samples: " << traj.states.size() << "\n";
    out << "t_final: " << num(traj.times.back()) << "\n";
    out << "max_distance_drift: " << num(drift_max) << "\n";
    out << "energy_error: " << num(std::abs(traj.energy.back() - traj.energy.front())) << "\n";
    out << "momentum_xy_error: " << num(std::abs(traj.momentum_xy.back() - traj.momentum_xy.front())) << "\n";
    out << "momentum_zw_error: " << num(std::abs(traj.momentum_zw.back() - traj.momentum_zw.front())) << "\n";
    out << "aborted: " << (traj.aborted ? "true" : "false") << "\n";
  }
  return exit_ok;
}

int cmd_project(const ProjectOptions& opts, std::ostream& out, std::ostream& err) {
  int status = exit_ok;
  if (opts.mode != "stereographic" && opts.mode != "poincare") {
    err << "error: --mode must be stereographic or poincare\n";
    return exit_failure;
  }
  const auto file = load(opts.file, err, status);
  if (!file) return status;
  const auto& cfg = file->config;
  const bool stereo = opts.mode == "stereographic";
  if (stereo != (cfg.curvature == Curvature::spherical)) {
    err << "error: mode " << opts.mode << " does not match sigma = " << static_cast<int>(cfg.curvature) << "\n";
    return exit_mode_mismatch;
  }

  Sink sink(opts.out, out);
  auto& csv = sink.get();
  csv << "index,mass,u,v,w,inside\n";
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    csv << i << "," << num(cfg.masses[i]) << ",";
    try {
      const Vec3 p = stereo ? stereographic(cfg.positions[i]) : poincare_ball(cfg.positions[i]);
      const double r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
      csv << num(p[0]) << "," << num(p[1]) << "," << num(p[2]) << "," << (r2 < 1.0 ? "yes" : "no") << "\n";
    } catch (const Error&) {
      csv << ",,,pole\n";
    }
  }
  return exit_ok;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Central configurations of the curved N-body problem on S^3 and H^3", "curvedcc"};
  app.require_subcommand(1);

  VerifyOptions verify;
  std::string lambda_text = "fit";
  auto* verify_cmd = app.add_subcommand("verify", "Check a configuration file against the central-configuration equations");
  verify_cmd->add_option("file", verify.file, "Configuration file")->required();
  verify_cmd->add_option("--lambda", lambda_text, "Multiplier, or 'fit' for the least-squares value");
  verify_cmd->add_option("--tol", verify.tol, "Residual threshold for exit status 0");
  verify_cmd->add_option("--lambda-tol", verify.tolerances.lambda, "|lambda| below which a CC is special");
  verify_cmd->add_option("--cc-tol", verify.tolerances.cc, "Residual below which a CC is special");
  verify_cmd->add_option("--rank-tol", verify.tolerances.rank, "Relative singular-value cutoff for the dimension class");
  verify_cmd->add_option("--coplanar-tol", verify.tolerances.coplanar, "Tolerance for a common zw-angle");

  FamilyOptions family;
  std::string c_values;
  auto* family_cmd = app.add_subcommand("family", "Five-body S^3 family, its n-gon variants and the special curve");
  family_cmd->add_option("--c", family.c, "Height of the n-gon, in (-1,0) or (0,1)");
  family_cmd->add_option("--theta", family.theta, "Angle of the zw-pair, radians");
  family_cmd->add_option("--n", family.n, "Polygon order (3 is the closed-form family)");
  family_cmd->add_option("--grid", family.grid, "K x K grid over both parameter rectangles");
  family_cmd->add_flag("--special-curve", family.special_curve, "Zeros of lambda(c, theta)");
  family_cmd->add_option("--c-values", c_values, "Comma-separated c values for --special-curve");
  family_cmd->add_option("--out", family.out, "Output directory for the table and configuration files");

  SolveCommandOptions solve;
  std::string masses_text;
  auto* solve_cmd = app.add_subcommand("solve", "Search for central configurations from random starts");
  solve_cmd->add_option("--sigma", solve.sigma, "+1 for S^3, -1 for H^3")->required();
  solve_cmd->add_option("--masses", masses_text, "Comma-separated masses")->required();
  solve_cmd->add_option("--seed", solve.seed, "Seed of the first trial");
  solve_cmd->add_option("--trials", solve.trials, "Number of random starts");
  solve_cmd->add_option("--max-iter", solve.max_iter, "Levenberg-Marquardt iteration cap");
  solve_cmd->add_option("--out", solve.out, "Output directory for class files and summary.csv");

  IntegrateOptions integ;
  std::string releq_text = "none";
  auto* integrate_cmd = app.add_subcommand("integrate", "Integrate the equations of motion with RK4");
  integrate_cmd->add_option("file", integ.file, "Configuration file")->required();
  integrate_cmd->add_option("--dt", integ.dt, "Step size");
  integrate_cmd->add_option("--t-end", integ.t_end, "Final time");
  integrate_cmd->add_option("--releq", releq_text, "Relative-equilibrium spin parameter s, or 'none'");
  integrate_cmd->add_option("--stride", integ.stride, "Write every k-th step");
  integrate_cmd->add_option("--tol", integ.tol, "Residual threshold for --releq verification");
  integrate_cmd->add_option("--out", integ.out, "Trajectory CSV path (stdout when omitted)");

  ProjectOptions project;
  auto* project_cmd = app.add_subcommand("project", "Stereographic (S^3) or Poincare-ball (H^3) coordinates");
  project_cmd->add_option("file", project.file, "Configuration file")->required();
  project_cmd->add_option("--mode", project.mode, "stereographic or poincare");
  project_cmd->add_option("--out", project.out, "CSV path (stdout when omitted)");

  // CLI11 consumes arguments from the back and without the program name.
  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_failure;
  }

  try {
    if (*verify_cmd) {
      if (lambda_text != "fit") verify.lambda = parse_list(lambda_text).at(0);
      return cmd_verify(verify, out, err);
    }
    if (*family_cmd) {
      if (!c_values.empty()) family.c_values = parse_list(c_values);
      return cmd_family(family, out, err);
    }
    if (*solve_cmd) {
      solve.masses = parse_list(masses_text);
      return cmd_solve(solve, out, err);
    }
    if (*integrate_cmd) {
      if (releq_text != "none") integ.releq = parse_list(releq_text).at(0);
      return cmd_integrate(integ, out, err);
    }
    if (*project_cmd) return cmd_project(project, out, err);
  } catch (const SingularPairError& e) {
    err << "error: " << e.what() << "\n";
    return exit_singular;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
  return exit_failure;
}

}  // namespace curvedcc::cli
