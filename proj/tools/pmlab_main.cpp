// Command-line surface of the solver + diagnostics laboratory.
//
// Subcommands (each driven by one JSON config file):
//   solve             scalar degenerate-diffusion run, snapshots + summary
//   biofilm           coupled biomass/nutrient run, paired snapshots
//   diagnose          cylinder scans, dichotomy checks, Holder fits, schedule
//   verify-estimates  energy/logarithmic estimate verifiers on a fresh run
//   fit-hypotheses    structural-constant fitting and hypothesis validation
//
// Exit codes: 0 success, 1 configuration/validation failure, 2 numerical
// failure.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "pmlab/barenblatt.hpp"
#include "pmlab/config.hpp"
#include "pmlab/report.hpp"
#include "pmlab/snapshot.hpp"

namespace fs = std::filesystem;
using namespace pmlab;

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  bool quiet = false;
};

void say(const CliOptions& opt, const std::string& line) {
  if (!opt.quiet) std::cout << line << "\n";
}

std::string snap_name(const std::string& prefix, size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%06zu.snap", prefix.c_str(), index);
  return buf;
}

fs::path prepare_out(const RunConfig& rc, const CliOptions& opt) {
  fs::path out = opt.out_dir.empty() ? fs::path(rc.output_dir)
                                     : fs::path(opt.out_dir);
  fs::create_directories(out);
  return out;
}

Trajectory run_scalar(const RunConfig& rc) {
  Field u0 = build_initial_field(rc.initial, rc.grid);
  return run_simulation(u0, rc.nonlinearity, rc.reaction, rc.solver);
}

TextTable trajectory_summary(const Trajectory& traj) {
  TextTable t;
  t.header = {"t", "mass", "min", "max"};
  for (const auto& s : traj.snapshots)
    t.rows.push_back({s.t, total_mass(s.field), s.field.min(), s.field.max()});
  return t;
}

int cmd_solve(const CliOptions& opt) {
  RunConfig rc = load_config_file(opt.config_path);
  fs::path out = prepare_out(rc, opt);
  Trajectory traj = run_scalar(rc);
  for (size_t i = 0; i < traj.snapshots.size(); ++i)
    write_snapshot(traj.snapshots[i].field, traj.snapshots[i].t, "u",
                   (out / snap_name("u", i)).string());
  export_report(trajectory_summary(traj), (out / "summary.tsv").string());
  say(opt, "wrote " + std::to_string(traj.snapshots.size()) +
               " snapshots to " + out.string());
  if (traj.upper_clip_ever)
    say(opt, "warning: singularity clip engaged during the run");
  return 0;
}

int cmd_biofilm(const CliOptions& opt) {
  RunConfig rc = load_config_file(opt.config_path);
  if (rc.equation != RunConfig::Equation::Biofilm)
    throw ValidationError("biofilm subcommand needs equation = \"biofilm\"");
  fs::path out = prepare_out(rc, opt);

  BiofilmState s0;
  s0.M = build_initial_field(rc.initial, rc.grid);
  s0.C = build_initial_field(rc.initial_c, rc.grid);
  BiofilmConfig bcfg;
  bcfg.m_solver = rc.solver;
  bcfg.c_bc = rc.c_bc;
  BiofilmTrajectory traj = run_biofilm(s0, rc.biofilm, bcfg, rc.solver.t_end,
                                       rc.solver.snapshot_every);

  TextTable t;
  t.header = {"t", "mass_M", "mass_C", "min_C", "region_measure",
              "boundary_cells"};
  for (size_t i = 0; i < traj.snapshots.size(); ++i) {
    const auto& s = traj.snapshots[i];
    write_snapshot(s.M, s.t, "M", (out / snap_name("M", i)).string());
    write_snapshot(s.C, s.t, "C", (out / snap_name("C", i)).string());
    auto region = extract_biofilm_region(s.M, 0.0);
    t.rows.push_back({s.t, total_mass(s.M), total_mass(s.C), s.C.min(),
                      region.measure,
                      static_cast<long>(region.boundary_cells.size())});
  }
  export_report(t, (out / "biofilm_summary.tsv").string());
  say(opt, "wrote " + std::to_string(traj.snapshots.size()) +
               " paired snapshots to " + out.string());
  if (traj.upper_clip_ever)
    say(opt, "warning: singularity clip engaged during the run");
  return 0;
}

int cmd_fit_hypotheses(const CliOptions& opt) {
  RunConfig rc = load_config_file(opt.config_path);
  fs::path out = prepare_out(rc, opt);
  const auto& spec = rc.diagnostics.is_object() &&
                             rc.diagnostics.contains("fit_hypotheses")
                         ? rc.diagnostics["fit_hypotheses"]
                         : nlohmann::json::object();
  const double eps = spec.value("eps", 0.4);
  const double mu = spec.value("mu", 0.25);
  const int samples = spec.value("samples", 128);

  auto sc = fit_structural_constants(rc.nonlinearity, eps, mu, samples);
  TextTable sct;
  sct.header = {"constant", "value"};
  sct.rows.push_back({std::string("m"), sc.m});
  sct.rows.push_back({std::string("c1"), sc.c1});
  sct.rows.push_back({std::string("c2"), sc.c2});
  sct.rows.push_back({std::string("eps"), sc.eps});
  sct.rows.push_back({std::string("lambda"), sc.lambda});
  sct.rows.push_back({std::string("m_cap"), sc.m_cap});
  sct.rows.push_back({std::string("mu"), sc.mu});
  export_report(sct, (out / "structural_constants.tsv").string());

  export_report(to_table(validate_hypotheses(rc.nonlinearity, sc)),
                (out / "hypotheses.tsv").string());
  export_report(to_table(validate_growth_bound(rc.reaction, sc, 128)),
                (out / "growth_bound.tsv").string());
  say(opt, "wrote hypothesis reports to " + out.string());
  return 0;
}

int cmd_diagnose(const CliOptions& opt) {
  RunConfig rc = load_config_file(opt.config_path);
  fs::path out = prepare_out(rc, opt);
  Trajectory traj = run_scalar(rc);
  export_report(trajectory_summary(traj), (out / "summary.tsv").string());

  const auto& diag = rc.diagnostics;
  if (!diag.is_object())
    throw ValidationError("diagnose: diagnostics section missing");

  auto sc = fit_structural_constants(rc.nonlinearity, 0.4, 0.05, 128);
  const double mu = diag.value("mu", 0.05);

  DeGiorgiConstants dgc;
  {
    const auto cj = diag.contains("constants") ? diag["constants"]
                                               : nlohmann::json::object();
    dgc = compute_degiorgi_constants(
        sc, rc.reaction, rc.grid.dim, cj.value("C_struct", 1.0),
        cj.value("n0", 3), cj.value("n_star", 5),
        cj.value("theta", std::pow(4.0, 1.0 - sc.m)), cj.value("eta", 0.9));
    export_report(to_table(dgc), (out / "degiorgi_constants.tsv").string());
  }

  if (diag.contains("cylinder_scan")) {
    const auto& js = diag["cylinder_scan"];
    std::vector<DichotomyReport> results;
    TextTable scan;
    scan.header = {"x0", "t0", "R", "omega", "admissible", "branch",
                   "violating_fraction"};
    for (const auto& jc : js.value("centers", nlohmann::json::array())) {
      const double x0 = jc.at(0).get<double>();
      const double t0 = nearest_snapshot_time(traj, jc.at(1).get<double>());
      for (const auto& jr : js.value("radii", nlohmann::json::array())) {
        const double R = jr.get<double>();
        auto cyl = make_intrinsic_cylinder(traj, {x0, 0.0}, t0, R, sc.m);
        if (!cyl) continue;
        auto cond = check_cylinder_conditions(traj, *cyl, mu);
        const bool ok = cond.all_pass() && R <= dgc.R_max;
        std::string branch = "-";
        double viol = 0.0;
        if (ok) {
          auto rep = degiorgi_dichotomy_check(traj, *cyl, dgc, mu);
          results.push_back(rep);
          branch = rep.branch == DichotomyReport::Branch::I ? "I" : "II";
          viol = rep.violating_fraction;
        }
        scan.rows.push_back({x0, t0, R, cyl->omega,
                             std::string(ok ? "yes" : "no"), branch, viol});
      }
    }
    export_report(scan, (out / "cylinder_scan.tsv").string());
    export_report(to_table(results), (out / "dichotomy.tsv").string());
    say(opt, "dichotomy checks: " + std::to_string(results.size()));
  }

  if (diag.contains("holder_fit")) {
    const auto& jf = diag["holder_fit"];
    const auto jc = jf.value("center", nlohmann::json::array({0.0}));
    Point x0{jc.at(0).get<double>(),
             jc.size() > 1 ? jc.at(1).get<double>() : 0.0};
    const double t0 =
        nearest_snapshot_time(traj, jf.value("t0", traj.t_end()));
    std::vector<double> radii;
    for (const auto& r : jf.value("radii", nlohmann::json::array()))
      radii.push_back(r.get<double>());
    HolderFitMode mode = HolderFitMode::intrinsic(jf.value("omega", 1.0), sc.m);
    if (jf.value("mode", "intrinsic") == std::string("classical"))
      mode = HolderFitMode::classical(jf.value("theta", dgc.theta));
    auto rep = fit_holder_exponent(traj, x0, t0, radii, mode);
    export_report(to_table(rep), (out / "holder_fit.tsv").string());
    say(opt, "alpha_hat = " + format_double(rep.alpha_hat));
  }

  if (diag.contains("scheme")) {
    const auto& js = diag["scheme"];
    const double R0 = js.value("R0", dgc.R_max);
    const double omega0 =
        js.value("omega0", std::pow(R0, 1.0 / sc.m) * 1.05);
    auto steps = generate_iterative_scheme(R0, omega0, dgc,
                                           js.value("n_max", 6));
    export_report(to_table(steps), (out / "scheme.tsv").string());
  }
  return 0;
}

int cmd_verify_estimates(const CliOptions& opt) {
  RunConfig rc = load_config_file(opt.config_path);
  fs::path out = prepare_out(rc, opt);
  Trajectory traj = run_scalar(rc);

  const auto& diag = rc.diagnostics;
  const auto je = diag.is_object() && diag.contains("estimates")
                      ? diag["estimates"]
                      : nlohmann::json::object();
  auto sc = fit_structural_constants(rc.nonlinearity, 0.4, 0.05, 128);

  const auto jc = je.value("center", nlohmann::json::array({0.0}));
  Point x0{jc.at(0).get<double>(),
           jc.size() > 1 ? jc.at(1).get<double>() : 0.0};
  const double t0 = nearest_snapshot_time(traj, je.value("t0", traj.t_end()));
  const double R = je.value("R", 0.25 * (rc.grid.hi[0] - rc.grid.lo[0]));
  auto cyl_opt = make_intrinsic_cylinder(traj, x0, t0, R, sc.m);
  if (!cyl_opt) throw ValidationError("estimates: empty cylinder");
  const Cylinder cyl = *cyl_opt;
  const double plateau = je.value("plateau", 0.5);
  auto cut = make_cutoff(cyl, plateau, traj);

  auto osc = oscillation(traj, cyl);
  const double w = std::max(osc.essosc, 1e-12);
  const double l = je.value("l", osc.mu_minus + 0.25 * w + 1e-9);
  const double k = je.value("k", osc.mu_minus + 0.5 * w);
  export_report(to_table(verify_lower_energy(traj, rc.nonlinearity, sc,
                                             rc.reaction, cut, k, l)),
                (out / "energy_lower.tsv").string());
  const double ku = je.value("k_upper", osc.mu_plus - 0.5 * w);
  export_report(to_table(verify_upper_energy(traj, rc.nonlinearity, sc,
                                             rc.reaction, cut, ku)),
                (out / "energy_upper.tsv").string());

  auto cut_space = make_cutoff(cyl, plateau, traj, /*space_only=*/true);
  const double t_lo = cyl.center_t - 0.5 * cyl.depth();
  auto log_rep = verify_log_estimate(
      traj, rc.nonlinearity, sc, rc.reaction, cut_space, je.value("log_k", 1),
      je.value("log_l", 3), je.value("log_t", t_lo),
      je.value("log_tau", cyl.center_t));
  export_report(to_table(log_rep), (out / "log_estimate.tsv").string());
  say(opt, "wrote estimate reports to " + out.string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degenerate reaction-diffusion laboratory"};
  app.require_subcommand(1);

  CliOptions opt;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON config file")
        ->required();
    sub->add_option("--out", opt.out_dir, "output directory (overrides config)");
    sub->add_flag("--quiet", opt.quiet, "suppress progress output");
  };

  auto* solve = app.add_subcommand("solve", "scalar run");
  auto* biofilm = app.add_subcommand("biofilm", "coupled biofilm run");
  auto* diagnose = app.add_subcommand("diagnose", "regularity diagnostics");
  auto* verify = app.add_subcommand("verify-estimates", "integral estimates");
  auto* fit = app.add_subcommand("fit-hypotheses", "structural hypotheses");
  for (auto* sub : {solve, biofilm, diagnose, verify, fit}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(opt);
    if (*biofilm) return cmd_biofilm(opt);
    if (*diagnose) return cmd_diagnose(opt);
    if (*verify) return cmd_verify_estimates(opt);
    if (*fit) return cmd_fit_hypotheses(opt);
  } catch (const ParseError& e) {
    std::cerr << "config parse error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "config validation error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 1;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 1;
  } catch (const NewtonDivergence& e) {
    std::cerr << "numerical failure: " << e.what()
              << " (residual " << e.residual_norm << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
