// fraclab: batch front end for the fractional point-interaction laboratory.
//
// Subcommands: green, defect-index, spectrum, bs-spectrum,
// resonance detect|build, limit sweep, check-all. Every subcommand accepts
// --check (run the owning module's invariant suite and exit nonzero on
// failure) and --config FILE (plain key=value lines; command-line flags win).
// Exit codes: 0 ok, 2 configuration error, 3 numerical failure.
// FRACLAB_THREADS overrides the worker-thread count; output is byte-stable
// across thread counts.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fraclab/checks.hpp"
#include "fraclab/fraclab.hpp"

using nlohmann::json;
using namespace fraclab;

namespace {

int report_checks(const std::vector<CheckResult>& results) {
  int fails = 0;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
    std::cout << "\n";
    if (!r.pass) ++fails;
  }
  std::cout << (fails == 0 ? "all checks passed" : "checks FAILED") << "\n";
  return fails == 0 ? 0 : 1;
}

std::unique_ptr<std::ofstream> open_output(const std::string& path) {
  if (path.empty()) return nullptr;
  auto f = std::make_unique<std::ofstream>(path);
  if (!*f) throw std::invalid_argument("cannot open output file: " + path);
  return f;
}

struct PotentialSpec {
  std::string kind = "gaussian";  // gaussian | bump | resonant
  double amplitude = 1.0;
  double width = 1.0;

  // resonant: built via the constructive resonance machinery; otherwise a
  // negative bump of the given mass/width
  Potential make(double s, int d, const Grid& grid) const {
    if (kind == "resonant") {
      BumpSpec th;
      th.width = width;
      th.amplitude = amplitude;
      return build_resonant_potential(th, s, d, grid).V;
    }
    BumpSpec th;
    th.kind = kind == "bump" ? BumpSpec::Kind::CompactBump : BumpSpec::Kind::Gaussian;
    th.width = width;
    th.amplitude = amplitude;
    if (kind != "bump" && kind != "gaussian")
      throw std::invalid_argument("unknown potential kind: " + kind);
    return Potential::tabulate([th, d](double x) { return -th.value(x, d); }, grid, s);
  }
};

void add_potential_flags(CLI::App* cmd, PotentialSpec& spec) {
  cmd->add_option("--potential", spec.kind, "potential kind: gaussian|bump|resonant");
  cmd->add_option("--amplitude", spec.amplitude, "potential amplitude (mass for gaussian)");
  cmd->add_option("--width", spec.width, "potential width");
}

FractionalParams params_checked(double s, int d) {
  FractionalParams p = FractionalParams::make(s, d);
  require_regime_supported(p);
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fraclab: point-like perturbations of fractional Laplacians, numerically"};
  app.require_subcommand(1);
  app.set_config("--config", "", "plain key=value configuration file; flags win");

  // shared knobs
  double s = 2.0, lambda = 1.0, cutoff = 40.0, grading = 3.0;
  int d = 3, grid_n = 200;
  std::string output, summary_path;
  bool check_only = false;

  auto add_common = [&](CLI::App* cmd, bool with_grid) {
    cmd->add_option("--s", s, "fractional power s (of (-Delta)^{s/2})");
    cmd->add_option("--d", d, "dimension, 1 or 3");
    cmd->add_option("--output", output, "write CSV here instead of stdout");
    cmd->add_flag("--check", check_only, "run the module invariant suite and exit");
    if (with_grid) {
      cmd->add_option("--grid-n", grid_n, "number of grid points");
      cmd->add_option("--cutoff", cutoff, "domain truncation radius R");
      cmd->add_option("--grading", grading, "grid grading exponent (>= 1)");
    }
  };

  // --- green -----------------------------------------------------------
  auto* cmd_green = app.add_subcommand("green", "evaluate the Green function G_{s,lambda}");
  std::vector<double> xs{1.0};
  add_common(cmd_green, false);
  cmd_green->add_option("--lambda", lambda, "spectral parameter lambda >= 0");
  cmd_green->add_option("--x", xs, "evaluation points (repeatable)");

  // --- defect-index ------------------------------------------------------
  auto* cmd_defect = app.add_subcommand("defect-index",
                                        "deficiency index of the restricted operator");
  add_common(cmd_defect, false);

  // --- spectrum ----------------------------------------------------------
  auto* cmd_spec = app.add_subcommand("spectrum",
                                      "discrete spectrum of the point interaction");
  double alpha = -1.0;
  bool friedrichs = false;
  add_common(cmd_spec, false);
  cmd_spec->add_option("--alpha", alpha, "extension parameter");
  cmd_spec->add_flag("--friedrichs", friedrichs, "Friedrichs extension (alpha = infinity)");

  // --- bs-spectrum ---------------------------------------------------------
  auto* cmd_bs = app.add_subcommand("bs-spectrum", "Birman-Schwinger spectrum u G v");
  PotentialSpec bs_pot;
  int bs_count = 12;
  add_common(cmd_bs, true);
  cmd_bs->add_option("--lambda", lambda, "spectral parameter lambda >= 0");
  add_potential_flags(cmd_bs, bs_pot);
  cmd_bs->add_option("--count", bs_count, "how many eigenvalues to print");

  // --- resonance detect|build ---------------------------------------------
  auto* cmd_res = app.add_subcommand("resonance", "zero-energy resonance tools");
  cmd_res->require_subcommand(1);
  auto* cmd_detect = cmd_res->add_subcommand("detect", "detect a zero-energy resonance");
  PotentialSpec det_pot;
  add_common(cmd_detect, true);
  add_potential_flags(cmd_detect, det_pot);
  auto* cmd_build = cmd_res->add_subcommand("build", "construct a resonant potential");
  std::string theta_kind = "gaussian";
  double theta_width = 1.0;
  add_common(cmd_build, true);
  cmd_build->add_option("--theta", theta_kind, "bump kind: gaussian|bump");
  cmd_build->add_option("--width", theta_width, "bump width");

  // --- limit sweep -----------------------------------------------------------
  auto* cmd_limit = app.add_subcommand("limit", "shrinking-potential limits");
  cmd_limit->require_subcommand(1);
  auto* cmd_sweep = cmd_limit->add_subcommand("sweep", "norm-resolvent convergence sweep");
  std::string regime = "3d-res";
  double eta_strength = 0.0, eta0 = 1.0;
  std::vector<double> eps_list{0.3, 0.2, 0.14, 0.1, 0.07, 0.05};
  bool calibrate = true;
  PotentialSpec sweep_pot;
  sweep_pot.kind = "resonant";
  add_common(cmd_sweep, true);
  cmd_sweep->add_option("--regime", regime, "3d-res | 1d-res | 1d-indep");
  cmd_sweep->add_option("--lambda", lambda, "spectral parameter lambda > 0");
  cmd_sweep->add_option("--eta-strength", eta_strength, "distortion strength eta_s (resonant)");
  cmd_sweep->add_option("--eta0", eta0, "eta(0) (resonance-independent regime)");
  cmd_sweep->add_option("--eps", eps_list, "epsilon values (repeatable)");
  cmd_sweep->add_flag("--calibrate,!--no-calibrate", calibrate,
                      "rescale V to sit exactly on the discrete resonance");
  add_potential_flags(cmd_sweep, sweep_pot);
  cmd_sweep->add_option("--summary", summary_path, "write the JSON summary here");

  // --- check-all ------------------------------------------------------------
  auto* cmd_all = app.add_subcommand("check-all", "run every module invariant suite");
  (void)cmd_all;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    std::unique_ptr<std::ofstream> file = open_output(output);
    std::ostream& os = file ? *file : std::cout;

    if (app.got_subcommand(cmd_all)) return report_checks(all_checks());

    if (app.got_subcommand(cmd_green)) {
      if (check_only) return report_checks(green_checks());
      FractionalParams p = FractionalParams::make(s, d);
      ConfigEcho cfg{{"s", format_g17(s)},
                     {"d", std::to_string(d)},
                     {"lambda", format_g17(lambda)}};
      CsvWriter csv(os, "green", cfg, {"x", "lambda", "s", "d", "value", "abs_err"});
      for (double x : xs) {
        GreenEval g = green(p, lambda, x);
        csv.row({format_g17(x), format_g17(lambda), format_g17(s), std::to_string(d),
                 format_g17(g.value), format_g17(g.abs_err)});
      }
      return 0;
    }

    if (app.got_subcommand(cmd_defect)) {
      if (check_only) return report_checks(core_math_checks());
      ConfigEcho cfg{{"s", format_g17(s)}, {"d", std::to_string(d)}};
      os << config_header("defect-index", cfg) << "\n";
      os << deficiency_index(s, d) << "\n";
      return 0;
    }

    if (app.got_subcommand(cmd_spec)) {
      if (check_only) return report_checks(core_math_checks());
      FractionalParams p = params_checked(s, d);
      PointInteraction k = friedrichs ? PointInteraction::friedrichs(p)
                                      : PointInteraction::with_alpha(p, alpha);
      ConfigEcho cfg{{"s", format_g17(s)},
                     {"d", std::to_string(d)},
                     {"alpha", friedrichs ? "friedrichs" : format_g17(alpha)}};
      CsvWriter csv(os, "spectrum", cfg,
                    {"alpha", "s", "d", "E_closed_form", "E_from_pole", "rel_diff"});
      auto E = bound_state_energy(k);
      if (!E) {
        csv.row({friedrichs ? "friedrichs" : format_g17(alpha), format_g17(s),
                 std::to_string(d), "none", "none", "none"});
        return 0;
      }
      // independent route: solve theta(s, L, d) = alpha for L by bisection
      double lo = 1e-14, hi = 1e14;
      auto f = [&](double L) { return theta(s, L, d) - alpha; };
      double flo = f(lo);
      for (int it = 0; it < 400; ++it) {
        const double mid = std::sqrt(lo * hi);  // geometric bisection
        if (flo * f(mid) <= 0.0)
          hi = mid;
        else {
          lo = mid;
          flo = f(lo);
        }
      }
      const double from_pole = -std::sqrt(lo * hi);
      const double rel = std::abs(from_pole - *E) / std::abs(*E);
      csv.row({format_g17(alpha), format_g17(s), std::to_string(d), format_g17(*E),
               format_g17(from_pole), format_g17(rel)});
      return 0;
    }

    if (app.got_subcommand(cmd_bs)) {
      if (check_only) return report_checks(birman_schwinger_checks());
      params_checked(s, d);
      Grid grid = make_grid(d, cutoff, grid_n, grading);
      Potential V = bs_pot.make(s, d, grid);
      auto spec = bs_spectrum(V, s, lambda, grid);
      ConfigEcho cfg{{"s", format_g17(s)},        {"d", std::to_string(d)},
                     {"lambda", format_g17(lambda)}, {"potential", bs_pot.kind},
                     {"amplitude", format_g17(bs_pot.amplitude)},
                     {"width", format_g17(bs_pot.width)},
                     {"grid_n", std::to_string(grid_n)},
                     {"cutoff", format_g17(cutoff)}};
      CsvWriter csv(os, "bs-spectrum", cfg, {"index", "eigenvalue"});
      for (int i = 0; i < std::min<int>(bs_count, spec.size()); ++i)
        csv.row({std::to_string(i), format_g17(spec[i])});
      return 0;
    }

    if (app.got_subcommand(cmd_detect)) {
      if (check_only) return report_checks(birman_schwinger_checks());
      params_checked(s, d);
      Grid grid = make_grid(d, cutoff, grid_n, grading);
      Potential V = det_pot.make(s, d, grid);
      ResonanceReport rep = detect_resonance(V, s, grid);
      json j = {{"nearest_eigenvalue", rep.nearest_eigenvalue},
                {"second_eigenvalue", rep.second_eigenvalue},
                {"coupling", rep.coupling},
                {"is_resonant", rep.is_resonant},
                {"is_simple", rep.is_simple},
                {"psi_asymptotic_coefficient", rep.psi_asymptotic_coefficient},
                {"grid_error", rep.grid_error},
                {"tol_eigenvalue", rep.tol_eigenvalue},
                {"tol_coupling", rep.tol_coupling},
                {"config",
                 {{"s", s}, {"d", d}, {"potential", det_pot.kind},
                  {"amplitude", det_pot.amplitude}, {"width", det_pot.width},
                  {"grid_n", grid_n}, {"cutoff", cutoff}, {"grading", grading}}},
                {"version", version_string}};
      os << j.dump(2) << "\n";
      return 0;
    }

    if (app.got_subcommand(cmd_build)) {
      if (check_only) return report_checks(resonance_builder_checks());
      params_checked(s, d);
      Grid grid = make_grid(d, cutoff, grid_n, grading);
      BumpSpec th;
      th.kind = theta_kind == "bump" ? BumpSpec::Kind::CompactBump : BumpSpec::Kind::Gaussian;
      if (theta_kind != "bump" && theta_kind != "gaussian")
        throw std::invalid_argument("unknown --theta kind: " + theta_kind);
      th.width = theta_width;
      BuiltResonance br = build_resonant_potential(th, s, d, grid);
      ConfigEcho cfg{{"s", format_g17(s)},       {"d", std::to_string(d)},
                     {"theta", theta_kind},      {"width", format_g17(theta_width)},
                     {"grid_n", std::to_string(grid_n)}, {"cutoff", format_g17(cutoff)}};
      CsvWriter csv(os, "resonance-build", cfg, {"x", "V", "psi", "phi"});
      for (int i = 0; i < grid.size(); ++i)
        csv.row({format_g17(grid.nodes[i]), format_g17(br.V.values()[i]),
                 format_g17(br.psi[i]), format_g17(br.phi[i])});
      return 0;
    }

    if (app.got_subcommand(cmd_sweep)) {
      if (check_only) return report_checks(shrinking_limit_checks());
      ScalingScheme scheme;
      if (regime == "3d-res")
        scheme = ScalingScheme::resonant(3, eta_strength);
      else if (regime == "1d-res")
        scheme = ScalingScheme::resonant(1, eta_strength);
      else if (regime == "1d-indep")
        scheme = ScalingScheme::independent(eta0);
      else
        throw std::invalid_argument("--regime must be 3d-res, 1d-res or 1d-indep");
      const int dim = scheme.dimension();
      scheme.validate(s);
      Grid outer = make_grid(dim, cutoff, grid_n, grading);
      Potential V = sweep_pot.make(s, dim, outer);
      SweepOptions opt;
      opt.calibrate = calibrate && scheme.resonant();
      SweepResult r = convergence_sweep(V, scheme, s, dim, lambda, eps_list, outer, opt);
      ConfigEcho cfg{{"regime", regime},
                     {"s", format_g17(s)},
                     {"lambda", format_g17(lambda)},
                     {"eta_strength", format_g17(eta_strength)},
                     {"eta0", format_g17(eta0)},
                     {"potential", sweep_pot.kind},
                     {"amplitude", format_g17(sweep_pot.amplitude)},
                     {"width", format_g17(sweep_pot.width)},
                     {"grid_n", std::to_string(grid_n)},
                     {"cutoff", format_g17(cutoff)},
                     {"calibrate", calibrate ? "1" : "0"}};
      CsvWriter csv(os, "limit-sweep", cfg, {"eps", "dist_free", "dist_point", "alpha"});
      for (std::size_t i = 0; i < r.epsilons.size(); ++i)
        csv.row({format_g17(r.epsilons[i]), format_g17(r.dist_to_free[i]),
                 format_g17(r.dist_to_point[i]),
                 r.alpha_predicted ? format_g17(*r.alpha_predicted) : "friedrichs"});
      json j = {{"verdict", verdict_name(r.verdict)},
                {"fitted_order", r.fitted_order},
                {"extrapolated_dist_to_point", r.extrapolated_dist_to_point},
                {"extrapolated_dist_to_free", r.extrapolated_dist_to_free},
                {"rank_one_gap", r.rank_one_gap},
                {"calibration_factor", r.calibration_factor},
                {"dropped_eps", r.dropped_eps},
                {"reconstruction_residual", r.reconstruction_residual},
                {"version", version_string}};
      if (r.alpha_predicted)
        j["alpha"] = *r.alpha_predicted;
      else
        j["alpha"] = "friedrichs";
      if (!summary_path.empty()) {
        std::ofstream sf(summary_path);
        if (!sf) throw std::invalid_argument("cannot open summary file: " + summary_path);
        sf << j.dump(2) << "\n";
      } else {
        os << j.dump(2) << "\n";
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
