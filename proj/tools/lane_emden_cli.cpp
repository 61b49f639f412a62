// lane-emden: command line front end for the radial and planar solvers.
//
//   lane-emden solve-radial --p 100
//   lane-emden sweep --p 100,250,500,1000 --plots
//   lane-emden profiles --ell 1
//   lane-emden solve-2d --config run.json
//   lane-emden report --compare a.json b.json
//
// Output goes to --out (default ./lane_emden_out); LANE_EMDEN_OUT overrides it.
// Exit codes: 0 ok, 2 usage, 3 solver failure, 4 invariant violation.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lane_emden/diagnostics.hpp"
#include "lane_emden/errors.hpp"
#include "lane_emden/liouville.hpp"
#include "lane_emden/planar.hpp"
#include "lane_emden/radial.hpp"
#include "lane_emden/report.hpp"
#include "lane_emden/svg.hpp"
#include "lane_emden/targets.hpp"

namespace fs = std::filesystem;
using namespace lane_emden;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kSolver = 3;
constexpr int kInvariant = 4;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Usage:
    case ErrorKind::Domain:
    case ErrorKind::Format:
      return kUsage;
    case ErrorKind::Invariant:
      return kInvariant;
    default:
      return kSolver;
  }
}

fs::path output_dir(const std::string& flag, const std::string& from_config = {}) {
  if (const char* env = std::getenv("LANE_EMDEN_OUT"); env && *env) return env;
  if (!flag.empty()) return flag;
  if (!from_config.empty()) return from_config;
  return "lane_emden_out";
}

std::string p_tag(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

// Prints violations and returns whether there were any.
bool report_violations(const std::string& stage, const std::vector<std::string>& v) {
  for (const auto& s : v) std::cerr << stage << ": invariant violated: " << s << '\n';
  return !v.empty();
}

nlohmann::json radial_block(const radial::RadialSolution& sol) {
  const auto e = radial::energy(sol);
  return {{"p", sol.p},
          {"a", sol.a},
          {"r0", sol.r0()},
          {"r_min", sol.r_min()},
          {"u_min", sol.u_min()},
          {"energy_functional", e.E},
          {"p_grad", e.p_grad},
          {"p_grad_plus", e.p_grad_plus},
          {"p_grad_minus", e.p_grad_minus},
          {"p_potential", e.p_potential}};
}

struct RadialRun {
  radial::RadialSolution sol;
  diagnostics::DiagnosticsReport rep;
};

RadialRun run_radial(double p, const fs::path& out, const radial::ShootingConfig& cfg) {
  RadialRun run{radial::shoot_one_node(p, cfg), {}};
  run.rep = diagnostics::diagnose(run.sol);
  const std::string tag = p_tag(p);
  nlohmann::json j = report::to_json(run.rep);
  j["solution"] = radial_block(run.sol);
  report::write_text(out / ("radial_p" + tag + ".json"), report::dump(j));
  report::write_text(out / ("radial_p" + tag + ".csv"), report::radial_solution_csv(run.sol));
  return run;
}

void print_summary(const diagnostics::DiagnosticsReport& r) {
  std::printf("p=%-8g u(x+)=%.6f |u(x-)|=%.6f p|grad u|^2=%.4f ell=%.5f d+=%.3e d-=%.3e\n", r.p,
              r.sup_plus, r.sup_minus, r.energy, r.ell_hat, r.d_plus, r.d_minus);
}

int cmd_solve_radial(double p, const std::string& out_flag, double rel_tol) {
  const fs::path out = output_dir(out_flag);
  radial::ShootingConfig cfg;
  cfg.rel_tol = rel_tol;
  cfg.validate();
  const RadialRun run = run_radial(p, out, cfg);
  print_summary(run.rep);
  std::cout << "wrote " << (out / ("radial_p" + p_tag(p) + ".json")).string() << '\n';
  return report_violations("solve-radial p=" + p_tag(p),
                           report::invariant_violations(run.rep, 10.0 * cfg.rel_tol))
             ? kInvariant
             : kOk;
}

svg::Series axis_profile(const radial::RadialSolution& sol, const diagnostics::PeakPoint& peak,
                         Point from, double s0, double s1, const std::string& label,
                         std::vector<double>& bubble_x, std::vector<double>& bubble_y,
                         const diagnostics::BubbleTarget& bubble) {
  std::vector<Point> pts;
  std::vector<double> xs;
  for (int i = 0; i <= 200; ++i) {
    const double s = s0 + (s1 - s0) * i / 200.0;
    pts.push_back({from.x + s, from.y});
    xs.push_back(s);
  }
  const auto rp = diagnostics::rescale(sol, peak, pts);
  bubble_x = xs;
  bubble_y.clear();
  for (double s : xs) {
    if (const auto* t = std::get_if<diagnostics::SingularTarget>(&bubble)) {
      bubble_y.push_back(liouville::eval_singular(t->bubble, s));
    } else {
      bubble_y.push_back(liouville::eval_regular(s));
    }
  }
  return {label, xs, rp.values, false};
}

void write_plots(const fs::path& out, const std::vector<RadialRun>& runs) {
  svg::Plot u_plot{"u(r)", "r", "u", {}, false};
  svg::Plot plus{"v+ against U", "|x|", "v", {}, false};
  svg::Plot minus{"v- against V", "|x - x_inf|", "v", {}, false};
  svg::Plot ratios{"ratios against 1/p", "1/p", "value", {}, false};
  svg::Series ell{"ell_hat", {}, {}, true};
  svg::Series mu_ratio{"log(mu+/mu-)/p", {}, {}, true};
  svg::Series nodal{"r0/mu-", {}, {}, true};
  for (const auto& run : runs) {
    const auto& sol = run.sol;
    svg::Series u{"p=" + p_tag(sol.p), {}, {}, false};
    for (std::size_t i = 0; i < sol.r.size(); i += std::max<std::size_t>(1, sol.r.size() / 800)) {
      u.x.push_back(sol.r[i]);
      u.y.push_back(sol.u[i]);
    }
    u_plot.series.push_back(u);

    const auto peaks = diagnostics::find_peaks(sol);
    std::vector<double> bx;
    std::vector<double> by;
    plus.series.push_back(axis_profile(sol, peaks.plus, {0.0, 0.0}, 0.0, 5.0,
                                       "p=" + p_tag(sol.p), bx, by,
                                       diagnostics::RegularTarget{}));
    if (&run == &runs.back()) plus.series.push_back({"U", bx, by, false});

    const Point x_inf{-std::exp(sol.log_r_min() - peaks.minus.log_mu), 0.0};
    const diagnostics::SingularTarget target{liouville::make_singular(run.rep.ell_hat), x_inf};
    minus.series.push_back(axis_profile(sol, peaks.minus, x_inf, 0.2, 5.0,
                                        "p=" + p_tag(sol.p), bx, by, target));
    if (&run == &runs.back()) minus.series.push_back({"V_ell", bx, by, false});

    ell.x.push_back(1.0 / sol.p);
    ell.y.push_back(run.rep.ell_hat);
    mu_ratio.x.push_back(1.0 / sol.p);
    mu_ratio.y.push_back((run.rep.log_mu_plus - run.rep.log_mu_minus) / sol.p);
    nodal.x.push_back(1.0 / sol.p);
    nodal.y.push_back(run.rep.nodal_extent_ratio);
  }
  ratios.series = {ell, mu_ratio, nodal};
  report::write_text(out / "u_r.svg", svg::render(u_plot));
  report::write_text(out / "profile_plus.svg", svg::render(plus));
  report::write_text(out / "profile_minus.svg", svg::render(minus));
  report::write_text(out / "ratios.svg", svg::render(ratios));
}

std::vector<double> parse_p_list(const std::vector<std::string>& items) {
  std::vector<double> ps;
  for (const auto& s : items) {
    if (s.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || s.find_first_not_of(" \t", used) != std::string::npos) {
      throw UsageError("sweep: '" + s + "' is not a number");
    }
    ps.push_back(v);
  }
  return ps;
}

int cmd_sweep(std::vector<double> ps, bool plots, const std::string& out_flag) {
  if (ps.empty()) throw UsageError("sweep: empty p list");
  std::sort(ps.begin(), ps.end());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!(ps[i] > 1.0) || !std::isfinite(ps[i])) {
      throw UsageError("sweep: p values must be finite and > 1 (got " + p_tag(ps[i]) + ")");
    }
    if (i > 0 && ps[i] == ps[i - 1]) throw UsageError("sweep: repeated p = " + p_tag(ps[i]));
  }
  const fs::path out = output_dir(out_flag);
  radial::ShootingConfig cfg;
  std::vector<RadialRun> runs;
  std::vector<diagnostics::DiagnosticsReport> reports;
  bool violated = false;
  for (double p : ps) {
    try {
      runs.push_back(run_radial(p, out, cfg));
    } catch (const Error& e) {
      throw Error(e.kind(), "sweep p=" + p_tag(p) + ": " + e.what());
    }
    const auto& rep = runs.back().rep;
    reports.push_back(rep);
    print_summary(rep);
    violated |= report_violations("sweep p=" + p_tag(p),
                                  report::invariant_violations(rep, 10.0 * cfg.rel_tol));

    const auto& sol = runs.back().sol;
    const auto peaks = diagnostics::find_peaks(sol);
    const auto disk = diagnostics::disk_samples({}, 5.0, 51, 1);
    report::write_text(out / ("profile_plus_p" + p_tag(p) + ".csv"),
                       report::profile_csv(diagnostics::rescale(sol, peaks.plus, disk),
                                           diagnostics::RegularTarget{}));
    const Point x_inf{-std::exp(sol.log_r_min() - peaks.minus.log_mu), 0.0};
    const auto ring = diagnostics::annulus_samples(x_inf, 0.2, 5.0, 49, 4);
    report::write_text(out / ("profile_minus_p" + p_tag(p) + ".csv"),
                       report::profile_csv(diagnostics::rescale(sol, peaks.minus, ring),
                                           diagnostics::SingularTarget{
                                               liouville::make_singular(rep.ell_hat), x_inf}));
  }
  report::write_text(out / "sweep.csv", report::sweep_csv(reports));
  const auto rows = report::comparison_table(reports);
  report::write_text(out / "comparison.csv", report::comparison_csv(rows));
  report::write_text(out / "flags.csv", report::flags_csv(report::monotone_flags(reports)));
  std::printf("\n%-12s %-9s %-12s %12s %10s %14s %10s\n", "quantity", "target", "relation",
              "raw(p_max)", "dev", "extrapolated", "dev");
  for (const auto& r : rows) {
    std::printf("%-12s %-9.6g %-12s %12.6f %+9.3f%% %14.6f %+9.3f%%  [%s]\n", r.quantity.c_str(),
                r.target, r.relation.c_str(), r.raw, 100.0 * r.raw_deviation, r.extrapolated,
                100.0 * r.extrapolated_deviation, r.citation.c_str());
  }
  std::printf("(%s)\n", report::kExtrapolationLabel);
  if (plots) write_plots(out, runs);
  std::cout << "wrote " << (out / "sweep.csv").string() << '\n';
  return violated ? kInvariant : kOk;
}

int cmd_profiles(double ell, const std::string& out_flag) {
  const fs::path out = output_dir(out_flag);
  const auto b = liouville::make_singular(ell);
  std::vector<double> radii;
  for (int i = 0; i <= 400; ++i) radii.push_back(std::pow(10.0, -3.0 + 6.0 * i / 400.0));
  report::write_text(out / ("liouville_ell" + p_tag(ell) + ".csv"), report::liouville_csv(ell, radii));

  const double mu = liouville::regular_mass();
  const double mv = liouville::singular_mass(b);
  const auto& t8 = targets::lookup("8pi");
  const double exact_v = 4.0 * std::numbers::pi * b.alpha;
  std::ostringstream os;
  os << "quantity,computed,exact,relative_deviation,citation\n";
  os << "mass_U," << report::fmt(mu) << ',' << report::fmt(t8.value) << ','
     << report::fmt((mu - t8.value) / t8.value) << ",\"" << t8.citation << "\"\n";
  os << "mass_V," << report::fmt(mv) << ',' << report::fmt(exact_v) << ','
     << report::fmt((mv - exact_v) / exact_v)
     << ",\"singular Liouville bubble: int e^V = 8 pi (1 + eta) = 4 pi alpha\"\n";
  report::write_text(out / ("masses_ell" + p_tag(ell) + ".csv"), os.str());
  std::printf("ell=%g alpha=%.10f beta=%.10f eta=%.10f H=%.10f\n", ell, b.alpha, b.beta, b.eta,
              b.H);
  std::printf("int e^U = %.12f  (8 pi = %.12f)\n", mu, t8.value);
  std::printf("int e^V = %.12f  (4 pi alpha = %.12f)\n", mv, exact_v);
  return kOk;
}

int cmd_solve_2d(const std::string& config_path, const std::string& out_flag) {
  std::ifstream in(config_path);
  if (!in) throw UsageError("cannot read config " + config_path);
  std::stringstream buf;
  buf << in.rdbuf();
  const report::RunConfig cfg = report::parse_run_config(buf.str(), config_path);
  const fs::path out = output_dir(out_flag, cfg.output_dir);
  report::write_text(out / "run_config.json", report::dump(report::to_json(cfg)));

  std::ostringstream steps;
  steps << "p,eps,newton_iterations,residual,nodal_max_radius,energy\n";
  const auto result = planar::continue_from_disk(
      cfg.continuation, [&](const planar::PlanarSolution&, const planar::StepRecord& s) {
        steps << report::fmt(s.p) << ',' << report::fmt(s.eps) << ',' << s.newton_iterations
              << ',' << report::fmt(s.residual) << ',' << report::fmt(s.nodal_max_radius) << ','
              << report::fmt(s.energy) << '\n';
        std::printf("step p=%-8.4f eps=%.4f newton=%d residual=%.2e nodal r=%.6f energy=%.4f\n",
                    s.p, s.eps, s.newton_iterations, s.residual, s.nodal_max_radius, s.energy);
      });
  report::write_text(out / "steps.csv", steps.str());

  const auto& sol = result.solution;
  const double lambda1 = planar::first_eigenvalue(sol.domain);
  const auto rep = diagnostics::diagnose(sol, result.nodal, lambda1);
  nlohmann::json j = report::to_json(rep);
  j["lambda1"] = lambda1;
  j["radial_start_deviation"] = result.radial_start_deviation;
  j["winding"] = result.nodal.winding_about_origin;

  if (cfg.mesh_check) {
    // Doubled mesh on the same inner radius, at the first p of the schedule.
    planar::ContinuationConfig fine = cfg.continuation;
    fine.log_s_min = sol.domain.log_s_min();
    fine.p_end = fine.p_start;
    const auto coarse_run = planar::continue_from_disk(fine);
    fine.n_s *= 2;
    fine.n_theta *= 2;
    const auto fine_run = planar::continue_from_disk(fine);
    const double e0 = planar::planar_energy(coarse_run.solution).p_grad;
    const double e1 = planar::planar_energy(fine_run.solution).p_grad;
    j["mesh_check"] = {{"p", fine.p_start},
                       {"energy", e0},
                       {"energy_doubled", e1},
                       {"relative_change", std::abs(e1 - e0) / e0}};
    std::printf("mesh check at p=%g: energy %.6f -> %.6f (%.3f%%)\n", fine.p_start, e0, e1,
                100.0 * std::abs(e1 - e0) / e0);
  }
  report::write_text(out / "planar_report.json", report::dump(j));
  report::write_text(out / "planar_snapshot.csv", report::planar_snapshot_csv(sol));
  report::write_text(out / "nodal_curve.csv", report::nodal_csv(result.nodal));
  print_summary(rep);
  std::printf("lambda1=%.8f winding=%d nodal max radius=%.6g\n", lambda1,
              result.nodal.winding_about_origin, result.nodal.max_radius);
  return report_violations("solve-2d", report::invariant_violations(rep)) ? kInvariant : kOk;
}

int cmd_report(const std::vector<std::string>& files, const std::string& out_flag) {
  std::vector<fs::path> paths(files.begin(), files.end());
  const auto cmp = report::compare(paths);
  const fs::path out = output_dir(out_flag);
  report::write_text(out / "merged.csv", cmp.csv);
  report::write_text(out / "merged_flags.csv", report::flags_csv(cmp.flags));
  std::cout << cmp.csv;
  for (const auto& f : cmp.flags) {
    std::printf("%s %s %s: %s\n", f.mode.c_str(), f.quantity.c_str(), f.direction.c_str(),
                f.holds ? "yes" : "no");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sign-changing Lane-Emden solutions: radial shooting, planar continuation and "
               "blow-up diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_flag;
  app.add_option("--out", out_flag, "output directory (LANE_EMDEN_OUT overrides)");

  double p_single = 0.0;
  double rel_tol = 1e-10;
  auto* solve = app.add_subcommand("solve-radial", "one-node radial solution at a single p");
  solve->add_option("--p", p_single, "exponent p > 1")->required();
  solve->add_option("--rel-tol", rel_tol, "integrator relative tolerance");

  std::vector<std::string> p_list;
  bool plots = false;
  auto* sweep = app.add_subcommand("sweep", "radial solutions and diagnostics over a p list");
  sweep->add_option("--p", p_list, "comma separated exponents")->delimiter(',')->required();
  sweep->add_flag("--plots", plots, "also write SVG plots");

  double ell = 1.0;
  auto* profiles = app.add_subcommand("profiles", "regular and singular Liouville bubbles");
  profiles->add_option("--ell", ell, "touching radius of the singular bubble")->required();

  std::string config;
  auto* solve2d = app.add_subcommand("solve-2d", "planar continuation from the disk");
  solve2d->add_option("--config", config, "JSON run configuration")->required();

  std::vector<std::string> files;
  auto* rep = app.add_subcommand("report", "merge report files");
  rep->add_option("--compare", files, "report JSON files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve) return cmd_solve_radial(p_single, out_flag, rel_tol);
    if (*sweep) return cmd_sweep(parse_p_list(p_list), plots, out_flag);
    if (*profiles) return cmd_profiles(ell, out_flag);
    if (*solve2d) return cmd_solve_2d(config, out_flag);
    if (*rep) return cmd_report(files, out_flag);
  } catch (const ContinuationError& e) {
    std::cerr << "lane-emden: continuation failed: " << e.what() << " (last good p="
              << e.last_p() << ", eps=" << e.last_eps() << ")\n";
    return kSolver;
  } catch (const Error& e) {
    std::cerr << "lane-emden: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "lane-emden: " << e.what() << '\n';
    return kSolver;
  }
  return kUsage;
}
