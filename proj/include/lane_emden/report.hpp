#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lane_emden/diagnostics.hpp"
#include "lane_emden/planar.hpp"
#include "lane_emden/radial.hpp"

// Persistence and tables: JSON report blocks, CSV tables, run configuration
// files and the merge of several report files. All number formatting goes
// through fixed printf formats so identical inputs give identical bytes.

namespace lane_emden::report {

inline constexpr const char* kSchema = "lane-emden-report/1";
inline constexpr const char* kExtrapolationLabel = "extrapolated (Richardson, 1/p)";

/// Shortest-ish fixed format used in every CSV cell.
std::string fmt(double v);

nlohmann::json to_json(const diagnostics::DiagnosticsReport& r);
/// Throws FormatError (mentioning `source`) on a schema mismatch.
diagnostics::DiagnosticsReport from_json(const nlohmann::json& j, const std::string& source);

/// Pretty JSON text with a trailing newline.
std::string dump(const nlohmann::json& j);

/// Writes text, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

/// v(p) ~ c + k / p fitted by least squares over the three largest p
/// (all of them when fewer are given).
struct Extrapolation {
  double value;
  double slope;
  int points;
};
Extrapolation richardson(const std::vector<double>& p, const std::vector<double>& values);

struct ComparisonRow {
  std::string quantity;
  std::string label;
  double target;
  std::string relation;
  double p_max;
  double raw;
  double raw_deviation;     // (raw - target) / target
  double extrapolated;
  double extrapolated_deviation;
  bool monotone_approach;   // |value - target| shrinks along the sweep (limits)
  bool bound_holds;         // raw >= target (lower bounds)
  std::string citation;
};

/// One row per reference constant that matches a report field. Reports are
/// taken in increasing p; mixed modes are not compared.
std::vector<ComparisonRow> comparison_table(std::vector<diagnostics::DiagnosticsReport> reports);
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

/// One row per report, sorted by (mode, p).
std::string sweep_csv(std::vector<diagnostics::DiagnosticsReport> reports);

/// r, u, u_prime on the stored grid.
std::string radial_solution_csv(const radial::RadialSolution& sol);
/// s, theta, u on the full grid of the fundamental sector, boundary ring included.
std::string planar_snapshot_csv(const planar::PlanarSolution& sol);
/// x, y of the closed polyline (first vertex repeated at the end).
std::string nodal_csv(const planar::NodalCurve& curve);
/// x, y, v_p, bubble, diff.
std::string profile_csv(const diagnostics::RescaledProfile& rp,
                        const diagnostics::BubbleTarget& bubble);
/// r, U, V for the regular bubble and the singular bubble of parameter ell.
std::string liouville_csv(double ell, const std::vector<double>& radii);

struct MonotoneFlag {
  std::string mode;
  std::string quantity;
  std::string direction;  // "decreasing" or "increasing"
  bool holds;
};

struct Comparison {
  std::vector<diagnostics::DiagnosticsReport> reports;  // sorted by (mode, p)
  std::string csv;
  std::vector<MonotoneFlag> flags;
};

/// Merges report files keyed by p. Throws FormatError naming the offending
/// file, UsageError for an empty list.
Comparison compare(const std::vector<std::filesystem::path>& files);
std::string flags_csv(const std::vector<MonotoneFlag>& flags);

/// Monotonicity of the convergence proxies for reports of one mode sorted by p.
std::vector<MonotoneFlag> monotone_flags(const std::vector<diagnostics::DiagnosticsReport>& sorted);

/// Checked invariants of an accepted solution; empty when all hold.
std::vector<std::string> invariant_violations(const diagnostics::DiagnosticsReport& r,
                                              double ode_tolerance = 1e-9);

/// Planar run file: continuation parameters plus the mesh-doubling check.
struct RunConfig {
  planar::ContinuationConfig continuation;
  bool mesh_check = true;     // re-solve at (p_start, eps_end) on a doubled mesh
  std::string output_dir;     // empty: caller decides
};

/// Throws UsageError naming the line and field of the problem.
RunConfig parse_run_config(const std::string& text, const std::string& source);
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace lane_emden::report
