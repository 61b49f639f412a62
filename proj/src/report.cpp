#include "lane_emden/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "lane_emden/errors.hpp"
#include "lane_emden/liouville.hpp"
#include "lane_emden/targets.hpp"

namespace lane_emden::report {

using nlohmann::json;
using diagnostics::DiagnosticsReport;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

const double kEnergyCeiling = 5.0 * 8.0 * std::numbers::pi * std::numbers::e;

// Order of the optional fields in JSON and CSV output.
const char* const kOptional[] = {"r0",       "r_min",           "flux_relative_r0",
                                 "flux_relative_rmin", "gamma", "gamma_intercept",
                                 "gamma_r2", "ode_residual",    "nodal_max_radius",
                                 "eps"};

std::map<std::string, double> entry_map(const DiagnosticsReport& r) {
  std::map<std::string, double> m;
  for (auto& [k, v] : diagnostics::numeric_entries(r)) m[k] = v;
  return m;
}

bool sort_key(const DiagnosticsReport& a, const DiagnosticsReport& b) {
  if (a.mode != b.mode) return a.mode < b.mode;
  return a.p < b.p;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

json to_json(const DiagnosticsReport& r) {
  json j;
  j["schema"] = kSchema;
  j["mode"] = r.mode;
  for (auto& [k, v] : diagnostics::numeric_entries(r)) j[k] = v;
  j["quantization_floor_holds"] = r.quantization_floor_holds;
  j["lambda1_plus"] = r.lambda1_plus;
  j["lambda1_minus"] = r.lambda1_minus;
  if (r.m) j["m"] = *r.m;
  json refs = json::array();
  const auto entries = entry_map(r);
  for (const targets::Target& t : targets::catalog()) {
    const auto it = entries.find(std::string(t.key));
    if (it == entries.end()) continue;
    refs.push_back({{"quantity", t.key},
                    {"label", t.label},
                    {"target", t.value},
                    {"relation", targets::relation_name(t.relation)},
                    {"computed", it->second},
                    {"relative_deviation", (it->second - t.value) / t.value},
                    {"citation", t.citation}});
  }
  j["references"] = refs;
  return j;
}

DiagnosticsReport from_json(const json& j, const std::string& source) {
  const auto fail = [&](const std::string& why) -> DiagnosticsReport {
    throw FormatError(source + ": " + why);
  };
  if (!j.is_object()) return fail("not a JSON object");
  if (!j.contains("schema") || j["schema"] != kSchema) {
    return fail(std::string("schema is not ") + kSchema);
  }
  DiagnosticsReport r;
  if (!j.contains("mode") || !j["mode"].is_string()) return fail("missing field 'mode'");
  r.mode = j["mode"].get<std::string>();
  if (r.mode != "radial" && r.mode != "planar") return fail("unknown mode '" + r.mode + "'");
  const auto num = [&](const char* key, double& out) {
    if (!j.contains(key) || !j[key].is_number()) fail(std::string("missing numeric field '") + key + "'");
    out = j[key].get<double>();
  };
  const auto flag = [&](const char* key, bool& out) {
    if (!j.contains(key) || !j[key].is_boolean()) fail(std::string("missing boolean field '") + key + "'");
    out = j[key].get<bool>();
  };
  const auto opt = [&](const char* key, std::optional<double>& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) fail(std::string("field '") + key + "' is not a number");
    out = j[key].get<double>();
  };
  num("p", r.p);
  num("sup_plus", r.sup_plus);
  num("sup_minus", r.sup_minus);
  num("energy", r.energy);
  num("energy_plus", r.energy_plus);
  num("energy_minus", r.energy_minus);
  num("energy_functional", r.energy_functional);
  num("potential", r.potential);
  num("energy_identity_rel", r.energy_identity_rel);
  num("log_mu_plus", r.log_mu_plus);
  num("log_mu_minus", r.log_mu_minus);
  num("mu_plus", r.mu_plus);
  num("mu_minus", r.mu_minus);
  num("mu_ratio", r.mu_ratio);
  num("ell_hat", r.ell_hat);
  num("nodal_extent_ratio", r.nodal_extent_ratio);
  num("log_dist_nodal_over_mu_plus", r.log_dist_nodal_over_mu_plus);
  num("d_plus", r.d_plus);
  num("d_plus_gradient", r.d_plus_gradient);
  num("d_minus", r.d_minus);
  num("d_minus_gradient", r.d_minus_gradient);
  num("p3_constant", r.p3_constant);
  num("quantization_floor", r.quantization_floor);
  num("sqrt_p_u_07", r.sqrt_p_u_07);
  flag("quantization_floor_holds", r.quantization_floor_holds);
  flag("lambda1_plus", r.lambda1_plus);
  flag("lambda1_minus", r.lambda1_minus);
  opt("r0", r.r0);
  opt("r_min", r.r_min);
  opt("flux_relative_r0", r.flux_relative_r0);
  opt("flux_relative_rmin", r.flux_relative_rmin);
  opt("gamma", r.gamma);
  opt("gamma_intercept", r.gamma_intercept);
  opt("gamma_r2", r.gamma_r2);
  opt("ode_residual", r.ode_residual);
  opt("nodal_max_radius", r.nodal_max_radius);
  opt("eps", r.eps);
  if (j.contains("m")) {
    if (!j["m"].is_number_integer()) fail("field 'm' is not an integer");
    r.m = j["m"].get<int>();
  }
  return r;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
  if (!out) throw UsageError("write failed for " + path.string());
}

Extrapolation richardson(const std::vector<double>& p, const std::vector<double>& values) {
  if (p.size() != values.size() || p.empty()) {
    throw DomainError("richardson: need matching, non-empty p and value lists");
  }
  std::vector<std::size_t> idx(p.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
  idx.resize(std::min<std::size_t>(3, idx.size()));
  if (idx.size() == 1) return {values[idx[0]], 0.0, 1};
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i : idx) {
    mx += 1.0 / p[i];
    my += values[i];
  }
  const double n = static_cast<double>(idx.size());
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i : idx) {
    sxx += (1.0 / p[i] - mx) * (1.0 / p[i] - mx);
    sxy += (1.0 / p[i] - mx) * (values[i] - my);
  }
  if (sxx == 0.0) throw DomainError("richardson: repeated p values");
  const double k = sxy / sxx;
  return {my - k * mx, k, static_cast<int>(idx.size())};
}

std::vector<ComparisonRow> comparison_table(std::vector<DiagnosticsReport> reports) {
  if (reports.empty()) throw UsageError("comparison table: no reports");
  std::sort(reports.begin(), reports.end(), sort_key);
  if (reports.front().mode != reports.back().mode) {
    throw UsageError("comparison table: reports of different modes");
  }
  std::vector<std::map<std::string, double>> maps;
  std::vector<double> ps;
  for (const auto& r : reports) {
    maps.push_back(entry_map(r));
    ps.push_back(r.p);
  }
  std::vector<ComparisonRow> rows;
  for (const targets::Target& t : targets::catalog()) {
    const std::string key(t.key);
    if (!maps.front().count(key)) continue;
    std::vector<double> vals;
    for (const auto& m : maps) vals.push_back(m.at(key));
    const Extrapolation ex = richardson(ps, vals);
    ComparisonRow row;
    row.quantity = key;
    row.label = std::string(t.label);
    row.target = t.value;
    row.relation = std::string(targets::relation_name(t.relation));
    row.p_max = ps.back();
    row.raw = vals.back();
    row.raw_deviation = (row.raw - t.value) / t.value;
    row.extrapolated = ex.value;
    row.extrapolated_deviation = (ex.value - t.value) / t.value;
    row.monotone_approach = true;
    for (std::size_t i = 1; i < vals.size(); ++i) {
      if (!(std::abs(vals[i] - t.value) < std::abs(vals[i - 1] - t.value))) {
        row.monotone_approach = false;
      }
    }
    row.bound_holds = row.raw >= t.value;
    row.citation = std::string(t.citation);
    rows.push_back(row);
  }
  return rows;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  os << "quantity,label,target,relation,p_max,raw,raw_rel_dev,extrapolated,extrap_rel_dev,"
        "method,monotone_approach,bound_holds,citation\n";
  for (const auto& r : rows) {
    os << r.quantity << ',' << r.label << ',' << fmt(r.target) << ',' << r.relation << ','
       << fmt(r.p_max) << ',' << fmt(r.raw) << ',' << fmt(r.raw_deviation) << ','
       << fmt(r.extrapolated) << ',' << fmt(r.extrapolated_deviation) << ','
       << csv_cell(kExtrapolationLabel) << ',' << (r.monotone_approach ? "true" : "false") << ','
       << (r.bound_holds ? "true" : "false") << ',' << csv_cell(r.citation) << '\n';
  }
  return os.str();
}

std::string sweep_csv(std::vector<DiagnosticsReport> reports) {
  std::sort(reports.begin(), reports.end(), sort_key);
  // Column set: the fixed fields followed by any optional field present in a row.
  std::vector<std::string> columns;
  DiagnosticsReport blank;
  for (auto& [k, v] : diagnostics::numeric_entries(blank)) columns.push_back(k);
  for (const char* k : kOptional) {
    for (const auto& r : reports) {
      if (entry_map(r).count(k)) {
        columns.emplace_back(k);
        break;
      }
    }
  }
  std::ostringstream os;
  os << "mode";
  for (const auto& c : columns) os << ',' << c;
  os << ",m,quantization_floor_holds,lambda1_plus,lambda1_minus\n";
  for (const auto& r : reports) {
    const auto m = entry_map(r);
    os << r.mode;
    for (const auto& c : columns) {
      os << ',';
      if (auto it = m.find(c); it != m.end()) os << fmt(it->second);
    }
    os << ',';
    if (r.m) os << *r.m;
    os << ',' << (r.quantization_floor_holds ? "true" : "false") << ','
       << (r.lambda1_plus ? "true" : "false") << ',' << (r.lambda1_minus ? "true" : "false")
       << '\n';
  }
  return os.str();
}

std::string radial_solution_csv(const radial::RadialSolution& sol) {
  std::ostringstream os;
  os << "r,u,u_prime\n";
  for (std::size_t i = 0; i < sol.r.size(); ++i) {
    os << fmt(sol.r[i]) << ',' << fmt(sol.u[i]) << ',' << fmt(sol.du_dr[i]) << '\n';
  }
  return os.str();
}

std::string planar_snapshot_csv(const planar::PlanarSolution& sol) {
  const auto& d = sol.domain;
  std::ostringstream os;
  os << "s,theta,u\n";
  for (int j = 0; j <= d.n_s(); ++j) {
    const double s = std::exp(d.tau(j));
    for (int k = 0; k < d.n_theta(); ++k) {
      os << fmt(s) << ',' << fmt(d.phi(k)) << ',' << fmt(sol.at(j, k)) << '\n';
    }
  }
  return os.str();
}

std::string nodal_csv(const planar::NodalCurve& curve) {
  std::ostringstream os;
  os << "x,y\n";
  for (const Point& v : curve.vertices) os << fmt(v.x) << ',' << fmt(v.y) << '\n';
  if (!curve.vertices.empty()) {
    os << fmt(curve.vertices.front().x) << ',' << fmt(curve.vertices.front().y) << '\n';
  }
  return os.str();
}

std::string profile_csv(const diagnostics::RescaledProfile& rp,
                        const diagnostics::BubbleTarget& bubble) {
  const Point c = std::visit([](const auto& b) { return b.center; }, bubble);
  std::ostringstream os;
  os << "x,y,v_p,bubble,diff\n";
  for (std::size_t i = 0; i < rp.points.size(); ++i) {
    const double rho = (rp.points[i] - c).norm();
    double b = 0.0;
    if (const auto* s = std::get_if<diagnostics::SingularTarget>(&bubble)) {
      if (rho == 0.0) continue;
      b = liouville::eval_singular(s->bubble, rho);
    } else {
      b = liouville::eval_regular(rho);
    }
    os << fmt(rp.points[i].x) << ',' << fmt(rp.points[i].y) << ',' << fmt(rp.values[i]) << ','
       << fmt(b) << ',' << fmt(rp.values[i] - b) << '\n';
  }
  return os.str();
}

std::string liouville_csv(double ell, const std::vector<double>& radii) {
  const auto b = liouville::make_singular(ell);
  std::ostringstream os;
  os << "r,U,V\n";
  for (double r : radii) {
    os << fmt(r) << ',' << fmt(liouville::eval_regular(r)) << ',';
    if (r > 0.0) os << fmt(liouville::eval_singular(b, r));
    os << '\n';
  }
  return os.str();
}

std::vector<MonotoneFlag> monotone_flags(const std::vector<DiagnosticsReport>& sorted) {
  struct Proxy {
    const char* name;
    bool decreasing;
    double (*get)(const DiagnosticsReport&);
  };
  static const Proxy proxies[] = {
      {"d_plus", true, [](const DiagnosticsReport& r) { return r.d_plus; }},
      {"d_minus", true, [](const DiagnosticsReport& r) { return r.d_minus; }},
      {"nodal_extent_ratio", true, [](const DiagnosticsReport& r) { return r.nodal_extent_ratio; }},
      {"mu_ratio", true, [](const DiagnosticsReport& r) { return r.log_mu_plus - r.log_mu_minus; }},
      {"abs_sqrt_p_u_07", true, [](const DiagnosticsReport& r) { return std::abs(r.sqrt_p_u_07); }},
      {"log_dist_nodal_over_mu_plus", false,
       [](const DiagnosticsReport& r) { return r.log_dist_nodal_over_mu_plus; }},
  };
  std::vector<MonotoneFlag> out;
  if (sorted.empty()) return out;
  for (const Proxy& px : proxies) {
    bool holds = true;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      const double a = px.get(sorted[i - 1]);
      const double b = px.get(sorted[i]);
      if (px.decreasing ? !(b < a) : !(b > a)) holds = false;
    }
    out.push_back({sorted.front().mode, px.name, px.decreasing ? "decreasing" : "increasing",
                   holds});
  }
  return out;
}

Comparison compare(const std::vector<std::filesystem::path>& files) {
  if (files.empty()) throw UsageError("report --compare needs at least one file");
  Comparison c;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw FormatError(f.string() + ": cannot open");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw FormatError(f.string() + ": " + e.what());
    }
    c.reports.push_back(from_json(j, f.string()));
  }
  std::stable_sort(c.reports.begin(), c.reports.end(), sort_key);
  c.csv = sweep_csv(c.reports);
  std::vector<DiagnosticsReport> group;
  for (std::size_t i = 0; i <= c.reports.size(); ++i) {
    if (i == c.reports.size() || (!group.empty() && group.front().mode != c.reports[i].mode)) {
      auto flags = monotone_flags(group);
      c.flags.insert(c.flags.end(), flags.begin(), flags.end());
      group.clear();
    }
    if (i < c.reports.size()) group.push_back(c.reports[i]);
  }
  return c;
}

std::string flags_csv(const std::vector<MonotoneFlag>& flags) {
  std::ostringstream os;
  os << "mode,quantity,direction,holds\n";
  for (const auto& f : flags) {
    os << f.mode << ',' << f.quantity << ',' << f.direction << ',' << (f.holds ? "true" : "false")
       << '\n';
  }
  return os.str();
}

std::vector<std::string> invariant_violations(const DiagnosticsReport& r, double ode_tolerance) {
  std::vector<std::string> out;
  for (auto& [k, v] : diagnostics::numeric_entries(r)) {
    if (!std::isfinite(v)) {
      out.push_back("entry '" + k + "' is not finite");
    }
  }
  if (!(r.log_mu_plus <= r.log_mu_minus)) out.push_back("mu+ exceeds mu-");
  if (!r.lambda1_plus) out.push_back("||u+||^(p-1) below lambda1");
  if (!r.lambda1_minus) out.push_back("||u-||^(p-1) below lambda1");
  if (r.mode == "radial") {
    if (!(r.energy_identity_rel < 1e-6)) {
      out.push_back("energy identity off by " + fmt(r.energy_identity_rel));
    }
    if (r.ode_residual && !(*r.ode_residual < ode_tolerance)) {
      out.push_back("ODE residual " + fmt(*r.ode_residual) + " above " + fmt(ode_tolerance));
    }
    if (r.flux_relative_r0 && !(*r.flux_relative_r0 < 1e-4)) {
      out.push_back("flux balance at r0 off by " + fmt(*r.flux_relative_r0));
    }
    if (r.flux_relative_rmin && !(*r.flux_relative_rmin < 1e-4)) {
      out.push_back("flux balance at r_min off by " + fmt(*r.flux_relative_rmin));
    }
  } else if (!(r.energy < kEnergyCeiling)) {
    out.push_back("energy " + fmt(r.energy) + " not below 5 * 8 pi e");
  }
  return out;
}

namespace {

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
}

int line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? 0 : line_of(text, pos);
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(source + ":" + std::to_string(line_of(text, e.byte)) +
                     ": malformed JSON (" + e.what() + ")");
  }
  if (!j.is_object()) throw UsageError(source + ":1: expected a JSON object");
  const auto where = [&](const std::string& key) {
    const int line = line_of_key(text, key);
    return source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": field '" + key +
           "'";
  };
  RunConfig cfg;
  auto& c = cfg.continuation;
  const auto number = [&](const char* key, double& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) throw UsageError(where(key) + " must be a number");
    out = j[key].get<double>();
  };
  const auto integer = [&](const char* key, int& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer()) throw UsageError(where(key) + " must be an integer");
    out = j[key].get<int>();
  };
  static const char* const known[] = {
      "m",        "eps_end",   "p_start",   "p_end",   "n_s",        "n_theta",
      "log_s_min", "eps_step", "p_step",    "max_p_step", "min_step", "newton_tol",
      "max_newton", "energy_alpha", "mesh_check", "output_dir"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known)) {
      throw UsageError(where(it.key()) + " is not a known setting");
    }
  }
  integer("m", c.m);
  number("eps_end", c.eps_end);
  number("p_start", c.p_start);
  number("p_end", c.p_end);
  integer("n_s", c.n_s);
  integer("n_theta", c.n_theta);
  number("log_s_min", c.log_s_min);
  number("eps_step", c.eps_step);
  number("p_step", c.p_step);
  number("max_p_step", c.max_p_step);
  number("min_step", c.min_step);
  number("newton_tol", c.newton_tol);
  integer("max_newton", c.max_newton);
  number("energy_alpha", c.energy_alpha);
  if (j.contains("mesh_check")) {
    if (!j["mesh_check"].is_boolean()) throw UsageError(where("mesh_check") + " must be true or false");
    cfg.mesh_check = j["mesh_check"].get<bool>();
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) throw UsageError(where("output_dir") + " must be a string");
    cfg.output_dir = j["output_dir"].get<std::string>();
  }
  try {
    c.validate();
  } catch (const Error& e) {
    throw UsageError(source + ": " + e.what());
  }
  return cfg;
}

json to_json(const RunConfig& cfg) {
  const auto& c = cfg.continuation;
  json j{{"m", c.m},
         {"eps_end", c.eps_end},
         {"p_start", c.p_start},
         {"p_end", c.p_end},
         {"n_s", c.n_s},
         {"n_theta", c.n_theta},
         {"eps_step", c.eps_step},
         {"p_step", c.p_step},
         {"max_p_step", c.max_p_step},
         {"min_step", c.min_step},
         {"newton_tol", c.newton_tol},
         {"max_newton", c.max_newton},
         {"energy_alpha", c.energy_alpha},
         {"mesh_check", cfg.mesh_check}};
  if (std::isfinite(c.log_s_min)) j["log_s_min"] = c.log_s_min;
  if (!cfg.output_dir.empty()) j["output_dir"] = cfg.output_dir;
  return j;
}

}  // namespace lane_emden::report
