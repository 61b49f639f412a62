#include "lane_emden/diagnostics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lane_emden/errors.hpp"

namespace lane_emden::diagnostics {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFdStep = 1e-4;

double safe_exp(double x) { return x < -745.0 ? 0.0 : std::exp(x); }

// Evaluates v = p (u - u_peak)/u_peak and its centered-difference gradient
// at every sample, with `u_at` taking a rescaled point x.
template <class Eval>
RescaledProfile build_profile(const PeakPoint& peak, Point offset, double p,
                              std::span<const Point> points, Eval u_at) {
  RescaledProfile rp;
  rp.center = peak;
  rp.origin_offset = offset;
  rp.points.assign(points.begin(), points.end());
  rp.values.reserve(points.size());
  rp.gradients.reserve(points.size());
  const auto v = [&](Point x) { return p * (u_at(x) - peak.value) / peak.value; };
  for (const Point& x : points) {
    rp.values.push_back(v(x));
    const double gx = (v({x.x + kFdStep, x.y}) - v({x.x - kFdStep, x.y})) / (2.0 * kFdStep);
    const double gy = (v({x.x, x.y + kFdStep}) - v({x.x, x.y - kFdStep})) / (2.0 * kFdStep);
    rp.gradients.push_back({gx, gy});
  }
  return rp;
}

struct LinearFit {
  double slope;
  double intercept;
  double r_squared;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f{};
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += e * e;
  }
  f.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

GammaFit fit_gamma(const std::function<double(double)>& u, double p, double r_lo, double r_hi,
                   int samples) {
  if (!(r_lo > 0.0) || !(r_hi > r_lo) || samples < 3) {
    throw DomainError("gamma_fit: need 0 < r_lo < r_hi and at least three samples");
  }
  std::vector<double> x;
  std::vector<double> y;
  for (int i = 0; i < samples; ++i) {
    const double r = r_lo + (r_hi - r_lo) * i / (samples - 1);
    x.push_back(std::log(r));
    y.push_back(p * u(r));
  }
  const LinearFit f = least_squares(x, y);
  return {f.slope, f.intercept, f.r_squared};
}

}  // namespace

double log_mu_of(double p, double value) {
  return -0.5 * (std::log(p) + (p - 1.0) * std::log(std::abs(value)));
}

namespace {

PeakPoint make_peak(Point location, double value, double p) {
  PeakPoint pk;
  pk.location = location;
  pk.value = value;
  pk.sign = value > 0.0 ? 1 : -1;
  pk.log_mu = log_mu_of(p, value);
  pk.mu = safe_exp(pk.log_mu);
  return pk;
}

}  // namespace

Peaks find_peaks(const radial::RadialSolution& sol) {
  if (!(sol.a > 0.0) || !(sol.u_min() < 0.0)) {
    throw StructureError("find_peaks: solution does not change sign");
  }
  Peaks pk;
  pk.plus = make_peak({0.0, 0.0}, sol.a, sol.p);
  pk.plus.log_mu = sol.log_mu;
  pk.minus = make_peak({sol.r_min(), 0.0}, sol.u_min(), sol.p);
  return pk;
}

Peaks find_peaks(const planar::PlanarSolution& sol) {
  const auto& d = sol.domain;
  int jmax = 0;
  int kmax = 0;
  int jmin = 0;
  int kmin = 0;
  for (int j = 0; j < d.n_s(); ++j) {
    for (int k = 0; k < d.n_theta(); ++k) {
      if (sol.at(j, k) > sol.at(jmax, kmax)) {
        jmax = j;
        kmax = k;
      }
      if (sol.at(j, k) < sol.at(jmin, kmin)) {
        jmin = j;
        kmin = k;
      }
    }
  }
  if (!(sol.at(jmax, kmax) > 0.0) || !(sol.at(jmin, kmin) < 0.0)) {
    throw StructureError("find_peaks: solution does not change sign");
  }
  // Refinement along the ray through the extreme node, on the interpolant;
  // the innermost ring stands for the origin.
  const auto refine = [&](int j, int k, int sign, Point& where) {
    if (j == 0) {
      where = {0.0, 0.0};
      return sol.at(j, k);
    }
    const double ph = d.phi(k);
    const double rho = d.rho(ph);
    const auto at_tau = [&](double t) {
      const double r = std::exp(t) * rho;
      return Point{r * std::cos(ph), r * std::sin(ph)};
    };
    const double hi = std::min(d.tau(j + 1), 0.0);
    const auto best = boost::math::tools::brent_find_minima(
        [&](double t) { return -sign * sol.value(at_tau(t)); }, d.tau(j - 1), hi, 40);
    where = at_tau(best.first);
    return -sign * best.second;
  };
  Point xp{};
  Point xm{};
  const double vp = refine(jmax, kmax, 1, xp);
  const double vm = refine(jmin, kmin, -1, xm);
  return {make_peak(xp, vp, sol.p), make_peak(xm, vm, sol.p)};
}

double max_rescaled_radius(const radial::RadialSolution&, const PeakPoint& peak) {
  // (1 - |x_peak|) / mu in logs.
  return std::exp(std::log1p(-peak.radius()) - peak.log_mu);
}

RescaledProfile rescale(const radial::RadialSolution& sol, const PeakPoint& peak,
                        std::span<const Point> points) {
  const double r_peak = peak.radius();
  const Point offset{r_peak > 0.0 ? std::exp(std::log(r_peak) - peak.log_mu) : 0.0, 0.0};
  const double admissible = max_rescaled_radius(sol, peak) * (1.0 - 1e-12) - kFdStep;
  for (const Point& x : points) {
    if (x.norm() > admissible) {
      throw RangeError("rescale: sample at |x| = " + std::to_string(x.norm()) +
                           " leaves the rescaled domain; max admissible R = " +
                           std::to_string(admissible),
                       admissible);
    }
  }
  const auto u_at = [&](Point x) {
    const double rel = (offset + x).norm();
    if (rel == 0.0) return sol.a;
    return sol.value_at_log(std::min(0.0, peak.log_mu + std::log(rel)));
  };
  return build_profile(peak, offset, sol.p, points, u_at);
}

RescaledProfile rescale(const planar::PlanarSolution& sol, const PeakPoint& peak,
                        std::span<const Point> points) {
  const Point offset = (1.0 / peak.mu) * peak.location;
  double admissible = std::numeric_limits<double>::infinity();
  for (int k = 0; k < sol.domain.n_theta(); ++k) {
    admissible = std::min(admissible, sol.domain.rho(sol.domain.phi(k)));
  }
  admissible = (admissible - peak.radius()) / peak.mu - kFdStep;
  for (const Point& x : points) {
    if (x.norm() > admissible) {
      throw RangeError("rescale: sample at |x| = " + std::to_string(x.norm()) +
                           " leaves the rescaled domain; max admissible R = " +
                           std::to_string(admissible),
                       admissible);
    }
  }
  const auto u_at = [&](Point x) { return sol.value(peak.location + peak.mu * x); };
  return build_profile(peak, offset, sol.p, points, u_at);
}

std::vector<Point> disk_samples(Point center, double radius, int n_radial, int n_angular) {
  std::vector<Point> pts{center};
  for (int i = 1; i <= n_radial; ++i) {
    const double r = radius * i / n_radial;
    for (int k = 0; k < n_angular; ++k) {
      const double th = kTwoPi * k / n_angular;
      pts.push_back({center.x + r * std::cos(th), center.y + r * std::sin(th)});
    }
  }
  return pts;
}

std::vector<Point> annulus_samples(Point center, double inner, double outer, int n_radial,
                                   int n_angular) {
  std::vector<Point> pts;
  for (int i = 0; i < n_radial; ++i) {
    const double r = inner + (outer - inner) * i / std::max(1, n_radial - 1);
    for (int k = 0; k < n_angular; ++k) {
      const double th = kTwoPi * k / n_angular;
      pts.push_back({center.x + r * std::cos(th), center.y + r * std::sin(th)});
    }
  }
  return pts;
}

ProfileDistance profile_distance(const RescaledProfile& rp, const BubbleTarget& bubble, double R,
                                 std::optional<double> exclusion) {
  const bool singular = std::holds_alternative<SingularTarget>(bubble);
  if (singular && !exclusion) {
    throw DomainError("profile_distance: singular comparisons need an exclusion ball");
  }
  const Point c = std::visit([](const auto& b) { return b.center; }, bubble);
  ProfileDistance out;
  for (std::size_t i = 0; i < rp.points.size(); ++i) {
    const Point d = rp.points[i] - c;
    const double rho = d.norm();
    // points built on the circle |x| = R may land one ulp outside it
    if (rho > R * (1.0 + 1e-12) || (exclusion && rho < *exclusion)) continue;
    double value = 0.0;
    double slope = 0.0;
    if (const auto* s = std::get_if<SingularTarget>(&bubble)) {
      value = liouville::eval_singular(s->bubble, rho);
      slope = liouville::singular_derivative(s->bubble, rho);
    } else {
      value = liouville::eval_regular(rho);
      slope = liouville::regular_derivative(rho);
    }
    const Point grad = rho > 0.0 ? (slope / rho) * d : Point{};
    out.value = std::max(out.value, std::abs(rp.values[i] - value));
    out.gradient = std::max(out.gradient, (rp.gradients[i] - grad).norm());
    ++out.samples;
  }
  if (out.samples == 0) throw DomainError("profile_distance: no samples in the comparison set");
  return out;
}

ConcentrationRatios concentration_ratios(const radial::RadialSolution& sol, const Peaks& peaks) {
  if (sol.zeros.empty()) throw StructureError("concentration_ratios: no nodal set");
  ConcentrationRatios c{};
  c.ell_hat = std::exp(sol.log_r_min() - peaks.minus.log_mu);
  c.nodal_extent_ratio = std::exp(sol.log_r0() - peaks.minus.log_mu);
  c.log_dist_nodal_over_mu_plus = sol.log_r0() - peaks.plus.log_mu;
  return c;
}

ConcentrationRatios concentration_ratios(const planar::PlanarSolution&, const Peaks& peaks,
                                         const planar::NodalCurve& nodal) {
  if (nodal.vertices.empty()) throw StructureError("concentration_ratios: no nodal set");
  double extent = 0.0;
  double dist = std::numeric_limits<double>::infinity();
  const std::size_t n = nodal.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = nodal.vertices[i];
    const Point b = nodal.vertices[(i + 1) % n];
    extent = std::max(extent, a.norm());
    // distance from x+ to segment ab
    const Point ab = b - a;
    const Point ap = peaks.plus.location - a;
    const double len2 = ab.x * ab.x + ab.y * ab.y;
    const double t = len2 > 0.0 ? std::clamp((ap.x * ab.x + ap.y * ab.y) / len2, 0.0, 1.0) : 0.0;
    dist = std::min(dist, (peaks.plus.location - (a + t * ab)).norm());
  }
  ConcentrationRatios c{};
  c.ell_hat = peaks.minus.radius() / peaks.minus.mu;
  c.nodal_extent_ratio = extent / peaks.minus.mu;
  c.log_dist_nodal_over_mu_plus = std::log(dist) - peaks.plus.log_mu;
  return c;
}

QuantizationReport quantization_checks(const radial::RadialSolution& sol, const Peaks& peaks,
                                       double slack) {
  QuantizationReport q{};
  const double p = sol.p;
  q.p_grad = sol.energy;
  q.floor = 8.0 * std::numbers::pi *
            (peaks.plus.value * peaks.plus.value + peaks.minus.value * peaks.minus.value);
  q.floor_holds = q.p_grad >= (1.0 - slack) * q.floor;
  double sup = 0.0;
  for (std::size_t i = 1; i < sol.r.size(); ++i) {
    if (sol.u[i] == 0.0) continue;
    sup = std::max(sup, safe_exp(std::log(p) + 2.0 * sol.log_r[i] +
                                 (p - 1.0) * std::log(std::abs(sol.u[i]))));
  }
  q.p3_constant = sup;
  q.lambda1 = kLambda1Disk;
  q.lambda1_plus = (p - 1.0) * std::log(peaks.plus.value) >= std::log(q.lambda1);
  q.lambda1_minus = (p - 1.0) * std::log(-peaks.minus.value) >= std::log(q.lambda1);
  q.sqrt_p_u_07 = std::sqrt(p) * sol.value(0.7);
  return q;
}

QuantizationReport quantization_checks(const planar::PlanarSolution& sol, const Peaks& peaks,
                                       double lambda1, double slack) {
  QuantizationReport q{};
  const double p = sol.p;
  q.p_grad = planar::planar_energy(sol).p_grad;
  q.floor = 8.0 * std::numbers::pi *
            (peaks.plus.value * peaks.plus.value + peaks.minus.value * peaks.minus.value);
  q.floor_holds = q.p_grad >= (1.0 - slack) * q.floor;
  double sup = 0.0;
  const auto& d = sol.domain;
  for (int j = 0; j < d.n_s(); ++j) {
    for (int k = 0; k < d.n_theta(); ++k) {
      const double v = sol.at(j, k);
      if (v == 0.0) continue;
      const double dist = (d.node_position(j, k) - peaks.plus.location).norm();
      if (dist == 0.0) continue;
      sup = std::max(sup, safe_exp(std::log(p) + 2.0 * std::log(dist) +
                                   (p - 1.0) * std::log(std::abs(v))));
    }
  }
  q.p3_constant = sup;
  q.lambda1 = lambda1;
  q.lambda1_plus = (p - 1.0) * std::log(peaks.plus.value) >= std::log(lambda1);
  q.lambda1_minus = (p - 1.0) * std::log(-peaks.minus.value) >= std::log(lambda1);
  q.sqrt_p_u_07 = std::sqrt(p) * sol.value({0.7, 0.0});
  return q;
}

GammaFit gamma_fit(const radial::RadialSolution& sol, double r_lo, double r_hi, int samples) {
  return fit_gamma([&sol](double r) { return sol.value(r); }, sol.p, r_lo, r_hi, samples);
}

FluxReport flux_identity(const radial::RadialSolution& sol, double rho) {
  if (!(rho > 0.0) || !(rho <= 1.0)) {
    throw DomainError("flux_identity: radius must lie in (0, 1]");
  }
  const double p = sol.p;
  const double t_end = std::log(rho);
  const auto S = [p](double t, double u) { return radial::scaled_source(p, t, u); };
  const auto dS = [p](double t, double u, double w) {
    const double s = radial::scaled_source(p, t, u);
    return s == 0.0 ? 0.0 : s * (2.0 + p * w / u);
  };
  // |u|^p e^(2t) has derivative |S| (2 + p w / u).
  double plus = 0.0;
  double minus = 0.0;
  double scale = 0.0;
  const auto add_panel = [&](double t0, double u0, double w0, double t1, double u1, double w1) {
    const double h = t1 - t0;
    if (h <= 0.0) return;
    const double s0 = S(t0, u0);
    const double s1 = S(t1, u1);
    const double d0 = dS(t0, u0, w0);
    const double d1 = dS(t1, u1, w1);
    const double piece = 0.5 * h * (s0 + s1) + h * h / 12.0 * (d0 - d1);
    const double abs_piece = std::abs(piece);
    const double mid = u0 + u1;
    if (mid > 0.0) {
      plus += piece;
    } else {
      minus += piece;
    }
    scale += abs_piece;
  };

  // Disk inside the first node: S ~ e^(2t) a^p.
  const double inner = 0.5 * S(sol.log_r[1], sol.u[1]);
  plus += inner;
  scale += inner;
  for (std::size_t i = 1; i + 1 < sol.r.size(); ++i) {
    const double t0 = sol.log_r[i];
    if (t0 >= t_end) break;
    const double t1 = std::min(sol.log_r[i + 1], t_end);
    const double u1 = t1 == sol.log_r[i + 1] ? sol.u[i + 1] : sol.value_at_log(t1);
    const double w1 = t1 == sol.log_r[i + 1] ? sol.du_dlogr[i + 1] : sol.slope_at_log(t1);
    add_panel(t0, sol.u[i], sol.du_dlogr[i], t1, u1, w1);
  }

  FluxReport f{};
  f.flux = kTwoPi * p * sol.slope_at_log(t_end);
  f.source_plus = kTwoPi * p * plus;
  f.source_minus = kTwoPi * p * minus;
  f.source = f.source_plus + f.source_minus;
  f.residual = std::abs(f.flux + f.source);
  f.scale = kTwoPi * p * scale;
  f.relative = f.residual / f.scale;
  return f;
}

double flux_residual(const std::function<Point(Point)>& gradient,
                     const std::function<double(Point)>& laplacian, double rho, int n_angular,
                     int n_radial) {
  if (!(rho > 0.0) || n_angular < 4 || n_radial < 2) {
    throw DomainError("flux_residual: need rho > 0 and a non-trivial grid");
  }
  const double dth = kTwoPi / n_angular;
  const auto ring = [&](double r, auto&& integrand) {
    double s = 0.0;
    for (int k = 0; k < n_angular; ++k) {
      const double th = k * dth;
      s += integrand(Point{r * std::cos(th), r * std::sin(th)}, th);
    }
    return s * dth;
  };
  const double flux = ring(rho, [&](Point x, double th) {
    const Point g = gradient(x);
    return rho * (g.x * std::cos(th) + g.y * std::sin(th));
  });
  const double volume = boost::math::quadrature::gauss<double, 30>::integrate(
      [&](double r) { return r * ring(r, [&](Point x, double) { return laplacian(x); }); }, 0.0,
      rho);
  (void)n_radial;
  return std::abs(flux - volume);
}

namespace {

void fill_profiles(DiagnosticsReport& rep, const RescaledProfile& plus,
                   const RescaledProfile& minus, const DiagnosticsOptions& opt) {
  const ProfileDistance dp =
      profile_distance(plus, RegularTarget{}, opt.profile_radius, std::nullopt);
  rep.d_plus = dp.value;
  rep.d_plus_gradient = dp.gradient;
  const SingularTarget target{liouville::make_singular(rep.ell_hat),
                              Point{-minus.origin_offset.x, -minus.origin_offset.y}};
  const ProfileDistance dm = profile_distance(minus, target, opt.profile_radius, opt.exclusion);
  rep.d_minus = dm.value;
  rep.d_minus_gradient = dm.gradient;
}

}  // namespace

DiagnosticsReport diagnose(const radial::RadialSolution& sol, const DiagnosticsOptions& opt) {
  DiagnosticsReport rep;
  rep.mode = "radial";
  rep.p = sol.p;
  const Peaks pk = find_peaks(sol);
  const radial::EnergyBreakdown e = radial::energy(sol);
  rep.sup_plus = pk.plus.value;
  rep.sup_minus = -pk.minus.value;
  rep.energy = e.p_grad;
  rep.energy_plus = e.p_grad_plus;
  rep.energy_minus = e.p_grad_minus;
  rep.energy_functional = e.E;
  rep.potential = e.p_potential;
  rep.energy_identity_rel = std::abs(e.p_grad - e.p_potential) / e.p_grad;
  rep.log_mu_plus = pk.plus.log_mu;
  rep.log_mu_minus = pk.minus.log_mu;
  rep.mu_plus = pk.plus.mu;
  rep.mu_minus = pk.minus.mu;
  rep.mu_ratio = safe_exp(pk.plus.log_mu - pk.minus.log_mu);

  const ConcentrationRatios c = concentration_ratios(sol, pk);
  rep.ell_hat = c.ell_hat;
  rep.nodal_extent_ratio = c.nodal_extent_ratio;
  rep.log_dist_nodal_over_mu_plus = c.log_dist_nodal_over_mu_plus;

  const auto disk = disk_samples({}, opt.profile_radius, opt.n_radial, opt.n_angular);
  const RescaledProfile vp = rescale(sol, pk.plus, disk);
  const Point x_inf{-std::exp(sol.log_r_min() - pk.minus.log_mu), 0.0};
  const auto ring = annulus_samples(x_inf, opt.exclusion, opt.profile_radius, opt.n_radial,
                                    opt.n_angular);
  const RescaledProfile vm = rescale(sol, pk.minus, ring);
  fill_profiles(rep, vp, vm, opt);

  const QuantizationReport q = quantization_checks(sol, pk, opt.quantization_slack);
  rep.p3_constant = q.p3_constant;
  rep.quantization_floor = q.floor;
  rep.quantization_floor_holds = q.floor_holds;
  rep.lambda1_plus = q.lambda1_plus;
  rep.lambda1_minus = q.lambda1_minus;
  rep.sqrt_p_u_07 = q.sqrt_p_u_07;

  rep.r0 = sol.r0();
  rep.r_min = sol.r_min();
  rep.flux_relative_r0 = flux_identity(sol, sol.r0()).relative;
  rep.flux_relative_rmin = flux_identity(sol, sol.r_min()).relative;
  const GammaFit g = gamma_fit(sol);
  rep.gamma = g.gamma;
  rep.gamma_intercept = g.intercept;
  rep.gamma_r2 = g.r_squared;
  rep.ode_residual = radial::ode_residual(sol);
  return rep;
}

DiagnosticsReport diagnose(const planar::PlanarSolution& sol, const planar::NodalCurve& nodal,
                           double lambda1, const DiagnosticsOptions& opt) {
  DiagnosticsReport rep;
  rep.mode = "planar";
  rep.p = sol.p;
  rep.m = sol.domain.m();
  rep.eps = sol.domain.eps();
  const Peaks pk = find_peaks(sol);
  const planar::PlanarEnergy e = planar::planar_energy(sol);
  rep.sup_plus = pk.plus.value;
  rep.sup_minus = -pk.minus.value;
  rep.energy = e.p_grad;
  rep.energy_plus = e.p_grad_plus;
  rep.energy_minus = e.p_grad_minus;
  rep.energy_functional = (0.5 * e.p_grad - e.p_potential / (sol.p + 1.0)) / sol.p;
  rep.potential = e.p_potential;
  rep.energy_identity_rel = std::abs(e.p_grad - e.p_potential) / e.p_grad;
  rep.log_mu_plus = pk.plus.log_mu;
  rep.log_mu_minus = pk.minus.log_mu;
  rep.mu_plus = pk.plus.mu;
  rep.mu_minus = pk.minus.mu;
  rep.mu_ratio = safe_exp(pk.plus.log_mu - pk.minus.log_mu);

  const ConcentrationRatios c = concentration_ratios(sol, pk, nodal);
  rep.ell_hat = c.ell_hat;
  rep.nodal_extent_ratio = c.nodal_extent_ratio;
  rep.log_dist_nodal_over_mu_plus = c.log_dist_nodal_over_mu_plus;
  rep.nodal_max_radius = nodal.max_radius;

  const auto disk = disk_samples({}, opt.profile_radius, opt.n_radial, opt.n_angular);
  const RescaledProfile vp = rescale(sol, pk.plus, disk);
  const Point x_inf = -1.0 / pk.minus.mu * pk.minus.location;
  const auto ring = annulus_samples(x_inf, opt.exclusion, opt.profile_radius, opt.n_radial,
                                    opt.n_angular);
  const RescaledProfile vm = rescale(sol, pk.minus, ring);
  fill_profiles(rep, vp, vm, opt);

  const QuantizationReport q = quantization_checks(sol, pk, lambda1, opt.quantization_slack);
  rep.p3_constant = q.p3_constant;
  rep.quantization_floor = q.floor;
  rep.quantization_floor_holds = q.floor_holds;
  rep.lambda1_plus = q.lambda1_plus;
  rep.lambda1_minus = q.lambda1_minus;
  rep.sqrt_p_u_07 = q.sqrt_p_u_07;

  const GammaFit g = fit_gamma([&sol](double r) { return sol.value({r, 0.0}); }, sol.p, 0.5, 0.9,
                               41);
  rep.gamma = g.gamma;
  rep.gamma_intercept = g.intercept;
  rep.gamma_r2 = g.r_squared;
  return rep;
}

std::vector<std::pair<std::string, double>> numeric_entries(const DiagnosticsReport& r) {
  std::vector<std::pair<std::string, double>> out{
      {"p", r.p},
      {"sup_plus", r.sup_plus},
      {"sup_minus", r.sup_minus},
      {"energy", r.energy},
      {"energy_plus", r.energy_plus},
      {"energy_minus", r.energy_minus},
      {"energy_functional", r.energy_functional},
      {"potential", r.potential},
      {"energy_identity_rel", r.energy_identity_rel},
      {"log_mu_plus", r.log_mu_plus},
      {"log_mu_minus", r.log_mu_minus},
      {"mu_plus", r.mu_plus},
      {"mu_minus", r.mu_minus},
      {"mu_ratio", r.mu_ratio},
      {"ell_hat", r.ell_hat},
      {"nodal_extent_ratio", r.nodal_extent_ratio},
      {"log_dist_nodal_over_mu_plus", r.log_dist_nodal_over_mu_plus},
      {"d_plus", r.d_plus},
      {"d_plus_gradient", r.d_plus_gradient},
      {"d_minus", r.d_minus},
      {"d_minus_gradient", r.d_minus_gradient},
      {"p3_constant", r.p3_constant},
      {"quantization_floor", r.quantization_floor},
      {"sqrt_p_u_07", r.sqrt_p_u_07},
  };
  const auto opt = [&out](const char* name, const std::optional<double>& v) {
    if (v) out.emplace_back(name, *v);
  };
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
  return out;
}

}  // namespace lane_emden::diagnostics
