#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lane_emden/geometry.hpp"
#include "lane_emden/liouville.hpp"
#include "lane_emden/planar.hpp"
#include "lane_emden/radial.hpp"

// Blow-up diagnostics for computed solutions: peak points and their scales
// mu^-2 = p |u(x)|^(p-1), rescaled profiles compared against the Liouville
// bubbles, concentration ratios, quantization bounds and the flux balance.

namespace lane_emden::diagnostics {

/// First Dirichlet eigenvalue of the unit disk, j_{0,1}^2.
inline constexpr double kLambda1Disk = 5.783185962946784;

struct PeakPoint {
  Point location;
  double value = 0.0;  // u at the peak (signed)
  int sign = 0;
  double log_mu = 0.0;
  double mu = 0.0;     // may underflow to 0 for extreme p; log_mu is exact

  double radius() const { return location.norm(); }
};

/// (p |u|^(p-1))^(-1/2) in log form.
double log_mu_of(double p, double value);

struct Peaks {
  PeakPoint plus;
  PeakPoint minus;
};

/// Arg-max and arg-min of u. For radial solutions the maximum is the origin
/// and the minimum lies on the circle r = r_min (reported at (r_min, 0)).
/// Throws StructureError for single-signed solutions.
Peaks find_peaks(const radial::RadialSolution& sol);
Peaks find_peaks(const planar::PlanarSolution& sol);

/// v(x) = p (u(x_peak + mu x) - u(x_peak)) / u(x_peak) sampled at `points`.
struct RescaledProfile {
  PeakPoint center;
  Point origin_offset;  // x_peak / mu: the solution's origin sits at -origin_offset
  std::vector<Point> points;
  std::vector<double> values;
  std::vector<Point> gradients;  // centered differences of v
};

/// Largest R with the disk |x| <= R inside the rescaled domain.
double max_rescaled_radius(const radial::RadialSolution& sol, const PeakPoint& peak);

/// Throws RangeError (carrying the largest admissible R) when a sample falls
/// outside the rescaled domain.
RescaledProfile rescale(const radial::RadialSolution& sol, const PeakPoint& peak,
                        std::span<const Point> points);
RescaledProfile rescale(const planar::PlanarSolution& sol, const PeakPoint& peak,
                        std::span<const Point> points);

/// Polar sample grids: `n_radial` radii x `n_angular` angles.
std::vector<Point> disk_samples(Point center, double radius, int n_radial, int n_angular);
std::vector<Point> annulus_samples(Point center, double inner, double outer, int n_radial,
                                   int n_angular);

struct RegularTarget {
  Point center{};
};
struct SingularTarget {
  liouville::SingularBubble bubble;
  Point center{};
};
using BubbleTarget = std::variant<RegularTarget, SingularTarget>;

struct ProfileDistance {
  double value = 0.0;     // sup |v - bubble|
  double gradient = 0.0;  // sup |grad v - grad bubble|
  std::size_t samples = 0;
};

/// Sup distances over samples with |x - center| <= R and, when `exclusion` is
/// set, |x - center| >= *exclusion. Singular targets require an exclusion
/// ball; an empty sample set is a DomainError.
ProfileDistance profile_distance(const RescaledProfile& rp, const BubbleTarget& bubble, double R,
                                 std::optional<double> exclusion);

struct ConcentrationRatios {
  double ell_hat;                      // |x-| / mu-
  double nodal_extent_ratio;           // max_{y in NL} |y| / mu-
  double log_dist_nodal_over_mu_plus;  // log(dist(x+, NL) / mu+)
};

ConcentrationRatios concentration_ratios(const radial::RadialSolution& sol, const Peaks& peaks);
ConcentrationRatios concentration_ratios(const planar::PlanarSolution& sol, const Peaks& peaks,
                                         const planar::NodalCurve& nodal);

struct QuantizationReport {
  double p_grad;          // p int |grad u|^2
  double floor;           // 8 pi (|u(x+)|^2 + |u(x-)|^2)
  bool floor_holds;       // p_grad >= (1 - slack) floor
  double p3_constant;     // sup_x p |x - x+|^2 |u(x)|^(p-1)
  double lambda1;
  bool lambda1_plus;      // ||u+||^(p-1) >= lambda1
  bool lambda1_minus;
  double sqrt_p_u_07;     // sqrt(p) u at r = 0.7 (on the positive x axis)
};

QuantizationReport quantization_checks(const radial::RadialSolution& sol, const Peaks& peaks,
                                       double slack = 0.05);
QuantizationReport quantization_checks(const planar::PlanarSolution& sol, const Peaks& peaks,
                                       double lambda1, double slack = 0.05);

/// Least-squares fit p u(r) ~ gamma log r + c on [r_lo, r_hi].
struct GammaFit {
  double gamma;
  double intercept;
  double r_squared;
};
GammaFit gamma_fit(const radial::RadialSolution& sol, double r_lo = 0.5, double r_hi = 0.9,
                   int samples = 41);

/// Divergence-theorem balance on B_rho:
///   p (flux of grad u through the circle) + p int_B |u|^(p-1) u = 0.
struct FluxReport {
  double flux;          // p * circle integral of du/dn
  double source;        // p * int_B |u|^(p-1) u
  double source_plus;   // part of `source` from {u > 0}
  double source_minus;  // part from {u < 0}
  double residual;      // |flux + source|
  double scale;         // p int_B |u|^p
  double relative;      // residual / scale
};

/// Radial version: flux from the stored derivative, volume term by its own
/// quadrature along the trajectory. Throws DomainError unless 0 < rho <= 1.
FluxReport flux_identity(const radial::RadialSolution& sol, double rho);

/// Generic version for any smooth field: |circle integral of grad u . n -
/// int_B laplacian| on the disk of radius rho about the origin.
double flux_residual(const std::function<Point(Point)>& gradient,
                     const std::function<double(Point)>& laplacian, double rho,
                     int n_angular = 256, int n_radial = 64);

struct DiagnosticsOptions {
  double profile_radius = 5.0;
  double exclusion = 0.2;
  int n_radial = 101;
  int n_angular = 16;
  double quantization_slack = 0.05;
};

/// All per-p scalars. Planar-only and radial-only entries are empty when
/// they do not apply.
struct DiagnosticsReport {
  std::string mode;  // "radial" or "planar"
  double p = 0.0;
  double sup_plus = 0.0;
  double sup_minus = 0.0;
  double energy = 0.0;        // p int |grad u|^2
  double energy_plus = 0.0;
  double energy_minus = 0.0;
  double energy_functional = 0.0;  // E_p(u)
  double potential = 0.0;     // p int |u|^(p+1)
  double energy_identity_rel = 0.0;
  double log_mu_plus = 0.0;
  double log_mu_minus = 0.0;
  double mu_plus = 0.0;
  double mu_minus = 0.0;
  double mu_ratio = 0.0;
  double ell_hat = 0.0;
  double nodal_extent_ratio = 0.0;
  double log_dist_nodal_over_mu_plus = 0.0;
  double d_plus = 0.0;
  double d_plus_gradient = 0.0;
  double d_minus = 0.0;
  double d_minus_gradient = 0.0;
  double p3_constant = 0.0;
  double quantization_floor = 0.0;
  bool quantization_floor_holds = false;
  bool lambda1_plus = false;
  bool lambda1_minus = false;
  double sqrt_p_u_07 = 0.0;
  std::optional<double> r0;
  std::optional<double> r_min;
  std::optional<double> flux_relative_r0;
  std::optional<double> flux_relative_rmin;
  std::optional<double> gamma;
  std::optional<double> gamma_intercept;
  std::optional<double> gamma_r2;
  std::optional<double> ode_residual;
  std::optional<double> nodal_max_radius;
  std::optional<double> eps;
  std::optional<int> m;
};

DiagnosticsReport diagnose(const radial::RadialSolution& sol, const DiagnosticsOptions& opt = {});
DiagnosticsReport diagnose(const planar::PlanarSolution& sol, const planar::NodalCurve& nodal,
                           double lambda1, const DiagnosticsOptions& opt = {});

/// Names and values of the report entries (optional ones only when set);
/// used to check that every entry is finite.
std::vector<std::pair<std::string, double>> numeric_entries(const DiagnosticsReport& r);

}  // namespace lane_emden::diagnostics
