#include "lane_emden/liouville.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lane_emden/errors.hpp"
#include "lane_emden/quadrature.hpp"

namespace lane_emden::liouville {

namespace {

// log(x^a + y^a) for positive x, y without overflow.
double log_sum_pow(double log_x, double log_y, double a) {
  const double hi = std::max(log_x, log_y);
  const double lo = std::min(log_x, log_y);
  return a * hi + std::log1p(std::exp(-a * (hi - lo)));
}

void require_radius(double r, const char* who, bool allow_zero) {
  if (!std::isfinite(r) || r < 0.0 || (!allow_zero && r == 0.0)) {
    throw DomainError(std::string(who) + ": invalid radius " + std::to_string(r));
  }
}

}  // namespace

double eval_regular(double r) {
  require_radius(r, "eval_regular", true);
  return -2.0 * std::log1p(r * r / 8.0);
}

double regular_derivative(double r) {
  require_radius(r, "regular_derivative", true);
  return -4.0 * r / (8.0 + r * r);
}

double regular_mass() {
  return quadrature::radial_mass(
      [](double r) { return std::exp(eval_regular(r)); },
      {.coefficient = 64.0, .exponent = 4.0});
}

double SingularBubble::exact_mass() const {
  return 8.0 * std::numbers::pi * (1.0 + eta);
}

SingularBubble make_singular(double ell) {
  if (!std::isfinite(ell) || ell <= 0.0) {
    throw DomainError("make_singular: ell must be positive (ell = 0 is the regular bubble)");
  }
  SingularBubble b{};
  b.ell = ell;
  b.alpha = std::sqrt(2.0 * ell * ell + 4.0);
  // (alpha+2)/(alpha-2) with alpha - 2 = 2 ell^2 / (alpha + 2), exact for small ell.
  const double alpha_minus_2 = 2.0 * ell * ell / (b.alpha + 2.0);
  b.beta = ell * std::pow((b.alpha + 2.0) / alpha_minus_2, 1.0 / b.alpha);
  b.eta = alpha_minus_2 / 2.0;
  b.H = -4.0 * std::numbers::pi * b.eta;
  return b;
}

double eval_singular(const SingularBubble& b, double r) {
  require_radius(r, "eval_singular", false);
  const double log_r = std::log(r);
  const double log_b = std::log(b.beta);
  return std::log(2.0 * b.alpha * b.alpha) + b.alpha * log_b +
         (b.alpha - 2.0) * log_r - 2.0 * log_sum_pow(log_b, log_r, b.alpha);
}

double singular_derivative(const SingularBubble& b, double r) {
  require_radius(r, "singular_derivative", false);
  // V' = (alpha-2)/r - 2 alpha r^(alpha-1)/(beta^alpha + r^alpha)
  const double t = 1.0 / (1.0 + std::pow(b.beta / r, b.alpha));
  return ((b.alpha - 2.0) - 2.0 * b.alpha * t) / r;
}

double dirac_strength(const SingularBubble& b) { return b.H; }

double singular_mass(const SingularBubble& b) {
  const double coeff = 2.0 * b.alpha * b.alpha * std::pow(b.beta, b.alpha);
  return quadrature::radial_mass(
      [&b](double r) { return r > 0.0 ? std::exp(eval_singular(b, r)) : 0.0; },
      {.coefficient = coeff, .exponent = b.alpha + 2.0});
}

double GeneralRadialLiouville::operator()(double r) const {
  require_radius(r, "GeneralRadialLiouville", false);
  const double k = std::numbers::sqrt2 / delta;
  const double z = k * (std::log(r) - y);
  // log(e^z / (1+e^z)^2) = -|z| - 2 log1p(e^-|z|)
  const double az = std::abs(z);
  return std::log(4.0 / (delta * delta)) - az - 2.0 * std::log1p(std::exp(-az)) -
         2.0 * std::log(r);
}

GeneralRadialLiouville general_radial(double delta, double y) {
  if (!std::isfinite(delta) || delta <= 0.0 || !std::isfinite(y)) {
    throw DomainError("general_radial: delta must be positive");
  }
  return {delta, y};
}

GeneralRadialLiouville match_parameters(double ell) {
  const SingularBubble b = make_singular(ell);
  return general_radial(1.0 / std::sqrt(2.0 + ell * ell), std::log(b.beta));
}

}  // namespace lane_emden::liouville
