#include "lane_emden/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "lane_emden/errors.hpp"

namespace lane_emden::quadrature {

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0;
  return gauss_kronrod<double, 15>::integrate(f, a, b, 20, rel_tol, &err);
}

double radial_mass(const std::function<double(double)>& density,
                   AlgebraicTail tail, double tail_tolerance) {
  if (!(tail.exponent > 2.0) || !(tail.coefficient > 0.0)) {
    throw DomainError("radial_mass: tail must decay faster than r^-2");
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double q = tail.exponent - 2.0;
  // 2 pi C R^(2-q') / (q'-2) < tol  solved for R.
  const double r_max =
      std::pow(two_pi * tail.coefficient / (q * tail_tolerance), 1.0 / q);

  const auto integrand = [&](double r) { return two_pi * r * density(r); };
  double total = integrate(integrand, 0.0, std::min(1.0, r_max));
  for (double lo = 1.0; lo < r_max; lo *= 2.0) {
    total += integrate(integrand, lo, std::min(2.0 * lo, r_max));
  }
  total += two_pi * tail.coefficient * std::pow(r_max, -q) / q;
  return total;
}

}  // namespace lane_emden::quadrature
