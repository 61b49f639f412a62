#pragma once

#include <functional>

namespace lane_emden::quadrature {

/// Algebraic tail model `density(r) ~ coefficient * r^(-exponent)` as r -> inf.
struct AlgebraicTail {
  double coefficient;
  double exponent;  // must exceed 2 for the planar mass to be finite
};

/// Integral of `density` over R^2 for a radial density, i.e.
/// 2*pi * int_0^inf r * density(r) dr.
///
/// The half line is cut at the radius where the tail model contributes less
/// than `tail_tolerance`; [0, R_max] is covered by dyadic panels, each
/// integrated with adaptive Gauss-Kronrod. The (tiny) tail beyond R_max is
/// added analytically from the tail model.
double radial_mass(const std::function<double(double)>& density,
                   AlgebraicTail tail, double tail_tolerance = 1e-12);

/// Adaptive Gauss-Kronrod on a finite interval.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-13);

}  // namespace lane_emden::quadrature
