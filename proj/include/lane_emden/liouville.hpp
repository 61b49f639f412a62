#pragma once

// Closed-form entire solutions of the planar Liouville equation
//
//   -Delta U = e^U                       (regular bubble, mass 8 pi)
//   -Delta V = e^V - 4 pi eta delta_0    (singular bubble, mass 8 pi (1 + eta))
//
// normalized so that U(0) = 0 and V touches zero at radius ell:
// V(ell) = V'(ell) = 0. These are the limit profiles of the rescaled
// positive and negative parts of a bubble-tower solution.

namespace lane_emden::liouville {

/// U(r) = -2 log(1 + r^2/8). Throws DomainError for negative or non-finite r.
double eval_regular(double r);

/// dU/dr.
double regular_derivative(double r);

/// Quadrature of e^U over the plane (expected 8 pi).
double regular_mass();

/// Radial singular Liouville bubble touching zero at radius `ell`.
struct SingularBubble {
  double ell;
  double alpha;  // sqrt(2 ell^2 + 4)
  double beta;   // ell ((alpha + 2)/(alpha - 2))^(1/alpha)
  double eta;    // (alpha - 2)/2
  double H;      // Dirac coefficient, -4 pi eta

  /// Closed-form mass 8 pi (1 + eta) = 4 pi alpha.
  double exact_mass() const;
};

/// Builds the bubble for ell > 0. ell = 0 is the regular bubble and is
/// rejected with a DomainError (beta has a removable singularity there).
SingularBubble make_singular(double ell);

/// V(r) = log(2 alpha^2 beta^alpha r^(alpha-2) / (beta^alpha + r^alpha)^2),
/// evaluated in log form so that large alpha and extreme r do not overflow.
double eval_singular(const SingularBubble& b, double r);

/// dV/dr.
double singular_derivative(const SingularBubble& b, double r);

/// Coefficient H of the Dirac mass in -Delta V = e^V + H delta_0.
///
/// H = -4 pi eta = -2 pi (alpha - 2), read off from the flux of grad V
/// through small circles around the origin.
double dirac_strength(const SingularBubble& b);

/// Quadrature of e^V over the plane (expected 4 pi alpha).
double singular_mass(const SingularBubble& b);

/// Two-parameter family of radial solutions of -V'' - V'/r = e^V on (0, inf):
///
///   V(r) = log((4/delta^2) e^z / (1 + e^z)^2) - 2 log r,
///   z = (sqrt(2)/delta)(log r - y).
///
/// delta = 1/sqrt(2) gives translates (in log r) of the regular bubble.
struct GeneralRadialLiouville {
  double delta;
  double y;

  double operator()(double r) const;
};

/// Validates delta > 0 and returns the family member.
GeneralRadialLiouville general_radial(double delta, double y);

/// Parameters of the family member that touches zero at r = ell:
/// delta = 1/sqrt(2 + ell^2), y = log(beta).
GeneralRadialLiouville match_parameters(double ell);

}  // namespace lane_emden::liouville
