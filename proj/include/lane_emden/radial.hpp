#pragma once

#include <cstddef>
#include <vector>

namespace lane_emden::radial {

// The radial problem -u'' - u'/r = |u|^(p-1) u on the unit disk is integrated
// in the logarithmic radius t = log r, where it reads
//
//   d^2u/dt^2 = -e^(2t) |u|^(p-1) u.
//
// For large p the positive bubble lives at radius mu+ ~ a^(-(p-1)/2), far
// below anything a uniform grid in r can reach (about 1e-197 at p = 1000), so
// every stored position is kept as log r and radii are only formed on output.

struct ShootingConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  double bisection_tol = 1e-10;  // target on |u(1)|
  double a_lo = 1.0;
  double a_hi = 4.0;
  std::size_t max_steps = 2'000'000;
  std::size_t max_iterations = 200;
  double max_step = 0.04;      // in log r
  double start_offset = 1e-3;  // first integration radius, in units of mu(a)

  void validate() const;
};

/// Raw output of one integration from the origin.
struct Trajectory {
  double p = 0.0;
  double a = 0.0;
  double log_mu = 0.0;          // log of (p a^(p-1))^(-1/2)
  std::vector<double> log_r;    // strictly increasing
  std::vector<double> u;
  std::vector<double> du_dlogr; // r u'(r)
  std::vector<double> zero_log_r;  // sign changes of u, in order
  std::vector<double> min_log_r;   // interior minima of u on negative stretches
};

/// |u|^(p-1) u scaled by r^2 = e^(2 log_r), i.e. the right-hand side in t,
/// evaluated through logarithms; underflows cleanly to 0.
double scaled_source(double p, double log_r, double u);

/// Integrates from the origin (Taylor start at r = start_offset * mu) up to
/// log r = log_r_end, or until the `stop_after_zeros`-th sign change if that
/// comes first (0 disables the early stop). Zeros and minima are inserted as
/// grid nodes. Throws DomainError for p <= 1 or a <= 0, IntegrationError when
/// max_steps is exhausted.
Trajectory integrate_from_origin(double p, double a, const ShootingConfig& cfg,
                                 double log_r_end = 0.0,
                                 std::size_t stop_after_zeros = 0);

/// Nodal radial solution with one interior zero, u(0) > 0, u(1) = 0.
struct RadialSolution {
  double p = 0.0;
  double a = 0.0;        // u(0)
  double log_mu = 0.0;   // scale of the positive bubble
  std::vector<double> r;       // r[0] = 0, strictly increasing, r.back() = 1
  std::vector<double> log_r;   // log_r[0] = -inf
  std::vector<double> u;
  std::vector<double> du_dr;
  std::vector<double> du_dlogr;
  std::vector<double> zeros;   // interior zero radii
  std::size_t zero_index = 0;  // grid index of the (first) interior zero
  std::size_t min_index = 0;   // grid index of the minimum
  double energy = 0.0;         // p * int |grad u|^2

  double r0() const { return r[zero_index]; }
  double log_r0() const { return log_r[zero_index]; }
  double r_min() const { return r[min_index]; }
  double log_r_min() const { return log_r[min_index]; }
  double u_min() const { return u[min_index]; }

  /// Cubic Hermite interpolation in log r; Taylor series inside the first node.
  double value_at_log(double log_r) const;
  double slope_at_log(double log_r) const;  // r u'(r)
  double value(double r) const;
  double derivative(double r) const;        // u'(r)
};

/// Builds a RadialSolution from a trajectory that reaches log r = 0.
RadialSolution make_solution(const Trajectory& traj);

/// Shooting on the initial height a: bracketed root finding (Illinois
/// variant of regula falsi, in log a) for the second zero landing on r = 1.
/// The second-zero radius scales like a^(-(p-1)/2), so the target is monotone
/// in a. Throws BracketingError when [a_lo, a_hi] does not straddle the
/// target and IterationError on non-convergence.
RadialSolution shoot_one_node(double p, const ShootingConfig& cfg = {});

struct EnergyBreakdown {
  double E;                  // 1/2 |grad u|^2 - 1/(p+1) |u|^(p+1), integrated
  double p_grad;             // p int |grad u|^2
  double p_grad_plus;        // over the positive nodal region
  double p_grad_minus;       // over the negative nodal region
  double p_potential;        // p int |u|^(p+1)
  double p_potential_plus;
  double p_potential_minus;
};

/// Quadrature with the 2 pi r Jacobian (trapezoid with Hermite end
/// corrections on the stored grid, in log r).
EnergyBreakdown energy(const RadialSolution& sol);

/// Largest defect per unit log r of consecutive stored samples against the
/// ODE: u_{i+1} - u_i compared with a sixth-order Hermite integral of du/dlogr
/// whose derivatives come from the equation. Used to certify accepted
/// trajectories (it should stay below 10 rel_tol).
double ode_residual(const RadialSolution& sol);

}  // namespace lane_emden::radial
