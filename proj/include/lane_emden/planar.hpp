#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "lane_emden/geometry.hpp"

namespace lane_emden::planar {

// Star-shaped, m-fold symmetric domains r < rho(theta) = 1 + eps cos(m theta)
// are discretized in boundary-fitted log-polar coordinates
//
//   r = e^tau rho(phi),  tau in [tau_min, 0],  phi in one sector [0, 2 pi/m).
//
// With g = log rho the Laplacian becomes Delta = r^-2 L where
//
//   L = (1 + g'^2) d_tau^2 - 2 g' d_tau d_phi + d_phi^2 - g'' d_tau,
//
// constant in tau, so a uniform tau grid is a geometric grid in r that
// resolves both bubbles of the tower. The row tau = tau_min stands for the
// origin (regularity condition du/dtau = 0), tau = 0 is the Dirichlet
// boundary, and phi is periodic over the sector.

class SymmetricDomain {
 public:
  /// m >= 3, eps in [0, 0.2], n_s >= 64 radial intervals, n_theta >= 32
  /// angular nodes per sector, log_s_min < 0. Throws DomainError otherwise.
  static SymmetricDomain build(int m, double eps, int n_s, int n_theta,
                               double log_s_min);

  int m() const { return m_; }
  double eps() const { return eps_; }
  int n_s() const { return n_s_; }
  int n_theta() const { return n_theta_; }
  double log_s_min() const { return log_s_min_; }
  double h_tau() const { return h_tau_; }
  double h_phi() const { return h_phi_; }
  double sector() const;

  double tau(int j) const { return log_s_min_ + j * h_tau_; }
  double phi(int k) const { return k * h_phi_; }

  double rho(double theta) const;
  double rho_prime(double theta) const;
  double rho_second(double theta) const;
  /// g' = rho'/rho and g'' for g = log rho.
  double g1(double theta) const;
  double g2(double theta) const;

  /// Unknowns are rows j = 0 .. n_s - 1 (row n_s is the boundary, u = 0).
  std::size_t unknowns() const {
    return static_cast<std::size_t>(n_s_) * static_cast<std::size_t>(n_theta_);
  }
  std::size_t index(int j, int k) const;

  /// Discrete L (Delta scaled by r^2) acting on the unknowns.
  const Eigen::SparseMatrix<double>& operator_matrix() const { return L_; }

  /// log r^2 = 2 tau + 2 log rho at every unknown.
  const Eigen::VectorXd& log_r2() const { return log_r2_; }

  /// Cartesian position of node (j, k) in the fundamental sector.
  Point node_position(int j, int k) const;

  /// Maps a point of the plane to (tau, phi) with phi reduced to the sector.
  /// Returns false when the point lies outside the closed domain.
  bool to_grid_coordinates(Point x, double& tau, double& phi) const;

 private:
  int m_ = 0;
  double eps_ = 0.0;
  int n_s_ = 0;
  int n_theta_ = 0;
  double log_s_min_ = 0.0;
  double h_tau_ = 0.0;
  double h_phi_ = 0.0;
  Eigen::SparseMatrix<double> L_;
  Eigen::VectorXd log_r2_;
};

/// Dirichlet eigenvalue problem -Delta u = lambda u on the discrete domain:
/// inverse iteration on -L u = lambda r^2 u. Returns the smallest eigenvalue.
double first_eigenvalue(const SymmetricDomain& domain, int max_iterations = 200,
                        double tol = 1e-12);

/// Closed polyline (last vertex joins the first) in Cartesian coordinates.
struct NodalCurve {
  std::vector<Point> vertices;
  int winding_about_origin = 0;
  double max_radius = 0.0;
  double min_radius = 0.0;
};

struct PlanarSolution {
  double p = 0.0;
  SymmetricDomain domain;
  Eigen::VectorXd u;  // values at the unknowns

  /// Value at grid node (j, k); j = n_s gives the boundary value 0.
  double at(int j, int k) const;

  /// Cubic Lagrange interpolation in tau and phi; points inside the innermost
  /// ring take the ring value. Throws RangeError outside the domain.
  double value(Point x) const;
};

/// Zero level set from linear interpolation on grid edges, extended to the
/// full circle by the rotation symmetry. Throws StructureError unless it is
/// exactly one closed curve.
NodalCurve extract_nodal_curve(const PlanarSolution& sol);

struct PlanarEnergy {
  double p_grad;       // p int |grad u|^2
  double p_grad_plus;
  double p_grad_minus;
  double p_potential;  // p int |u|^(p+1)
};

PlanarEnergy planar_energy(const PlanarSolution& sol);

/// Scaled residual L u + r^2 |u|^(p-1) u at the unknowns.
Eigen::VectorXd residual(const SymmetricDomain& domain, double p, const Eigen::VectorXd& u);

struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;  // relative: ||F||_inf / ||r^2 f(u)||_inf
};

/// Damped Newton with Armijo backtracking on ||F||^2 and sparse LU solves.
NewtonReport newton_solve(const SymmetricDomain& domain, double p, Eigen::VectorXd& u,
                          double tol = 1e-9, int max_iterations = 30);

struct ContinuationConfig {
  int m = 12;
  double eps_end = 0.1;
  double p_start = 30.0;
  double p_end = 80.0;
  int n_s = 400;
  int n_theta = 32;
  /// Innermost ring in log s; NaN selects it from the radial positive bubble
  /// scale at max(p_start, p_end).
  double log_s_min = std::numeric_limits<double>::quiet_NaN();
  double eps_step = 0.025;
  double p_step = 2.0;
  double max_p_step = 8.0;
  double min_step = 1e-3;
  double newton_tol = 1e-9;
  int max_newton = 25;
  /// Upper bound on p int |grad u|^2 in units of 8 pi e (must stay below 5).
  double energy_alpha = 5.0;

  void validate() const;
};

struct StepRecord {
  double p;
  double eps;
  int newton_iterations;
  double residual;
  double nodal_max_radius;
  double energy;
};

struct ContinuationResult {
  PlanarSolution solution;
  NodalCurve nodal;
  std::vector<StepRecord> history;
  double radial_start_deviation = 0.0;  // sup |u_h - u_radial| / sup |u_radial| at start
};

/// Radial tower at p_start interpolated to the grid, Newton-corrected, then
/// continued first in eps (0 -> eps_end) and then in p (p_start -> p_end)
/// with tangent predictor and adaptive step halving. Every accepted step
/// must keep one closed nodal loop around the origin and the energy bound.
/// `on_step` (optional) sees every accepted solution.
ContinuationResult continue_from_disk(
    const ContinuationConfig& cfg,
    const std::function<void(const PlanarSolution&, const StepRecord&)>& on_step = {});

/// Radius of the positive bubble of the radial solution at p, in log form,
/// used to size the innermost ring.
double radial_log_mu_plus(double p);

}  // namespace lane_emden::planar
