#include "lane_emden/planar.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lane_emden/errors.hpp"
#include "lane_emden/radial.hpp"

namespace lane_emden::planar {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kUnderflowLog = -745.0;

int wrap(int k, int n) { return ((k % n) + n) % n; }

// r^2 |u|^(p-1) u and its u-derivative r^2 p |u|^(p-1), through logs.
double scaled_source(double log_r2, double p, double u) {
  if (u == 0.0) return 0.0;
  const double e = log_r2 + p * std::log(std::abs(u));
  return e < kUnderflowLog ? 0.0 : std::copysign(std::exp(e), u);
}

double scaled_source_derivative(double log_r2, double p, double u) {
  if (u == 0.0) return 0.0;
  const double e = log_r2 + std::log(p) + (p - 1.0) * std::log(std::abs(u));
  return e < kUnderflowLog ? 0.0 : std::exp(e);
}

// Cubic Lagrange weights for nodes 0..3 at local coordinate s (nodes at 0,1,2,3).
std::array<double, 4> lagrange4(double s) {
  return {-(s - 1) * (s - 2) * (s - 3) / 6.0, s * (s - 2) * (s - 3) / 2.0,
          -s * (s - 1) * (s - 3) / 2.0, s * (s - 1) * (s - 2) / 6.0};
}

using LU = Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>;

Eigen::SparseMatrix<double> jacobian(const SymmetricDomain& d, double p,
                                     const Eigen::VectorXd& u) {
  Eigen::SparseMatrix<double> J = d.operator_matrix();
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    J.coeffRef(i, i) += scaled_source_derivative(d.log_r2()[i], p, u[i]);
  }
  return J;
}

Eigen::VectorXd source(const SymmetricDomain& d, double p, const Eigen::VectorXd& u) {
  Eigen::VectorXd s(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) s[i] = scaled_source(d.log_r2()[i], p, u[i]);
  return s;
}

}  // namespace

SymmetricDomain SymmetricDomain::build(int m, double eps, int n_s, int n_theta,
                                       double log_s_min) {
  if (m < 3) throw DomainError("build_domain: symmetry order must be at least 3");
  if (!(eps >= 0.0 && eps <= 0.2)) {
    throw DomainError("build_domain: eps must lie in [0, 0.2]");
  }
  if (n_s < 64 || n_theta < 32) {
    throw DomainError("build_domain: grid must be at least 64 x 32");
  }
  if (!(log_s_min < 0.0) || !std::isfinite(log_s_min)) {
    throw DomainError("build_domain: innermost ring must satisfy log s_min < 0");
  }

  SymmetricDomain d;
  d.m_ = m;
  d.eps_ = eps;
  d.n_s_ = n_s;
  d.n_theta_ = n_theta;
  d.log_s_min_ = log_s_min;
  d.h_tau_ = -log_s_min / n_s;
  d.h_phi_ = d.sector() / n_theta;

  // rho = 1 + eps cos(m theta) >= 0.8; the map is degenerate only if rho <= 0.
  for (int k = 0; k < n_theta; ++k) {
    if (!(d.rho(d.phi(k)) > 0.0)) throw DomainError("build_domain: degenerate boundary map");
  }

  const std::size_t n = d.unknowns();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * n);
  const double ht = d.h_tau_;
  const double hp = d.h_phi_;
  d.log_r2_.resize(static_cast<Eigen::Index>(n));
  for (int j = 0; j < n_s; ++j) {
    for (int k = 0; k < n_theta; ++k) {
      const double ph = d.phi(k);
      const double g1 = d.g1(ph);
      const double A = 1.0 + g1 * g1;
      const double B = -2.0 * g1;
      const double D = -d.g2(ph);
      const auto row = static_cast<int>(d.index(j, k));
      d.log_r2_[row] = 2.0 * d.tau(j) + 2.0 * std::log(d.rho(ph));

      const auto add = [&](int jj, int kk, double v) {
        if (jj >= n_s) return;  // Dirichlet boundary row
        if (jj < 0) jj = -jj;   // reflection: du/dtau = 0 on the innermost ring
        trip.emplace_back(row, static_cast<int>(d.index(jj, wrap(kk, n_theta))), v);
      };
      add(j, k, -2.0 * A / (ht * ht) - 2.0 / (hp * hp));
      add(j + 1, k, A / (ht * ht) + D / (2.0 * ht));
      add(j - 1, k, A / (ht * ht) - D / (2.0 * ht));
      add(j, k + 1, 1.0 / (hp * hp));
      add(j, k - 1, 1.0 / (hp * hp));
      const double c = B / (4.0 * ht * hp);
      add(j + 1, k + 1, c);
      add(j + 1, k - 1, -c);
      add(j - 1, k + 1, -c);
      add(j - 1, k - 1, c);
    }
  }
  d.L_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  d.L_.setFromTriplets(trip.begin(), trip.end());
  d.L_.makeCompressed();
  return d;
}

double SymmetricDomain::sector() const { return kTwoPi / m_; }

double SymmetricDomain::rho(double t) const { return 1.0 + eps_ * std::cos(m_ * t); }
double SymmetricDomain::rho_prime(double t) const { return -eps_ * m_ * std::sin(m_ * t); }
double SymmetricDomain::rho_second(double t) const {
  return -eps_ * m_ * m_ * std::cos(m_ * t);
}
double SymmetricDomain::g1(double t) const { return rho_prime(t) / rho(t); }
double SymmetricDomain::g2(double t) const {
  const double g = g1(t);
  return rho_second(t) / rho(t) - g * g;
}

std::size_t SymmetricDomain::index(int j, int k) const {
  return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_theta_) +
         static_cast<std::size_t>(k);
}

Point SymmetricDomain::node_position(int j, int k) const {
  const double ph = phi(k);
  const double r = std::exp(tau(j)) * rho(ph);
  return {r * std::cos(ph), r * std::sin(ph)};
}

bool SymmetricDomain::to_grid_coordinates(Point x, double& t, double& ph) const {
  const double r = x.norm();
  double theta = std::atan2(x.y, x.x);
  ph = std::fmod(theta, sector());
  if (ph < 0.0) ph += sector();
  if (r == 0.0) {
    t = log_s_min_;
    return true;
  }
  t = std::log(r / rho(ph));
  return t <= 1e-12;
}

double first_eigenvalue(const SymmetricDomain& d, int max_iterations, double tol) {
  const Eigen::SparseMatrix<double> A = -d.operator_matrix();
  LU lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw IterationError("first_eigenvalue: factorization failed");
  const Eigen::VectorXd w = d.log_r2().array().exp();
  Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(d.unknowns()));
  double lambda = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd wx = w.cwiseProduct(x);
    const Eigen::VectorXd y = lu.solve(wx);
    const double next = x.dot(wx) / y.dot(wx);
    x = y / y.norm();
    if (it > 0 && std::abs(next - lambda) < tol * std::abs(next)) return next;
    lambda = next;
  }
  throw IterationError("first_eigenvalue: inverse iteration did not converge");
}

double PlanarSolution::at(int j, int k) const {
  if (j >= domain.n_s()) return 0.0;
  return u[static_cast<Eigen::Index>(domain.index(std::max(j, 0), wrap(k, domain.n_theta())))];
}

double PlanarSolution::value(Point x) const {
  double t = 0.0;
  double ph = 0.0;
  if (!domain.to_grid_coordinates(x, t, ph)) {
    throw RangeError("PlanarSolution::value: point outside the domain", 0.0);
  }
  t = std::clamp(t, domain.log_s_min(), 0.0);
  const double jt = (t - domain.log_s_min()) / domain.h_tau();
  const double kp = ph / domain.h_phi();
  const int j0 = std::clamp(static_cast<int>(std::floor(jt)) - 1, 0, domain.n_s() - 3);
  const int k0 = static_cast<int>(std::floor(kp)) - 1;
  const auto wt = lagrange4(jt - j0);
  const auto wp = lagrange4(kp - k0);
  double v = 0.0;
  for (int a = 0; a < 4; ++a) {
    double row = 0.0;
    for (int b = 0; b < 4; ++b) row += wp[b] * at(j0 + a, k0 + b);
    v += wt[a] * row;
  }
  return v;
}

Eigen::VectorXd residual(const SymmetricDomain& d, double p, const Eigen::VectorXd& u) {
  return d.operator_matrix() * u + source(d, p, u);
}

NewtonReport newton_solve(const SymmetricDomain& d, double p, Eigen::VectorXd& u,
                          double tol, int max_iterations) {
  NewtonReport rep;
  Eigen::VectorXd F = residual(d, p, u);
  const auto rel = [&](const Eigen::VectorXd& res, const Eigen::VectorXd& v) {
    const double scale = std::max(source(d, p, v).lpNorm<Eigen::Infinity>(), 1e-300);
    return res.lpNorm<Eigen::Infinity>() / scale;
  };
  rep.residual = rel(F, u);
  LU lu;
  bool analyzed = false;
  while (rep.residual > tol) {
    if (rep.iterations >= max_iterations || !std::isfinite(rep.residual)) return rep;
    ++rep.iterations;
    const Eigen::SparseMatrix<double> J = jacobian(d, p, u);
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) return rep;
    const Eigen::VectorXd delta = lu.solve(-F);

    // Armijo backtracking on phi = |F|^2 / 2, phi'(0) = -|F|^2.
    const double phi0 = F.squaredNorm();
    double step = 1.0;
    bool accepted = false;
    for (int k = 0; k < 12; ++k, step *= 0.5) {
      Eigen::VectorXd trial = u + step * delta;
      Eigen::VectorXd Ft = residual(d, p, trial);
      if (Ft.allFinite() && Ft.squaredNorm() <= (1.0 - 2e-4 * step) * phi0) {
        u = std::move(trial);
        F = std::move(Ft);
        accepted = true;
        break;
      }
    }
    if (!accepted) return rep;
    rep.residual = rel(F, u);
  }
  rep.converged = true;
  return rep;
}

PlanarEnergy planar_energy(const PlanarSolution& sol) {
  const SymmetricDomain& d = sol.domain;
  const int ns = d.n_s();
  const int nt = d.n_theta();
  const double ht = d.h_tau();
  const double hp = d.h_phi();
  PlanarEnergy e{};
  for (int j = 0; j <= ns; ++j) {
    const double wj = (j == 0 || j == ns) ? 0.5 * ht : ht;
    for (int k = 0; k < nt; ++k) {
      double ut = 0.0;
      if (j == ns) {
        ut = (3.0 * sol.at(ns, k) - 4.0 * sol.at(ns - 1, k) + sol.at(ns - 2, k)) / (2.0 * ht);
      } else if (j > 0) {
        ut = (sol.at(j + 1, k) - sol.at(j - 1, k)) / (2.0 * ht);
      }
      const double up = (sol.at(j, k + 1) - sol.at(j, k - 1)) / (2.0 * hp);
      const double g1 = d.g1(d.phi(k));
      const double dens = ut * ut + (up - g1 * ut) * (up - g1 * ut);
      const double w = wj * hp;
      const double v = sol.at(j, k);
      if (v > 0.0) {
        e.p_grad_plus += w * dens;
      } else {
        e.p_grad_minus += w * dens;
      }
      if (j < ns) {
        const double lr2 = 2.0 * d.tau(j) + 2.0 * std::log(d.rho(d.phi(k)));
        e.p_potential += w * std::abs(scaled_source(lr2, sol.p, v) * v);
      }
    }
  }
  const double f = sol.p * d.m();
  e.p_grad_plus *= f;
  e.p_grad_minus *= f;
  e.p_grad = e.p_grad_plus + e.p_grad_minus;
  e.p_potential *= f;
  return e;
}

double radial_log_mu_plus(double p) {
  radial::ShootingConfig cfg;
  try {
    return radial::shoot_one_node(p, cfg).log_mu;
  } catch (const BracketingError&) {
    cfg.a_hi = 50.0;
    return radial::shoot_one_node(p, cfg).log_mu;
  }
}

void ContinuationConfig::validate() const {
  if (!(p_start > 1.0) || !(p_end >= p_start)) {
    throw UsageError("continuation: need 1 < p_start <= p_end");
  }
  if (!(eps_end >= 0.0 && eps_end <= 0.2)) throw UsageError("continuation: eps must lie in [0, 0.2]");
  if (!(eps_step > 0.0) || !(p_step > 0.0) || !(min_step > 0.0) || !(newton_tol > 0.0)) {
    throw UsageError("continuation: steps and tolerances must be positive");
  }
  if (!(energy_alpha > 0.0)) throw UsageError("continuation: energy bound must be positive");
}

namespace {

struct Acceptance {
  bool ok;
  NodalCurve curve;
  double energy;
  std::string why;
};

Acceptance check_structure(const PlanarSolution& sol, double energy_alpha) {
  Acceptance a{false, {}, 0.0, {}};
  const int nt = sol.domain.n_theta();
  for (int k = 0; k < nt; ++k) {
    if (!(sol.at(0, k) > 0.0) || !(sol.at(sol.domain.n_s() - 1, k) < 0.0)) {
      a.why = "sign pattern broken (need u > 0 at O and u < 0 near the boundary)";
      return a;
    }
  }
  try {
    a.curve = extract_nodal_curve(sol);
  } catch (const StructureError& e) {
    a.why = e.what();
    return a;
  }
  if (a.curve.winding_about_origin != 1 && a.curve.winding_about_origin != -1) {
    a.why = "nodal curve does not wind once around the origin";
    return a;
  }
  a.energy = planar_energy(sol).p_grad;
  const double bound = energy_alpha * 8.0 * std::numbers::pi * std::numbers::e;
  if (!(a.energy < bound)) {
    throw InvariantError("continuation: energy bound violated, p int |grad u|^2 = " +
                         std::to_string(a.energy) + " >= " + std::to_string(bound));
  }
  a.ok = true;
  return a;
}

}  // namespace

ContinuationResult continue_from_disk(
    const ContinuationConfig& cfg,
    const std::function<void(const PlanarSolution&, const StepRecord&)>& on_step) {
  cfg.validate();
  const double log_s_min = std::isnan(cfg.log_s_min)
                               ? radial_log_mu_plus(std::max(cfg.p_start, cfg.p_end)) - 6.0
                               : cfg.log_s_min;

  radial::ShootingConfig rcfg;
  radial::RadialSolution tower;
  try {
    tower = radial::shoot_one_node(cfg.p_start, rcfg);
  } catch (const BracketingError&) {
    rcfg.a_hi = 50.0;
    tower = radial::shoot_one_node(cfg.p_start, rcfg);
  }

  ContinuationResult out;
  PlanarSolution& sol = out.solution;
  sol.p = cfg.p_start;
  sol.domain = SymmetricDomain::build(cfg.m, 0.0, cfg.n_s, cfg.n_theta, log_s_min);
  sol.u.resize(static_cast<Eigen::Index>(sol.domain.unknowns()));
  for (int j = 0; j < cfg.n_s; ++j) {
    const double v = tower.value_at_log(sol.domain.tau(j));
    for (int k = 0; k < cfg.n_theta; ++k) {
      sol.u[static_cast<Eigen::Index>(sol.domain.index(j, k))] = v;
    }
  }
  const Eigen::VectorXd radial_guess = sol.u;

  const auto record = [&](const NewtonReport& nr, const Acceptance& acc, double eps) {
    StepRecord rec{sol.p, eps, nr.iterations, nr.residual, acc.curve.max_radius, acc.energy};
    out.history.push_back(rec);
    out.nodal = acc.curve;
    if (on_step) on_step(sol, rec);
  };

  NewtonReport nr = newton_solve(sol.domain, sol.p, sol.u, cfg.newton_tol, cfg.max_newton);
  if (!nr.converged) {
    throw ContinuationError("continuation: Newton failed on the disk at p = " +
                                std::to_string(sol.p),
                            sol.p, 0.0);
  }
  out.radial_start_deviation = (sol.u - radial_guess).lpNorm<Eigen::Infinity>() /
                               radial_guess.lpNorm<Eigen::Infinity>();
  {
    const Acceptance acc = check_structure(sol, cfg.energy_alpha);
    if (!acc.ok) throw StructureError("continuation: start solution invalid: " + acc.why);
    record(nr, acc, 0.0);
  }

  // Stage 1: deform the disk.
  double eps = 0.0;
  double step = cfg.eps_step;
  while (eps < cfg.eps_end) {
    const double next = std::min(cfg.eps_end, eps + step);
    SymmetricDomain dom = SymmetricDomain::build(cfg.m, next, cfg.n_s, cfg.n_theta, log_s_min);
    Eigen::VectorXd trial = sol.u;
    NewtonReport r = newton_solve(dom, sol.p, trial, cfg.newton_tol, cfg.max_newton);
    Acceptance acc{false, {}, 0.0, "Newton did not converge"};
    if (r.converged) {
      PlanarSolution cand{sol.p, dom, trial};
      acc = check_structure(cand, cfg.energy_alpha);
    }
    if (r.converged && acc.ok) {
      eps = next;
      sol.domain = std::move(dom);
      sol.u = std::move(trial);
      record(r, acc, eps);
      step = std::min(2.0 * step, cfg.eps_step);
    } else {
      step *= 0.5;
      if (step < cfg.min_step * 1e-2) {
        throw ContinuationError("continuation in eps stalled: " + acc.why, sol.p, eps);
      }
    }
  }

  // Stage 2: raise p with a tangent predictor du/dp = -J^-1 dF/dp.
  step = cfg.p_step;
  while (sol.p < cfg.p_end) {
    const double next = std::min(cfg.p_end, sol.p + step);
    Eigen::VectorXd tangent;
    {
      LU lu;
      lu.compute(jacobian(sol.domain, sol.p, sol.u));
      Eigen::VectorXd dF(sol.u.size());
      for (Eigen::Index i = 0; i < sol.u.size(); ++i) {
        const double v = sol.u[i];
        dF[i] = v == 0.0 ? 0.0
                         : scaled_source(sol.domain.log_r2()[i], sol.p, v) * std::log(std::abs(v));
      }
      tangent = lu.info() == Eigen::Success ? Eigen::VectorXd(lu.solve(-dF))
                                            : Eigen::VectorXd::Zero(sol.u.size());
    }
    Eigen::VectorXd trial = sol.u + (next - sol.p) * tangent;
    NewtonReport r = newton_solve(sol.domain, next, trial, cfg.newton_tol, cfg.max_newton);
    Acceptance acc{false, {}, 0.0, "Newton did not converge"};
    if (r.converged) {
      PlanarSolution cand{next, sol.domain, trial};
      acc = check_structure(cand, cfg.energy_alpha);
    }
    if (r.converged && acc.ok) {
      sol.p = next;
      sol.u = std::move(trial);
      record(r, acc, eps);
      if (r.iterations <= 4) step = std::min(1.5 * step, cfg.max_p_step);
    } else {
      step *= 0.5;
      if (step < cfg.min_step) {
        if (r.converged) {
          throw StructureError("continuation left the tower branch near p = " +
                               std::to_string(sol.p) + ": " + acc.why);
        }
        throw ContinuationError("continuation in p stalled after p = " + std::to_string(sol.p),
                                sol.p, eps);
      }
    }
  }
  return out;
}

}  // namespace lane_emden::planar
