#include "lane_emden/radial.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include "lane_emden/errors.hpp"

namespace lane_emden::radial {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 2>;  // (u, du/dlogr)

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kUnderflowLog = -745.0;
// Nodes closer than this in log r are merged.
constexpr double kMinGap = 1e-8;

double log_mu_of(double p, double a) {
  return -0.5 * (std::log(p) + (p - 1.0) * std::log(a));
}

// Rescaled Taylor start: with x = r/mu and u = a (1 + w/p),
// w = -x^2/4 + x^4/64 + O(x^6).
State series_state(double p, double a, double x) {
  const double x2 = x * x;
  const double w = -x2 / 4.0 + x2 * x2 / 64.0;
  const double x_dw_dx = -x2 / 2.0 + x2 * x2 / 16.0;
  return {a * (1.0 + w / p), a * x_dw_dx / p};
}

// Locates the root of g on [t0, t1] (g changes sign) by bisection.
template <class G>
double bisect(G g, double t0, double t1) {
  double g0 = g(t0);
  for (int it = 0; it < 200 && t1 - t0 > 4.0 * std::numeric_limits<double>::epsilon() *
                                              std::max(1.0, std::abs(t1));
       ++it) {
    const double tm = 0.5 * (t0 + t1);
    const double gm = g(tm);
    if (gm == 0.0) return tm;
    if ((gm < 0.0) == (g0 < 0.0)) {
      t0 = tm;
      g0 = gm;
    } else {
      t1 = tm;
    }
  }
  return 0.5 * (t0 + t1);
}

// Hermite-corrected trapezoid on one panel.
double panel(double h, double f0, double f1, double df0, double df1) {
  return 0.5 * h * (f0 + f1) + h * h / 12.0 * (df0 - df1);
}

}  // namespace

void ShootingConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !(bisection_tol > 0.0) ||
      !(max_step > 0.0) || !(start_offset > 0.0)) {
    throw DomainError("ShootingConfig: tolerances and steps must be positive");
  }
  if (!(a_lo > 0.0) || !(a_lo < a_hi)) {
    throw DomainError("ShootingConfig: need 0 < a_lo < a_hi");
  }
}

double scaled_source(double p, double log_r, double u) {
  if (u == 0.0) return 0.0;
  const double e = 2.0 * log_r + p * std::log(std::abs(u));
  if (e < kUnderflowLog) return 0.0;
  return std::copysign(std::exp(e), u);
}

Trajectory integrate_from_origin(double p, double a, const ShootingConfig& cfg,
                                 double log_r_end, std::size_t stop_after_zeros) {
  if (!std::isfinite(p) || p <= 1.0) {
    throw DomainError("integrate_from_origin: p must exceed 1");
  }
  if (!std::isfinite(a) || a <= 0.0) {
    throw DomainError("integrate_from_origin: shooting height must be positive");
  }
  cfg.validate();

  Trajectory tr;
  tr.p = p;
  tr.a = a;
  tr.log_mu = log_mu_of(p, a);
  const double t_start = tr.log_mu + std::log(cfg.start_offset);
  if (t_start >= log_r_end) {
    throw DomainError("integrate_from_origin: bubble scale exceeds the integration range");
  }

  const auto rhs = [p](const State& y, State& dy, double t) {
    dy[0] = y[1];
    dy[1] = -scaled_source(p, t, y[0]);
  };

  auto stepper = odeint::make_dense_output(cfg.abs_tol, cfg.rel_tol, cfg.max_step,
                                           odeint::runge_kutta_dopri5<State>());
  State y0 = series_state(p, a, cfg.start_offset);
  stepper.initialize(y0, t_start, std::min(cfg.max_step, 1e-3));

  const auto push = [&tr](double t, const State& y) {
    tr.log_r.push_back(t);
    tr.u.push_back(y[0]);
    tr.du_dlogr.push_back(y[1]);
  };
  push(t_start, y0);

  std::size_t steps = 0;
  bool done = false;
  while (!done) {
    if (++steps > cfg.max_steps) {
      throw IntegrationError("integrate_from_origin: step budget exhausted at log r = " +
                             std::to_string(stepper.current_time()) +
                             " (p = " + std::to_string(p) + ")");
    }
    std::pair<double, double> span;
    try {
      span = stepper.do_step(rhs);
    } catch (const std::exception& e) {
      throw IntegrationError(std::string("integrate_from_origin: ") + e.what());
    }
    const auto [t0, t1] = span;
    const State prev{tr.u.back(), tr.du_dlogr.back()};
    const State cur = stepper.current_state();

    const auto at = [&stepper](double t) {
      State s;
      stepper.calc_state(t, s);
      return s;
    };

    // Events inside (t0, t1], in time order. Only sign changes of u and
    // minima (du/dt from - to + while u < 0) are tracked.
    struct Event {
      double t;
      bool is_zero;
    };
    std::array<Event, 2> events{};
    std::size_t n_events = 0;
    if ((prev[0] > 0.0) != (cur[0] > 0.0) && prev[0] != 0.0) {
      events[n_events++] = {bisect([&](double t) { return at(t)[0]; }, t0, t1), true};
    }
    if (prev[1] < 0.0 && cur[1] >= 0.0 && std::min(prev[0], cur[0]) < 0.0) {
      const double tm = bisect([&](double t) { return at(t)[1]; }, t0, t1);
      if (at(tm)[0] < 0.0) events[n_events++] = {tm, false};
    }
    if (n_events == 2 && events[1].t < events[0].t) std::swap(events[0], events[1]);

    for (std::size_t k = 0; k < n_events && !done; ++k) {
      const Event& ev = events[k];
      if (ev.t > log_r_end) break;
      State s = at(ev.t);
      if (ev.is_zero) {
        s[0] = 0.0;
        tr.zero_log_r.push_back(ev.t);
      } else {
        s[1] = 0.0;
        tr.min_log_r.push_back(ev.t);
      }
      if (ev.t > tr.log_r.back() + kMinGap && ev.t < log_r_end - kMinGap) push(ev.t, s);
      if (ev.is_zero && stop_after_zeros > 0 && tr.zero_log_r.size() >= stop_after_zeros) {
        done = true;
      }
    }
    if (done) break;

    if (t1 >= log_r_end) {
      if (log_r_end > tr.log_r.back()) push(log_r_end, at(log_r_end));
      done = true;
    } else if (t1 > tr.log_r.back() + kMinGap) {
      push(t1, cur);
    }
  }
  return tr;
}

RadialSolution make_solution(const Trajectory& traj) {
  if (traj.log_r.empty() || traj.log_r.back() != 0.0) {
    throw DomainError("make_solution: trajectory must end at r = 1");
  }
  RadialSolution s;
  s.p = traj.p;
  s.a = traj.a;
  s.log_mu = traj.log_mu;

  const std::size_t n = traj.log_r.size() + 1;
  s.r.reserve(n);
  s.log_r.reserve(n);
  s.u.reserve(n);
  s.du_dr.reserve(n);
  s.du_dlogr.reserve(n);
  s.r.push_back(0.0);
  s.log_r.push_back(-std::numeric_limits<double>::infinity());
  s.u.push_back(traj.a);
  s.du_dr.push_back(0.0);
  s.du_dlogr.push_back(0.0);
  for (std::size_t i = 0; i < traj.log_r.size(); ++i) {
    const double r = std::exp(traj.log_r[i]);
    s.r.push_back(r);
    s.log_r.push_back(traj.log_r[i]);
    s.u.push_back(traj.u[i]);
    s.du_dlogr.push_back(traj.du_dlogr[i]);
    s.du_dr.push_back(r > 0.0 ? traj.du_dlogr[i] / r : 0.0);
  }

  // Interior zeros: strictly inside (0, 1) up to a relative slack.
  constexpr double kBoundarySlack = -1e-9;
  for (double tz : traj.zero_log_r) {
    if (tz < kBoundarySlack) s.zeros.push_back(std::exp(tz));
  }
  if (s.zeros.empty()) {
    throw StructureError("make_solution: no interior zero (solution is single-signed)");
  }
  const auto find_node = [&s](double t) {
    return static_cast<std::size_t>(
        std::lower_bound(s.log_r.begin() + 1, s.log_r.end(), t) - s.log_r.begin());
  };
  s.zero_index = find_node(std::log(s.zeros.front()));
  s.min_index = static_cast<std::size_t>(
      std::min_element(s.u.begin(), s.u.end()) - s.u.begin());
  s.energy = energy(s).p_grad;
  return s;
}

double RadialSolution::value_at_log(double t) const {
  if (!(t <= 0.0)) throw DomainError("RadialSolution: radius outside [0, 1]");
  if (t < log_r[1]) {
    const double x = std::exp(t - log_mu);
    return series_state(p, a, x)[0];
  }
  auto it = std::upper_bound(log_r.begin() + 1, log_r.end(), t);
  std::size_t i = static_cast<std::size_t>(it - log_r.begin());
  i = std::min(std::max<std::size_t>(i, 2), log_r.size() - 1) - 1;
  const double h = log_r[i + 1] - log_r[i];
  const double s = (t - log_r[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * u[i] + h10 * h * du_dlogr[i] + h01 * u[i + 1] + h11 * h * du_dlogr[i + 1];
}

double RadialSolution::slope_at_log(double t) const {
  if (!(t <= 0.0)) throw DomainError("RadialSolution: radius outside [0, 1]");
  if (t < log_r[1]) {
    const double x = std::exp(t - log_mu);
    return series_state(p, a, x)[1];
  }
  auto it = std::upper_bound(log_r.begin() + 1, log_r.end(), t);
  std::size_t i = static_cast<std::size_t>(it - log_r.begin());
  i = std::min(std::max<std::size_t>(i, 2), log_r.size() - 1) - 1;
  const double h = log_r[i + 1] - log_r[i];
  const double s = (t - log_r[i]) / h;
  // derivatives of the Hermite basis w.r.t. t
  const double d00 = 6 * s * (s - 1) / h;
  const double d10 = (1 - s) * (1 - 3 * s);
  const double d01 = -d00;
  const double d11 = s * (3 * s - 2);
  return d00 * u[i] + d10 * du_dlogr[i] + d01 * u[i + 1] + d11 * du_dlogr[i + 1];
}

double RadialSolution::value(double radius) const {
  if (!(radius >= 0.0) || radius > 1.0) {
    throw DomainError("RadialSolution: radius outside [0, 1]");
  }
  if (radius == 0.0) return a;
  return value_at_log(std::log(radius));
}

double RadialSolution::derivative(double radius) const {
  if (!(radius >= 0.0) || radius > 1.0) {
    throw DomainError("RadialSolution: radius outside [0, 1]");
  }
  if (radius == 0.0) return 0.0;
  return slope_at_log(std::log(radius)) / radius;
}

EnergyBreakdown energy(const RadialSolution& sol) {
  const double p = sol.p;
  // In t = log r:  int |grad u|^2 dx = 2 pi int (du/dt)^2 dt,
  //                int |u|^(p+1) dx  = 2 pi int e^(2t) |u|^(p+1) dt.
  const auto grad_f = [&](std::size_t i) { return sol.du_dlogr[i] * sol.du_dlogr[i]; };
  const auto grad_df = [&](std::size_t i) {
    return -2.0 * sol.du_dlogr[i] * scaled_source(p, sol.log_r[i], sol.u[i]);
  };
  const auto pot_f = [&](std::size_t i) {
    return std::abs(scaled_source(p, sol.log_r[i], sol.u[i]) * sol.u[i]);
  };
  const auto pot_df = [&](std::size_t i) {
    const double f = pot_f(i);
    if (f == 0.0) return 0.0;
    return f * (2.0 + (p + 1.0) * sol.du_dlogr[i] / sol.u[i]);
  };

  // Disk inside the first stored node, from the Taylor start:
  // du/dt ~ -(a/2p) x^2, u ~ a.
  const double x1 = std::exp(sol.log_r[1] - sol.log_mu);
  const double c = sol.a / (2.0 * p);
  double grad_plus = c * c * std::pow(x1, 4) / 4.0;
  double grad_minus = 0.0;
  double pot_plus = pot_f(1) / (2.0);
  double pot_minus = 0.0;

  for (std::size_t i = 1; i + 1 < sol.r.size(); ++i) {
    const double h = sol.log_r[i + 1] - sol.log_r[i];
    const double g = panel(h, grad_f(i), grad_f(i + 1), grad_df(i), grad_df(i + 1));
    const double q = panel(h, pot_f(i), pot_f(i + 1), pot_df(i), pot_df(i + 1));
    if (i < sol.zero_index) {
      grad_plus += g;
      pot_plus += q;
    } else {
      grad_minus += g;
      pot_minus += q;
    }
  }

  EnergyBreakdown e{};
  e.p_grad_plus = kTwoPi * p * grad_plus;
  e.p_grad_minus = kTwoPi * p * grad_minus;
  e.p_grad = e.p_grad_plus + e.p_grad_minus;
  e.p_potential_plus = kTwoPi * p * pot_plus;
  e.p_potential_minus = kTwoPi * p * pot_minus;
  e.p_potential = e.p_potential_plus + e.p_potential_minus;
  e.E = (0.5 * e.p_grad - e.p_potential / (p + 1.0)) / p;
  return e;
}

double ode_residual(const RadialSolution& sol) {
  // Defect of the integral form u_{i+1} - u_i = int w dt (w = du/dt), with
  // the integral taken by the two-point Hermite rule of order six; w' and w''
  // come from the ODE itself, so the defect measures how far the stored
  // samples are from a solution.
  const auto d1 = [&](std::size_t i) {
    return -scaled_source(sol.p, sol.log_r[i], sol.u[i]);
  };
  const auto d2 = [&](std::size_t i) {
    const double s = scaled_source(sol.p, sol.log_r[i], sol.u[i]);
    if (s == 0.0) return 0.0;
    return -s * (2.0 + sol.p * sol.du_dlogr[i] / sol.u[i]);
  };
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < sol.r.size(); ++i) {
    const double h = sol.log_r[i + 1] - sol.log_r[i];
    const double predicted = 0.5 * h * (sol.du_dlogr[i] + sol.du_dlogr[i + 1]) +
                             h * h / 10.0 * (d1(i) - d1(i + 1)) +
                             h * h * h / 120.0 * (d2(i) + d2(i + 1));
    const double defect = std::abs(sol.u[i + 1] - sol.u[i] - predicted);
    worst = std::max(worst, defect / h);
  }
  return worst;
}

RadialSolution shoot_one_node(double p, const ShootingConfig& cfg) {
  if (!std::isfinite(p) || p <= 1.0) throw DomainError("shoot_one_node: p must exceed 1");
  cfg.validate();

  // The second zero of the height-a solution sits at
  // log r2(a) = log r2(1) - (p-1)/2 log a; far enough past r = 1 the target
  // is reported as a cap.
  const double cap = 0.5 * (p - 1.0) * std::log(cfg.a_hi / cfg.a_lo) + 50.0;
  const auto target = [&](double log_a) {
    const Trajectory tr = integrate_from_origin(p, std::exp(log_a), cfg, cap, 2);
    if (tr.zero_log_r.size() < 2) return cap;
    return tr.zero_log_r[1];
  };

  double lo = std::log(cfg.a_lo);
  double hi = std::log(cfg.a_hi);
  double f_lo = target(lo);
  double f_hi = target(hi);
  if (!(f_lo > 0.0) || !(f_hi < 0.0)) {
    throw BracketingError("shoot_one_node: bracket [" + std::to_string(cfg.a_lo) + ", " +
                          std::to_string(cfg.a_hi) +
                          "] does not straddle r = 1; log r2 at ends = " +
                          std::to_string(f_lo) + ", " + std::to_string(f_hi));
  }

  // Illinois regula falsi in log a.
  int side = 0;
  double log_a = lo;
  double best = lo;
  double best_f = std::abs(f_lo);
  if (std::abs(f_hi) < best_f) {
    best = hi;
    best_f = std::abs(f_hi);
  }
  bool converged = false;
  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    log_a = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(log_a > lo && log_a < hi)) log_a = 0.5 * (lo + hi);
    const double f = target(log_a);
    if (std::abs(f) < best_f) {
      best = log_a;
      best_f = std::abs(f);
    }
    if (std::abs(f) < 1e-14 || hi - lo < 1e-15) {
      converged = true;
      break;
    }
    if (f > 0.0) {
      lo = log_a;
      f_lo = f;
      if (side == -1) f_hi *= 0.5;
      side = -1;
    } else {
      hi = log_a;
      f_hi = f;
      if (side == +1) f_lo *= 0.5;
      side = +1;
    }
  }

  RadialSolution sol = make_solution(integrate_from_origin(p, std::exp(best), cfg, 0.0));
  if (std::abs(sol.u.back()) > cfg.bisection_tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "shoot_one_node: |u(1)| = %.3e above tolerance %.3e (a = %.12g%s)",
                  std::abs(sol.u.back()), cfg.bisection_tol, sol.a,
                  converged ? "" : ", iteration limit reached");
    throw IterationError(buf);
  }
  if (sol.zeros.size() != 1) {
    throw StructureError("shoot_one_node: expected one interior zero, found " +
                         std::to_string(sol.zeros.size()));
  }
  return sol;
}

}  // namespace lane_emden::radial
