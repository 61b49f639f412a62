#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "lane_emden/errors.hpp"
#include "lane_emden/radial.hpp"

using namespace lane_emden;
using namespace lane_emden::radial;

namespace {

// Fixed-step RK4 for u'' = -u'/r - |u|^(p-1) u on [h, 1] in r, started from
// the series u = a - a^p r^2/4, u' = -a^p r/2. Returns u(1) and the number
// of sign changes met on the way.
struct Rk4Result {
  double u1;
  int zeros;
};

Rk4Result rk4_oracle(double p, double a, double h) {
  const auto f = [p](double r, double u, double v, double& du, double& dv) {
    du = v;
    dv = -v / r - std::pow(std::abs(u), p - 1.0) * u;
  };
  double r = h;
  double u = a - std::pow(a, p) * r * r / 4.0;
  double v = -std::pow(a, p) * r / 2.0;
  int zeros = 0;
  const int n = static_cast<int>(std::lround((1.0 - h) / h));
  for (int i = 0; i < n; ++i) {
    double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
    f(r, u, v, k1u, k1v);
    f(r + h / 2, u + h / 2 * k1u, v + h / 2 * k1v, k2u, k2v);
    f(r + h / 2, u + h / 2 * k2u, v + h / 2 * k2v, k3u, k3v);
    f(r + h, u + h * k3u, v + h * k3v, k4u, k4v);
    const double un = u + h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
    if ((un < 0) != (u < 0) && i + 1 < n) ++zeros;
    u = un;
    r = h + (i + 1) * h;
  }
  return {u, zeros};
}

// Bisection on a for u(1) = 0 with `zeros_before` interior sign changes.
double rk4_shoot(double p, int zeros_before, double h) {
  // Coarse scan for the bracket.
  double lo = 0.0;
  double hi = 0.0;
  for (double a = 0.25; a < 40.0; a += 0.25) {
    const Rk4Result r = rk4_oracle(p, a, 1e-3);
    if (r.zeros > zeros_before) {
      hi = a;
      lo = a - 0.25;
      break;
    }
  }
  REQUIRE(hi > 0.0);
  const double s_lo = rk4_oracle(p, lo, h).u1;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double um = rk4_oracle(p, mid, h).u1;
    if (std::abs(um) < 1e-12) return mid;
    if ((um < 0) == (s_lo < 0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("config validation") {
  ShootingConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.a_lo = 4.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.bisection_tol = -1.0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("integration domain errors") {
  const ShootingConfig cfg;
  CHECK_THROWS_AS(integrate_from_origin(3.0, 0.0, cfg), DomainError);
  CHECK_THROWS_AS(integrate_from_origin(3.0, -1.0, cfg), DomainError);
  CHECK_THROWS_AS(integrate_from_origin(1.0, 1.0, cfg), DomainError);
  CHECK_THROWS_AS(shoot_one_node(0.5), DomainError);
}

TEST_CASE("step exhaustion is an integration error") {
  ShootingConfig cfg;
  cfg.max_steps = 5;
  CHECK_THROWS_AS(integrate_from_origin(10.0, 2.0, cfg), IntegrationError);
}

TEST_CASE("series start: p = 5, a = 1 gives u ~ 1 - r^2/4") {
  const ShootingConfig cfg;
  for (double r : {0.01, 0.02}) {
    const Trajectory t = integrate_from_origin(5.0, 1.0, cfg, std::log(r));
    REQUIRE(!t.log_r.empty());
    CHECK(t.log_r.back() == doctest::Approx(std::log(r)).epsilon(1e-14));
    // next term of the series: + p r^4 / 64
    CHECK(t.u.back() == doctest::Approx(1.0 - r * r / 4.0 + 5.0 * std::pow(r, 4) / 64.0).epsilon(1e-9));
  }
}

TEST_CASE("scaled source matches the direct power") {
  for (double u : {-1.3, -0.2, 0.0, 0.7, 1.9}) {
    const double t = -0.4;
    const double direct = std::exp(2 * t) * std::pow(std::abs(u), 6.0) * u;
    CHECK(scaled_source(7.0, t, u) == doctest::Approx(direct).epsilon(1e-13));
  }
  CHECK(scaled_source(1000.0, -1.0, 0.3) == 0.0);  // underflow, not NaN
}

TEST_CASE("p = 3 first zero at r = 1 reproduced by an RK4 oracle") {
  // Library: by scaling, the first zero of the a = 1 trajectory fixes a.
  ShootingConfig cfg;
  const Trajectory t = integrate_from_origin(3.0, 1.0, cfg, 5.0, 1);
  REQUIRE(!t.zero_log_r.empty());
  const double a_lib = std::exp(t.zero_log_r[0]);  // a = exp(2 T / (p - 1))
  const double a_oracle = rk4_shoot(3.0, 0, 1e-5);
  CHECK(std::abs(a_lib - a_oracle) < 1e-8);
}

TEST_CASE("p = 3 one-node solution reproduced by an RK4 oracle") {
  ShootingConfig cfg;
  cfg.a_lo = 3.0;
  cfg.a_hi = 30.0;
  const RadialSolution sol = shoot_one_node(3.0, cfg);
  const double a_oracle = rk4_shoot(3.0, 1, 1e-5);
  CHECK(std::abs(sol.a - a_oracle) < 1e-8 * a_oracle);
  CHECK(sol.zeros.size() == 1);
}

TEST_CASE("scaling covariance") {
  const double p = 7.0;
  const double a = 2.2;
  const ShootingConfig cfg;
  const Trajectory base = integrate_from_origin(p, a, cfg, 0.0);
  for (double lambda : {1.0, 0.5, 0.125}) {
    CAPTURE(lambda);
    const double a2 = std::pow(lambda, 2.0 / (p - 1.0)) * a;
    const Trajectory scaled = integrate_from_origin(p, a2, cfg, -std::log(lambda));
    REQUIRE(scaled.zero_log_r.size() == base.zero_log_r.size());
    for (std::size_t i = 0; i < base.zero_log_r.size(); ++i) {
      CHECK(scaled.zero_log_r[i] == doctest::Approx(base.zero_log_r[i] - std::log(lambda)).epsilon(1e-9));
    }
    REQUIRE(scaled.min_log_r.size() == base.min_log_r.size());
    const double k = std::pow(lambda, 2.0 / (p - 1.0));
    // u_a2(r) = k u_a(lambda r): compare at the end points r = 1/lambda and 1
    CHECK(scaled.u.back() == doctest::Approx(k * base.u.back()).epsilon(1e-8));
  }
}

TEST_CASE("one-node solution invariants") {
  const ShootingConfig cfg;
  double prev_r0 = 2.0;
  for (double p : {10.0, 50.0, 100.0, 250.0, 500.0, 1000.0}) {
    CAPTURE(p);
    const RadialSolution s = shoot_one_node(p, cfg);
    CHECK(s.a > 0.0);
    CHECK(s.u.front() == s.a);
    CHECK(s.du_dr.front() == 0.0);
    CHECK(s.r.front() == 0.0);
    CHECK(s.r.back() == 1.0);
    CHECK(std::abs(s.u.back()) < cfg.bisection_tol);
    REQUIRE(s.zeros.size() == 1);
    const double r0 = s.r0();
    CHECK(r0 > 0.0);
    CHECK(r0 < 1.0);
    CHECK(r0 < prev_r0);
    prev_r0 = r0;
    bool strictly_increasing = true;
    for (std::size_t i = 1; i < s.r.size(); ++i) {
      if (!(s.r[i] > s.r[i - 1])) strictly_increasing = false;
    }
    CHECK(strictly_increasing);
    // sign structure and peaks
    bool signs_ok = true;
    double umax = -1e300;
    double umin = 1e300;
    for (std::size_t i = 0; i + 1 < s.r.size(); ++i) {
      if (s.r[i] < r0 && !(s.u[i] > 0.0)) signs_ok = false;
      if (s.r[i] > r0 && !(s.u[i] < 0.0)) signs_ok = false;
      umax = std::max(umax, s.u[i]);
      umin = std::min(umin, s.u[i]);
    }
    CHECK(signs_ok);
    CHECK(umax == s.a);
    CHECK(umin == s.u_min());
    CHECK(s.r_min() > r0);
    CHECK(s.r_min() < 1.0);
    // Energy identity and ODE residual
    const EnergyBreakdown e = energy(s);
    CHECK(std::abs(e.p_grad - e.p_potential) / e.p_grad < 1e-6);
    CHECK(e.p_grad == doctest::Approx(e.p_grad_plus + e.p_grad_minus).epsilon(1e-12));
    CHECK(s.energy == e.p_grad);
    CHECK(e.E == doctest::Approx((0.5 - 1.0 / (p + 1.0)) * e.p_grad / p).epsilon(1e-6));
    CHECK(ode_residual(s) < 10.0 * cfg.rel_tol);
    // Lower bound p E_p(u+-) >= 4 pi e (large p).
    if (p >= 100.0) {
      const double four_pi_e = 4.0 * std::numbers::pi * std::numbers::e;
      CHECK((0.5 - 1.0 / (p + 1.0)) * e.p_grad_plus > four_pi_e);
      CHECK((0.5 - 1.0 / (p + 1.0)) * e.p_grad_minus > four_pi_e);
    }
    // ||u+-||^(p-1) >= lambda1 of the disk
    const double log_l1 = std::log(5.783185962946784);
    CHECK((p - 1.0) * std::log(s.a) >= log_l1);
    CHECK((p - 1.0) * std::log(-s.u_min()) >= log_l1);
  }
}

TEST_CASE("output grid resolves the positive bubble") {
  const RadialSolution s = shoot_one_node(500.0);
  std::size_t inside = 0;
  for (std::size_t i = 1; i < s.r.size(); ++i) {
    if (s.log_r[i] <= s.log_mu + std::log(10.0)) ++inside;
  }
  CHECK(inside >= 200);
}

TEST_CASE("interpolation reproduces the nodes and the series") {
  const RadialSolution s = shoot_one_node(20.0);
  for (std::size_t i = 1; i < s.r.size(); i += 37) {
    CHECK(s.value_at_log(s.log_r[i]) == doctest::Approx(s.u[i]).epsilon(1e-14));
    CHECK(s.value(s.r[i]) == doctest::Approx(s.u[i]).epsilon(1e-12));
  }
  CHECK(s.value(0.0) == s.a);
  CHECK(s.derivative(0.0) == 0.0);
  const double r = 0.5 * s.r[1];
  CHECK(s.value(r) == doctest::Approx(s.a - std::pow(s.a, 20.0) * r * r / 4.0).epsilon(1e-12));
}

TEST_CASE("bracketing and iteration errors") {
  ShootingConfig cfg;
  cfg.a_lo = 1.0;
  cfg.a_hi = 1.01;
  CHECK_THROWS_AS(shoot_one_node(10.0, cfg), BracketingError);
  cfg = {};
  cfg.max_iterations = 1;
  cfg.bisection_tol = 1e-300;
  CHECK_THROWS_AS(shoot_one_node(10.0, cfg), IterationError);
}
