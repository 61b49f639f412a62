#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "lane_emden/diagnostics.hpp"
#include "lane_emden/errors.hpp"
#include "lane_emden/liouville.hpp"
#include "lane_emden/radial.hpp"

using namespace lane_emden;
using namespace lane_emden::diagnostics;

namespace {

const radial::RadialSolution& solution(double p) {
  static std::map<double, radial::RadialSolution> cache;
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, radial::shoot_one_node(p)).first;
  return it->second;
}

}  // namespace

TEST_CASE("radial peaks") {
  const auto& s = solution(500.0);
  const Peaks pk = find_peaks(s);
  CHECK(pk.plus.location.x == 0.0);
  CHECK(pk.plus.location.y == 0.0);
  CHECK(pk.plus.value == s.a);
  CHECK(pk.plus.sign == 1);
  CHECK(pk.minus.sign == -1);
  CHECK(pk.minus.value == s.u_min());
  CHECK(pk.minus.radius() == doctest::Approx(s.r_min()).epsilon(1e-15));
  // mu^-2 = p |u|^(p-1), checked in logs
  for (const PeakPoint* q : {&pk.plus, &pk.minus}) {
    const double one = std::exp(std::log(500.0) + 499.0 * std::log(std::abs(q->value)) +
                                2.0 * q->log_mu);
    CHECK(std::abs(one - 1.0) < 1e-12);
    CHECK(q->mu > 0.0);
  }
  CHECK(pk.plus.log_mu <= pk.minus.log_mu);
}

TEST_CASE("mu ratio decreases with p") {
  double prev = 1.0;
  for (double p : {100.0, 250.0, 500.0, 1000.0}) {
    const Peaks pk = find_peaks(solution(p));
    const double log_ratio = pk.plus.log_mu - pk.minus.log_mu;
    CHECK(log_ratio < 0.0);
    CHECK(std::exp(log_ratio) < prev);
    prev = std::exp(log_ratio);
  }
}

TEST_CASE("single-signed solutions are rejected") {
  radial::RadialSolution s = solution(100.0);
  for (double& v : s.u) v = std::abs(v) + 1e-3;
  CHECK_THROWS_AS(find_peaks(s), StructureError);
}

TEST_CASE("rescaled profile normalization") {
  for (double p : {100.0, 1000.0}) {
    const auto& s = solution(p);
    const Peaks pk = find_peaks(s);
    const auto pts = disk_samples({}, 5.0, 50, 12);
    const RescaledProfile rp = rescale(s, pk.plus, pts);
    CHECK(rp.values.front() == 0.0);
    double worst = -1.0;
    for (double v : rp.values) worst = std::max(worst, v);
    CHECK(worst <= 1e-12);
    const RescaledProfile rm = rescale(s, pk.minus, std::vector<Point>{{0.0, 0.0}});
    CHECK(rm.values.front() == 0.0);
  }
}

TEST_CASE("rescaled values: property over random points") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> rad(0.0, 30.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  for (double p : {10.0, 100.0, 1000.0}) {
    const auto& s = solution(p);
    const Peaks pk = find_peaks(s);
    std::vector<Point> pts;
    const double rmax = std::min(30.0, max_rescaled_radius(s, pk.plus) * 0.5);
    for (int i = 0; i < 300; ++i) {
      const double r = rad(rng) * rmax / 30.0;
      const double a = ang(rng);
      pts.push_back({r * std::cos(a), r * std::sin(a)});
    }
    const RescaledProfile rp = rescale(s, pk.plus, pts);
    for (double v : rp.values) CHECK(v <= 1e-12);
  }
}

TEST_CASE("rescale range error reports the admissible radius") {
  const auto& s = solution(10.0);
  const Peaks pk = find_peaks(s);
  const double admissible = max_rescaled_radius(s, pk.plus);
  CHECK(admissible > 5.0);
  try {
    rescale(s, pk.plus, disk_samples({}, 2.0 * admissible, 4, 4));
    FAIL("expected a RangeError");
  } catch (const RangeError& e) {
    CHECK(e.max_admissible() <= admissible);
    CHECK(e.max_admissible() > 0.9 * admissible);
  }
}

TEST_CASE("profile distance oracles") {
  // Exact U sampled: distance 0.
  RescaledProfile rp;
  rp.points = disk_samples({}, 5.0, 20, 8);
  for (const Point& x : rp.points) {
    const double r = x.norm();
    rp.values.push_back(liouville::eval_regular(r));
    const double d = -4.0 / (8.0 + r * r);  // U'(r)/r
    rp.gradients.push_back(d * x);
  }
  const ProfileDistance self = profile_distance(rp, RegularTarget{}, 5.0, std::nullopt);
  CHECK(self.value == 0.0);
  CHECK(self.gradient < 1e-15);
  CHECK(self.samples == rp.points.size());

  // U against V_1 with exclusion 0.2: the direct sup over the same samples.
  const auto b = liouville::make_singular(1.0);
  const ProfileDistance d = profile_distance(rp, SingularTarget{b, {}}, 5.0, 0.2);
  double oracle = 0.0;
  for (const Point& x : rp.points) {
    const double r = x.norm();
    if (r < 0.2 || r > 5.0 * (1.0 + 1e-12)) continue;
    oracle = std::max(oracle, std::abs(-2.0 * std::log1p(r * r / 8.0) - liouville::eval_singular(b, r)));
  }
  CHECK(d.value > 0.1);
  CHECK(d.value == doctest::Approx(oracle).epsilon(1e-12));

  CHECK_THROWS_AS(profile_distance(rp, SingularTarget{b, {}}, 5.0, std::nullopt), DomainError);
  CHECK_THROWS_AS(profile_distance(rp, RegularTarget{{100.0, 0.0}}, 5.0, std::nullopt), DomainError);
}

TEST_CASE("profiles converge to the bubbles along the sweep") {
  double prev_plus = 1e9;
  double prev_minus = 1e9;
  for (double p : {100.0, 250.0, 500.0, 1000.0}) {
    const DiagnosticsReport r = diagnose(solution(p));
    CHECK(r.d_plus < prev_plus);
    CHECK(r.d_minus < prev_minus);
    prev_plus = r.d_plus;
    prev_minus = r.d_minus;
  }
  CHECK(prev_plus < 0.05);
}

TEST_CASE("concentration ratios") {
  const auto& s = solution(250.0);
  const Peaks pk = find_peaks(s);
  const ConcentrationRatios c = concentration_ratios(s, pk);
  CHECK(c.ell_hat == doctest::Approx(s.r_min() / pk.minus.mu).epsilon(1e-12));
  CHECK(c.nodal_extent_ratio == doctest::Approx(s.r0() / pk.minus.mu).epsilon(1e-12));
  CHECK(c.log_dist_nodal_over_mu_plus == doctest::Approx(std::log(s.r0()) - pk.plus.log_mu));
  CHECK(c.ell_hat > c.nodal_extent_ratio);
  radial::RadialSolution broken = s;
  broken.zeros.clear();
  CHECK_THROWS_AS(concentration_ratios(broken, pk), StructureError);
}

TEST_CASE("quantization checks") {
  const auto& s = solution(1000.0);
  const Peaks pk = find_peaks(s);
  const QuantizationReport q = quantization_checks(s, pk);
  CHECK(q.floor == doctest::Approx(8.0 * std::numbers::pi * (s.a * s.a + s.u_min() * s.u_min())));
  CHECK(q.floor_holds);
  CHECK(q.p_grad >= 0.95 * q.floor);
  CHECK(q.lambda1_plus);
  CHECK(q.lambda1_minus);
  CHECK(q.lambda1 == kLambda1Disk);
  const QuantizationReport q250 = quantization_checks(solution(250.0), find_peaks(solution(250.0)));
  CHECK(q.p3_constant > 0.0);
  CHECK(q.p3_constant < 2.0 * q250.p3_constant);
  CHECK(q.p3_constant > 0.5 * q250.p3_constant);
  CHECK(std::abs(q.sqrt_p_u_07) < std::abs(q250.sqrt_p_u_07));
}

TEST_CASE("gamma fit") {
  const GammaFit g = gamma_fit(solution(1000.0));
  CHECK(g.r_squared > 0.99);
  CHECK(g.gamma > 0.0);
  CHECK_THROWS_AS(gamma_fit(solution(1000.0), 0.9, 0.5), DomainError);
}

TEST_CASE("flux residual of smooth fields") {
  // Harmonic patch: zero Laplacian, zero net flux.
  const double h = flux_residual([](Point) { return Point{3.0, -2.0}; },
                                 [](Point) { return 0.0; }, 0.7);
  CHECK(h < 1e-13);
  // |x|^2: flux 4 pi rho^2 equals the integral of 4.
  const double q = flux_residual([](Point x) { return 2.0 * x; }, [](Point) { return 4.0; }, 0.7);
  CHECK(q < 1e-12);
  // A non-polynomial field: u = e^x cos y is harmonic.
  const double e = flux_residual(
      [](Point x) { return Point{std::exp(x.x) * std::cos(x.y), -std::exp(x.x) * std::sin(x.y)}; },
      [](Point) { return 0.0; }, 0.9);
  CHECK(e < 1e-12);
  // A wrong Laplacian is detected.
  CHECK(flux_residual([](Point x) { return 2.0 * x; }, [](Point) { return 3.0; }, 0.7) > 1.0);
  CHECK_THROWS_AS(flux_residual([](Point) { return Point{}; }, [](Point) { return 0.0; }, 0.0),
                  DomainError);
}

TEST_CASE("flux identity on the radial solution") {
  const auto& s = solution(100.0);
  const FluxReport at_r0 = flux_identity(s, s.r0());
  CHECK(at_r0.relative < 1e-4);
  CHECK(at_r0.source_minus == 0.0);
  CHECK(at_r0.source_plus > 0.0);
  CHECK(at_r0.flux < 0.0);
  // The whole disk B_r0 is positive: the source equals p int |u|^p.
  CHECK(at_r0.source == doctest::Approx(at_r0.scale).epsilon(1e-12));

  const FluxReport at_min = flux_identity(s, s.r_min());
  CHECK(at_min.relative < 1e-4);
  CHECK(at_min.source_plus > 0.0);
  CHECK(at_min.source_minus < 0.0);
  CHECK(at_min.source == doctest::Approx(at_min.source_plus + at_min.source_minus));
  // du/dr = 0 at r_min: the positive core and the negative annulus balance.
  CHECK(std::abs(at_min.flux) < 1e-6 * at_min.scale);
  CHECK(std::abs(at_min.source_plus + at_min.source_minus) < 1e-4 * at_min.scale);

  CHECK_THROWS_AS(flux_identity(s, 0.0), DomainError);
  CHECK_THROWS_AS(flux_identity(s, 1.5), DomainError);
}

TEST_CASE("diagnostics report entries are finite") {
  for (double p : {10.0, 1000.0}) {
    const DiagnosticsReport r = diagnose(solution(p));
    CHECK(r.mode == "radial");
    for (const auto& [name, v] : numeric_entries(r)) {
      CAPTURE(name);
      CHECK(std::isfinite(v));
    }
    CHECK(r.mu_plus <= r.mu_minus);
    CHECK(r.r0.has_value());
    CHECK(r.flux_relative_r0.has_value());
    CHECK(!r.nodal_max_radius.has_value());
  }
}
