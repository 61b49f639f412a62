#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "lane_emden/errors.hpp"
#include "lane_emden/liouville.hpp"

using namespace lane_emden;
using namespace lane_emden::liouville;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent oracle: composite Simpson in s = log r of 2 pi r^2 e^V(r),
// which decays exponentially at both ends for these profiles.
template <class F>
double simpson_mass(F log_density, double s0, double s1, int n) {
  const double h = (s1 - s0) / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = s0 + i * h;
    const double f = 2.0 * kPi * std::exp(2.0 * s + log_density(std::exp(s)));
    sum += f * ((i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  return sum * h / 3.0;
}

// Closed forms written out directly, without the library's log-sum form.
double naive_alpha(double ell) { return std::sqrt(2.0 * ell * ell + 4.0); }
double naive_beta(double ell) {
  const double a = naive_alpha(ell);
  return ell * std::pow((a + 2.0) / (a - 2.0), 1.0 / a);
}
double naive_V(double ell, double r) {
  const double a = naive_alpha(ell);
  const double ba = std::pow(naive_beta(ell), a);
  const double den = ba + std::pow(r, a);
  return std::log(2.0 * a * a * ba * std::pow(r, a - 2.0) / (den * den));
}

// r^-2 d^2V/ds^2 + e^V with a five-point stencil in s = log r.
template <class F>
double pde_residual(F V, double r, double h) {
  const double s = std::log(r);
  const double d2 = (-V(std::exp(s + 2 * h)) + 16 * V(std::exp(s + h)) - 30 * V(r) +
                     16 * V(std::exp(s - h)) - V(std::exp(s - 2 * h))) /
                    (12 * h * h);
  return d2 / (r * r) + std::exp(V(r));
}

}  // namespace

TEST_CASE("regular bubble values") {
  CHECK(eval_regular(0.0) == 0.0);
  CHECK(eval_regular(std::sqrt(8.0)) == doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-15));
  for (double r : {0.1, 1.0, 10.0, 1e3}) {
    CHECK(eval_regular(r) < 0.0);
    CHECK(eval_regular(r) == doctest::Approx(std::log(1.0 / std::pow(1.0 + r * r / 8.0, 2))));
  }
}

TEST_CASE("regular bubble domain errors") {
  CHECK_THROWS_AS(eval_regular(-1e-12), DomainError);
  CHECK_THROWS_AS(eval_regular(std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK_THROWS_AS(eval_regular(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("regular bubble mass is 8 pi") {
  const double m = regular_mass();
  CHECK(std::abs(m - 8.0 * kPi) / (8.0 * kPi) < 1e-6);
  const double oracle = simpson_mass([](double r) { return eval_regular(r); }, -40.0, 40.0, 40000);
  CHECK(std::abs(m - oracle) / oracle < 1e-9);
}

TEST_CASE("singular bubble parameters for ell = 1") {
  const SingularBubble b = make_singular(1.0);
  CHECK(b.alpha == doctest::Approx(std::sqrt(6.0)).epsilon(1e-15));
  CHECK(b.beta == doctest::Approx(naive_beta(1.0)).epsilon(1e-13));
  CHECK(b.eta == doctest::Approx((std::sqrt(6.0) - 2.0) / 2.0).epsilon(1e-14));
  CHECK(b.H == doctest::Approx(-2.0 * kPi * (std::sqrt(6.0) - 2.0)).epsilon(1e-14));
  CHECK(dirac_strength(b) == b.H);
  CHECK(b.alpha > 2.0);
  CHECK(b.eta > 0.0);
  CHECK(b.H < 0.0);
}

TEST_CASE("singular bubble touching condition") {
  for (double ell : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    CAPTURE(ell);
    const SingularBubble b = make_singular(ell);
    CHECK(std::abs(eval_singular(b, ell)) < 1e-10);
    const double h = 1e-6 * ell;
    const double fd = (eval_singular(b, ell + h) - eval_singular(b, ell - h)) / (2 * h);
    CHECK(std::abs(fd) < 1e-8);
    CHECK(std::abs(singular_derivative(b, ell)) < 1e-12);
  }
  CHECK(std::abs(eval_singular(make_singular(2.0), 2.0)) < 1e-10);
}

TEST_CASE("singular bubble agrees with the direct closed form") {
  for (double ell : {0.5, 1.0, 3.0}) {
    const SingularBubble b = make_singular(ell);
    for (double r : {1e-3, 0.1, 0.7, 1.0, 5.0, 40.0}) {
      CHECK(eval_singular(b, r) == doctest::Approx(naive_V(ell, r)).epsilon(1e-11));
    }
  }
}

TEST_CASE("singular bubble small-r expansion") {
  const SingularBubble b = make_singular(1.0);
  const double r = 1e-3;
  const double two_term =
      (b.alpha - 2.0) * std::log(r) + std::log(2.0 * b.alpha * b.alpha / std::pow(b.beta, b.alpha));
  CHECK(std::abs(eval_singular(b, r) - two_term) < 1e-4);
}

TEST_CASE("singular bubble mass is 4 pi alpha") {
  for (double ell : {0.5, 1.0, 2.0}) {
    CAPTURE(ell);
    const SingularBubble b = make_singular(ell);
    const double m = singular_mass(b);
    CHECK(std::abs(m - 4.0 * kPi * b.alpha) / (4.0 * kPi * b.alpha) < 1e-6);
    CHECK(std::abs(m - 8.0 * kPi * (1.0 + b.eta)) / m < 1e-6);
    CHECK(b.exact_mass() == doctest::Approx(4.0 * kPi * b.alpha));
    const double oracle =
        simpson_mass([&](double r) { return naive_V(ell, r); }, -60.0, 60.0, 60000);
    CHECK(std::abs(m - oracle) / oracle < 1e-8);
  }
  // ell = 1: 4 pi sqrt(6)
  CHECK(singular_mass(make_singular(1.0)) == doctest::Approx(4.0 * kPi * std::sqrt(6.0)).epsilon(1e-6));
}

TEST_CASE("regular limit ell -> 0") {
  const SingularBubble b = make_singular(1e-6);
  CHECK(b.alpha - 2.0 == doctest::Approx(0.5e-12).epsilon(1e-3));
  CHECK(b.eta < 1e-12);
  CHECK(std::abs(b.H) < 1e-11);
  CHECK(std::abs(dirac_strength(b)) < 1e-11);
}

TEST_CASE("singular bubble errors") {
  CHECK_THROWS_AS(make_singular(0.0), DomainError);
  CHECK_THROWS_AS(make_singular(-1.0), DomainError);
  const SingularBubble b = make_singular(1.0);
  CHECK_THROWS_AS(eval_singular(b, 0.0), DomainError);
  CHECK_THROWS_AS(eval_singular(b, -2.0), DomainError);
}

TEST_CASE("V is non-positive and tends to -inf at both ends") {
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> log_r(-8.0, 8.0);
  std::uniform_real_distribution<double> log_ell(std::log(0.05), std::log(20.0));
  for (int i = 0; i < 2000; ++i) {
    const SingularBubble b = make_singular(std::exp(log_ell(rng)));
    CHECK(eval_singular(b, std::exp(log_r(rng))) <= 1e-14);
  }
  const SingularBubble b = make_singular(1.0);
  CHECK(eval_singular(b, 1e-30) < -10.0);
  CHECK(eval_singular(b, 1e30) < -100.0);
}

TEST_CASE("PDE residual of the bubbles on a log grid") {
  const SingularBubble b = make_singular(1.0);
  double worst_u = 0.0;
  double worst_v = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double r = std::pow(10.0, -2.0 + 4.0 * i / 200.0);
    worst_u = std::max(worst_u, std::abs(pde_residual([](double x) { return eval_regular(x); }, r, 1e-2)));
    worst_v = std::max(worst_v, std::abs(pde_residual([&](double x) { return eval_singular(b, x); }, r, 1e-2)));
  }
  CHECK(worst_u < 1e-6);
  CHECK(worst_v < 1e-6);
}

TEST_CASE("parameter maps are monotone") {
  double prev_alpha = 0.0;
  double prev_eta = -1.0;
  double prev_H = 1.0;
  for (double ell = 0.05; ell < 20.0; ell *= 1.3) {
    const SingularBubble b = make_singular(ell);
    CHECK(b.alpha > prev_alpha);
    CHECK(b.eta > prev_eta);
    CHECK(b.H < prev_H);
    prev_alpha = b.alpha;
    prev_eta = b.eta;
    prev_H = b.H;
  }
}

TEST_CASE("general radial family matches the singular bubble") {
  const GeneralRadialLiouville g = match_parameters(1.0);
  CHECK(g.delta == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(g.y == doctest::Approx(std::log(naive_beta(1.0))).epsilon(1e-13));
  const SingularBubble b = make_singular(1.0);
  for (double r : {0.1, 1.0, 10.0}) CHECK(std::abs(g(r) - eval_singular(b, r)) < 1e-10);
  for (double ell : {0.5, 2.0, 4.0}) {
    const GeneralRadialLiouville m = match_parameters(ell);
    const SingularBubble s = make_singular(ell);
    for (int i = 0; i <= 60; ++i) {
      const double r = std::pow(10.0, -3.0 + 6.0 * i / 60.0);
      CHECK(std::abs(m(r) - eval_singular(s, r)) < 1e-10);
    }
  }
}

TEST_CASE("general family at delta = 1/sqrt(2) is a scaled regular bubble") {
  // V(r) = U(lambda r) + 2 log lambda with lambda = sqrt(8) e^-y.
  for (double y : {-1.0, 0.0, 2.5}) {
    const GeneralRadialLiouville g = general_radial(1.0 / std::sqrt(2.0), y);
    const double lambda = std::sqrt(8.0) * std::exp(-y);
    for (double r : {0.01, 0.5, 3.0, 50.0}) {
      CHECK(g(r) == doctest::Approx(eval_regular(lambda * r) + 2.0 * std::log(lambda)).epsilon(1e-12));
    }
  }
}

TEST_CASE("general family errors") {
  CHECK_THROWS_AS(general_radial(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(general_radial(-0.5, 1.0), DomainError);
}
