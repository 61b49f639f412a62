#include "lane_emden/targets.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "lane_emden/errors.hpp"

namespace lane_emden::targets {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

const std::array<Target, 7> kCatalog{{
    {"sup_plus", "alpha_plus", 2.46, Relation::Limit, 0.02,
     "least energy radial nodal solutions on the disk: ||u_p^+||_inf -> alpha+ ~ 2.46"},
    {"sup_minus", "alpha_minus", 1.17, Relation::Limit, 0.02,
     "least energy radial nodal solutions on the disk: ||u_p^-||_inf -> alpha- ~ 1.17"},
    {"energy", "C", 332.0, Relation::Limit, 0.05,
     "least energy radial nodal solutions on the disk: p int_B |grad u_p|^2 -> C ~ 332"},
    {"mass_regular", "8pi", 8.0 * kPi, Relation::Limit, 1e-6,
     "Liouville equation -Delta U = e^U in R^2: int e^U = 8 pi"},
    {"energy_plus", "8pi_e", 8.0 * kPi * kE, Relation::LowerBound, 0.0,
     "positive solutions concentrating at one point: p int |grad u_p|^2 -> 8 pi e"},
    {"energy", "16pi_e", 16.0 * kPi * kE, Relation::LowerBound, 0.0,
     "nodal solutions with two separate bubbles: p int |grad u_p|^2 -> 16 pi e"},
    {"sup_plus", "sqrt_e", 1.6487212707001282, Relation::LowerBound, 0.0,
     "conjectured for the tower: lim u_p(x_p^+) = A+ > sqrt(e)"},
}};

}  // namespace

std::span<const Target> catalog() { return kCatalog; }

const Target& lookup(std::string_view label) {
  for (const Target& t : kCatalog) {
    if (t.label == label) return t;
  }
  throw DomainError("unknown reference constant: " + std::string(label));
}

std::string_view relation_name(Relation r) {
  return r == Relation::Limit ? "limit" : "lower bound";
}

}  // namespace lane_emden::targets
