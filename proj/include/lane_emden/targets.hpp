#pragma once

#include <span>
#include <string>
#include <string_view>

// Reference constants for the large-p limits, each with the statement it
// comes from.

namespace lane_emden::targets {

enum class Relation {
  Limit,       // computed values should approach `value`
  LowerBound,  // computed values should stay above `value` (up to o(1))
};

struct Target {
  std::string_view key;       // matching report field, or a mass table key
  std::string_view label;
  double value;
  Relation relation;
  double tolerance;           // relative band used by acceptance checks (0: none)
  std::string_view citation;
};

/// The immutable catalog.
std::span<const Target> catalog();

/// Throws DomainError for unknown names.
const Target& lookup(std::string_view label);

std::string_view relation_name(Relation r);

}  // namespace lane_emden::targets
