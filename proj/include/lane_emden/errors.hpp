#pragma once

#include <stdexcept>
#include <string>

namespace lane_emden {

/// Failure categories. The CLI maps each one onto a process exit code.
enum class ErrorKind {
  Domain,       // argument outside the mathematical domain of an operation
  Usage,        // malformed configuration or command line
  Integration,  // ODE integrator gave up
  Bracketing,   // shooting bracket does not straddle the target
  Iteration,    // root finder or Newton did not converge
  Continuation, // continuation ran out of step halvings
  Structure,    // solution has the wrong nodal / sign structure
  Range,        // request falls outside the computed data
  Format,       // report file does not match the expected schema
  Invariant,    // a checked invariant failed on an accepted solution
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

class IntegrationError : public Error {
 public:
  explicit IntegrationError(const std::string& what)
      : Error(ErrorKind::Integration, what) {}
};

class BracketingError : public Error {
 public:
  explicit BracketingError(const std::string& what)
      : Error(ErrorKind::Bracketing, what) {}
};

class IterationError : public Error {
 public:
  explicit IterationError(const std::string& what)
      : Error(ErrorKind::Iteration, what) {}
};

class ContinuationError : public Error {
 public:
  ContinuationError(const std::string& what, double last_p, double last_eps)
      : Error(ErrorKind::Continuation, what), last_p_(last_p), last_eps_(last_eps) {}

  /// Last accepted point of the continuation path.
  double last_p() const noexcept { return last_p_; }
  double last_eps() const noexcept { return last_eps_; }

 private:
  double last_p_;
  double last_eps_;
};

class StructureError : public Error {
 public:
  explicit StructureError(const std::string& what)
      : Error(ErrorKind::Structure, what) {}
};

class RangeError : public Error {
 public:
  RangeError(const std::string& what, double max_admissible)
      : Error(ErrorKind::Range, what), max_admissible_(max_admissible) {}

  double max_admissible() const noexcept { return max_admissible_; }

 private:
  double max_admissible_;
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(ErrorKind::Format, what) {}
};

class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what)
      : Error(ErrorKind::Invariant, what) {}
};

}  // namespace lane_emden
