#pragma once

#include <stdexcept>
#include <string>

namespace bsched {

enum class ErrorKind {
  InvalidParameter,
  MissingRStar,
  Divergence,
  NonConvergence,
  NonpositiveDelta,
  NonpositiveSigma,
  InfeasibleBudget,
  BracketFailure,
  BudgetMismatch,
  SpecMismatch,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (and the CLI
/// exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bsched
