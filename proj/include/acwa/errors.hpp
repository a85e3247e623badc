#pragma once

#include <stdexcept>
#include <string>

// Error taxonomy. The split drives CLI exit codes:
//   DomainError / RegimeError / ValidationError -> exit 1 (bad input or model domain)
//   ContractViolation / SolverFailure / InvariantBreach -> exit 3 (internal bug)
// Usage errors (bad flags) never reach the library; the CLI maps them to exit 2.

namespace acwa {

// Input value outside a kernel's documented domain (e.g. negative diameter,
// temperature outside the correlation's range).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Flow landed in a regime the active policy refuses to model
// (transitional Reynolds band under the strict policy).
class RegimeError : public std::runtime_error {
 public:
  explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

// Scenario failed validation; carries the first error's code in the message.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A caller broke an API precondition that validation should have caught.
// Reaching this is a bug in the library or its caller, not in user input.
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// An iterative solver failed to converge within its cap. The caps are sized
// with large margins, so this indicates a bug or pathological input that
// validation should have rejected.
class SolverFailure : public std::runtime_error {
 public:
  explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

// A runtime conservation or bounds check failed mid-simulation.
class InvariantBreach : public std::runtime_error {
 public:
  explicit InvariantBreach(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace acwa
