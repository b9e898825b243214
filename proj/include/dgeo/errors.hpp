#pragma once

#include <stdexcept>
#include <string>

namespace dgeo {

// Argument outside the domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// No admissible solution exists (e.g. no normalizing psi inside I).
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A structural invariant of an input object does not hold.
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A theorem hypothesis is not met by the given input.
struct NotApplicable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dgeo
