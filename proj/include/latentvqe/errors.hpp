#pragma once

#include <stdexcept>
#include <string>

namespace latentvqe {

// Exception classes the CLI maps onto exit codes. Plain precondition failures
// inside the library use std::invalid_argument and are treated as usage errors.

/// Bad command line or out-of-range user input (exit code 2).
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Missing, unreadable or schema-incompatible upstream artifact (exit code 3).
class ArtifactError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values, eigensolver non-convergence, training blowup (exit code 4).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace latentvqe
