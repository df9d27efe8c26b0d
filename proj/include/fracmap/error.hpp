#pragma once

#include <stdexcept>
#include <string>

namespace fracmap {

/// A precondition of an operation was violated by its inputs.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical check found a counterexample to an estimate that should hold.
/// `witness` is a human readable (usually JSON) description of the offending input.
class Falsification : public std::runtime_error {
 public:
  Falsification(const std::string& what, std::string witness)
      : std::runtime_error(what), witness_(std::move(witness)) {}

  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

/// Iterative solver gave up (e.g. step size underflow in descent).
class SolverAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fracmap
