#pragma once

#include <stdexcept>
#include <string>

namespace posedb {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied parameter violates a documented precondition.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The oracle refused a query because the per-session budget is spent.
/// Kept distinct from every other error: the experiment turns it into a
/// failed round.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

/// A graph does not have the structure an operation requires.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// The in-place labeller has no schedule for this graph.
class ScheduleError : public Error {
 public:
  using Error::Error;
};

/// A label was read from the meter after it had been evicted (or was never
/// written).
class MeterViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed prover state or adversary output.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// An adversary does not satisfy a declared contract (e.g. uniformity).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A closed-form bound does not apply to the given inputs.
class InapplicableError : public Error {
 public:
  using Error::Error;
};

/// No number of rounds reaches the requested success-probability target.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace posedb
