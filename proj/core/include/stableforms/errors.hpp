#pragma once

#include <stdexcept>
#include <string>

namespace stableforms {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shape/degree/dimension mismatches and malformed inputs.
struct StructuralError : Error {
  using Error::Error;
};

/// Metric is not symmetric positive definite where one is required.
struct MetricError : Error {
  using Error::Error;
};

/// A form fails the open-orbit (stability) condition, or a stable-form
/// solve (Newton) diverges.
struct StabilityError : Error {
  using Error::Error;
};

/// A 2-form is not positive with respect to the induced complex structure.
struct PositivityError : Error {
  using Error::Error;
};

/// A structure pair violates the algebraic compatibility constraints.
struct CompatibilityError : Error {
  using Error::Error;
};

/// First-jet data is inconsistent across the structure equations that
/// share a torsion component.
struct JetInconsistencyError : Error {
  using Error::Error;
};

/// Input outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

/// A formal differential rule set does not cover a generator that was
/// reached during expansion.
struct IncompletenessError : Error {
  using Error::Error;
};

/// An ODE trajectory left the admissible region (0, inf).
struct BlowupError : Error {
  BlowupError(const std::string& what, double t) : Error(what), time(t) {}
  double time;
};

/// A Schur-lemma ratio that must be constant is not: the underlying
/// representation identification is broken. Always a bug, never data.
struct RepresentationError : Error {
  using Error::Error;
};

}  // namespace stableforms
