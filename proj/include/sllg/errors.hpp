#pragma once

#include <stdexcept>
#include <string>

namespace sllg {

/// A vector fell below the projection floor; the step was too large or the
/// field genuinely degenerates.
struct NearZeroVector : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Time stepping could not proceed above the dt floor.
struct BlowupSuspected : std::runtime_error {
  BlowupSuspected(const std::string& what, double t_, long steps_)
      : std::runtime_error(what), t(t_), steps_completed(steps_) {}
  double t = 0.0;
  long steps_completed = 0;
};

/// An energy that must not grow did grow beyond tolerance.
struct MonotonicityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A field violated a declared pointwise constraint (e.g. |m| = 1).
struct ConstraintViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonFiniteField : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace sllg
