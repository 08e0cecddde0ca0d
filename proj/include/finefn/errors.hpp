#pragma once

#include <stdexcept>
#include <string>

namespace finefn {

/// Division by an exact zero (rational or rational function).
struct DivisionByZero : std::domain_error {
  using std::domain_error::domain_error;
};

/// A substitution or construction produced a denominator that is the zero
/// polynomial.
struct IdenticallyZeroDenominator : std::domain_error {
  using std::domain_error::domain_error;
};

/// Exact evaluation hit a point where a denominator vanishes.
struct PoleError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Exact division was expected to succeed and did not.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

/// A power series has no inverse because its q^0 coefficient is zero.
struct NonInvertibleAtQZero : std::domain_error {
  using std::domain_error::domain_error;
};

struct NegativeQDegree : std::domain_error {
  using std::domain_error::domain_error;
};

/// Identity parameters outside the declared ranges.
struct ConstraintViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// The sampler ran out of redraws before finding a pole-free point.
struct Exhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace finefn
