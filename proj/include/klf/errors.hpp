#pragma once

#include <stdexcept>
#include <string>

namespace klf {

// Malformed format descriptor or a configuration that violates a format constraint.
class FormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operand lengths or matrix dimensions that do not agree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// zero * inf, inf / inf, 0 / 0, or a NaN pattern in an IEEE-style log format.
class InvalidOperation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Conversion requested from an accumulator whose overflow flag is set.
class SaturationError : public std::overflow_error {
 public:
  SaturationError(const std::string& what, bool negative)
      : std::overflow_error(what), negative_(negative) {}

  bool negative() const noexcept { return negative_; }

 private:
  bool negative_;
};

}  // namespace klf
