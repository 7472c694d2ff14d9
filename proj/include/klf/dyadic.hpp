#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>

namespace klf {

using BigInt = boost::multiprecision::cpp_int;

/// Exact value significand * 2^exponent with an unbounded significand.
///
/// Always held in canonical form: the significand is odd, or the value is
/// zero and stored as (0, 0). Addition and multiplication are closed and exact.
class DyadicValue {
 public:
  DyadicValue() = default;
  DyadicValue(BigInt significand, std::int64_t exponent);

  static DyadicValue from_int(std::int64_t v) { return DyadicValue(BigInt(v), 0); }
  static DyadicValue pow2(std::int64_t e) { return DyadicValue(BigInt(1), e); }
  // Exact; throws std::domain_error on NaN or infinity.
  static DyadicValue from_double(double v);

  const BigInt& significand() const noexcept { return significand_; }
  std::int64_t exponent() const noexcept { return exponent_; }

  bool is_zero() const { return significand_.is_zero(); }
  int sign() const { return significand_.sign(); }
  DyadicValue abs() const;

  // Position of the leading one bit of |value|: floor(log2|value|). Undefined for zero.
  std::int64_t leading_exponent() const;

  // Nearest double (round-to-nearest); may overflow to infinity.
  double to_double() const;

  DyadicValue operator-() const;
  DyadicValue& operator+=(const DyadicValue& rhs);
  DyadicValue& operator*=(const DyadicValue& rhs);
  // Exact scaling by 2^k.
  DyadicValue scaled(std::int64_t k) const;

  friend DyadicValue operator+(DyadicValue lhs, const DyadicValue& rhs) { return lhs += rhs; }
  friend DyadicValue operator-(DyadicValue lhs, const DyadicValue& rhs) { return lhs += -rhs; }
  friend DyadicValue operator*(DyadicValue lhs, const DyadicValue& rhs) { return lhs *= rhs; }

  friend bool operator==(const DyadicValue& a, const DyadicValue& b) {
    return a.exponent_ == b.exponent_ && a.significand_ == b.significand_;
  }
  friend std::strong_ordering operator<=>(const DyadicValue& a, const DyadicValue& b);

 private:
  void canonicalize();

  BigInt significand_;
  std::int64_t exponent_ = 0;
};

}  // namespace klf
