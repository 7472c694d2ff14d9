#include "klf/dyadic.hpp"

#include <cmath>
#include <stdexcept>

namespace klf {

namespace mp = boost::multiprecision;

DyadicValue::DyadicValue(BigInt significand, std::int64_t exponent)
    : significand_(std::move(significand)), exponent_(exponent) {
  canonicalize();
}

void DyadicValue::canonicalize() {
  if (significand_.is_zero()) {
    exponent_ = 0;
    return;
  }
  const auto tz = mp::lsb(mp::abs(significand_));
  if (tz > 0) {
    significand_ >>= tz;
    exponent_ += static_cast<std::int64_t>(tz);
  }
}

DyadicValue DyadicValue::from_double(double v) {
  if (!std::isfinite(v)) throw std::domain_error("non-finite double has no dyadic value");
  if (v == 0.0) return {};
  int e = 0;
  const double m = std::frexp(v, &e);  // v = m * 2^e, 0.5 <= |m| < 1
  const auto scaled = static_cast<std::int64_t>(std::ldexp(m, 53));
  return DyadicValue(BigInt(scaled), static_cast<std::int64_t>(e) - 53);
}

DyadicValue DyadicValue::abs() const {
  DyadicValue r = *this;
  if (r.significand_.sign() < 0) r.significand_ = -r.significand_;
  return r;
}

std::int64_t DyadicValue::leading_exponent() const {
  if (is_zero()) throw std::domain_error("leading_exponent of zero");
  const BigInt mag = significand_.sign() < 0 ? BigInt(-significand_) : significand_;
  return exponent_ + static_cast<std::int64_t>(mp::msb(mag));
}

double DyadicValue::to_double() const {
  if (is_zero()) return 0.0;
  const BigInt mag = significand_.sign() < 0 ? BigInt(-significand_) : significand_;
  const auto bits = static_cast<std::int64_t>(mp::msb(mag)) + 1;
  // Keep 64 bits plus a sticky bit so the conversion rounds once.
  std::int64_t shift = bits > 64 ? bits - 64 : 0;
  BigInt top = mag >> shift;
  if (shift > 0 && (top << shift) != mag) top |= 1;
  const long double t = top.convert_to<long double>();
  const double r = static_cast<double>(std::ldexp(t, static_cast<int>(shift + exponent_)));
  return significand_.sign() < 0 ? -r : r;
}

DyadicValue DyadicValue::operator-() const {
  DyadicValue r = *this;
  r.significand_ = -r.significand_;
  return r;
}

DyadicValue& DyadicValue::operator+=(const DyadicValue& rhs) {
  if (rhs.is_zero()) return *this;
  if (is_zero()) return *this = rhs;
  if (exponent_ <= rhs.exponent_) {
    significand_ += BigInt(rhs.significand_) << (rhs.exponent_ - exponent_);
  } else {
    significand_ = (significand_ << (exponent_ - rhs.exponent_)) + rhs.significand_;
    exponent_ = rhs.exponent_;
  }
  canonicalize();
  return *this;
}

DyadicValue& DyadicValue::operator*=(const DyadicValue& rhs) {
  significand_ *= rhs.significand_;
  exponent_ += rhs.exponent_;
  canonicalize();
  return *this;
}

DyadicValue DyadicValue::scaled(std::int64_t k) const {
  if (is_zero()) return *this;
  DyadicValue r = *this;
  r.exponent_ += k;
  return r;
}

std::strong_ordering operator<=>(const DyadicValue& a, const DyadicValue& b) {
  const int sa = a.sign();
  const int sb = b.sign();
  if (sa != sb) return sa <=> sb;
  if (sa == 0) return std::strong_ordering::equal;
  // Same sign, both nonzero: compare magnitudes, flip for negatives.
  const auto la = a.leading_exponent();
  const auto lb = b.leading_exponent();
  std::strong_ordering mag = la <=> lb;
  if (mag == std::strong_ordering::equal) {
    const BigInt ma = sa < 0 ? BigInt(-a.significand()) : a.significand();
    const BigInt mb = sb < 0 ? BigInt(-b.significand()) : b.significand();
    const auto e = std::min(a.exponent(), b.exponent());
    const BigInt xa = ma << (a.exponent() - e);
    const BigInt xb = mb << (b.exponent() - e);
    mag = xa.compare(xb) <=> 0;
  }
  if (sa > 0) return mag;
  return 0 <=> mag;
}

}  // namespace klf
