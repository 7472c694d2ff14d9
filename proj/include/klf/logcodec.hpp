#pragma once

#include "klf/dyadic.hpp"
#include "klf/format.hpp"
#include "klf/kulisch.hpp"

#include <cstdint>
#include <vector>

namespace klf {

/// p and q lookup tables of a log format.
///
/// p[f] = RNE(2^(f / 2^F) - 1) to alpha fractional bits, 2^F entries.
/// q[g] = RNE(log2(1 + g / 2^beta)) to gamma fractional bits, 2^beta entries.
struct PqTables {
  LogConfig config;
  std::vector<std::uint64_t> p;
  std::vector<std::uint64_t> q;

  int p_bits() const { return config.alpha; }
  int q_bits() const { return config.gamma; }
};

// Every entry is decided exactly; no floating point rounding can leak in.
PqTables build_tables(const LogConfig& cfg);

// Fraction is zero-extended to the payload width F. Throws InvalidOperation on
// IEEE-style NaN patterns; IEEE-style denormals decode as zero.
DecodedNumber decode_log(Bits bits, const LogConfig& cfg);

// Encodes sign * 2^(m + fraction / 2^fraction_width), rounding to nearest in
// the log domain (ties to the even pattern) with the posit clamping rules.
Bits encode_log(bool negative, std::int64_t m, const BigInt& fraction, int fraction_width,
                const LogConfig& cfg);

// Exact fixed-point add / subtract of the m.f log values. Results carry
// fraction_width F and an unbounded m. Throws InvalidOperation on 0*inf,
// inf/inf and 0/0.
DecodedNumber log_multiply(const DecodedNumber& a, const DecodedNumber& b, const LogConfig& cfg);
DecodedNumber log_divide(const DecodedNumber& a, const DecodedNumber& b, const LogConfig& cfg);

// sign * 2^m * (1 + p[f] / 2^alpha) as a shift-in term for the accumulator.
LinearTerm log_to_linear(const DecodedNumber& x, const PqTables& tables);

// Linear sign * 2^e * (1 + g / 2^width) to a log pattern: g is rounded to beta
// bits (RNE with sticky), looked up in q, and the gamma-bit result encoded.
Bits linear_to_log(bool negative, std::int64_t e, const BigInt& g, int width,
                   const PqTables& tables);

// gamma-bit log fraction and adjusted exponent produced by the q path, before encoding.
struct LogFraction {
  std::int64_t m = 0;
  std::uint64_t fraction = 0;  // gamma bits
};
LogFraction linear_to_log_fraction(std::int64_t e, const BigInt& g, int width,
                                   const PqTables& tables);

// Nearest log pattern to an exact linear value, nearest measured in the log
// domain. Used for input conversion.
Bits encode_log_value(const DyadicValue& x, const LogConfig& cfg);

// The log value m + f/2^F of a normal decoded number as a dyadic (the exponent, not 2^exponent).
DyadicValue log_exponent(const DecodedNumber& d);

// Approximate linear value of a pattern (for reports only).
double log_to_double(Bits bits, const LogConfig& cfg);

// floor(log2(base^(2^k))) for base >= 2.
std::int64_t floor_log2_power(const BigInt& base, int k);

}  // namespace klf
