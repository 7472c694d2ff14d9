#pragma once

#include "klf/dyadic.hpp"
#include "klf/format.hpp"

#include <optional>
#include <vector>

namespace klf {

// Total over all 2^N patterns. Negative patterns are two's-complement negated
// before the regime is read; bits missing past the word end read as zero.
DecodedNumber decode(Bits bits, const PositConfig& cfg);

// Nearest pattern by value; ties to the even pattern, nonzero never rounds to
// zero, finite never rounds to infinity.
Bits encode(const DyadicValue& x, const PositConfig& cfg);

// Exact value of a normal or zero decoded posit; std::nullopt for infinity.
std::optional<DyadicValue> to_dyadic(const DecodedNumber& d);

// Fraction width at exponent e. Throws std::out_of_range outside [min_exponent, max_exponent].
int fraction_bits_at(int e, const PositConfig& cfg);

double dynamic_range_db(const PositConfig& cfg);

struct PositEntry {
  Bits bits = 0;
  NumberClass cls = NumberClass::zero;
  DyadicValue value;  // zero for the zero and infinity entries
};

// All 2^N patterns in pattern order. Requires N <= 16.
std::vector<PositEntry> enumerate(const PositConfig& cfg);

namespace detail {

// Shared by the posit codec and the posit-tapered log codec.
DecodedNumber unpack_tapered(Bits bits, int n, int es);

struct TruncatedPattern {
  Bits bits = 0;
  bool inexact = false;
};

// Positive pattern whose bit string is the truncation of the infinite string
// for (exponent, fraction / 2^fraction_width). Requires min <= exponent < max.
TruncatedPattern pack_tapered(int n, int es, int exponent, const BigInt& fraction,
                              int fraction_width);

inline Bits negate_pattern(Bits bits, int n) {
  const Bits mask = (n >= 32) ? ~Bits{0} : ((Bits{1} << n) - 1);
  return (~bits + 1) & mask;
}

}  // namespace detail

}  // namespace klf
