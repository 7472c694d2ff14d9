#pragma once

#include "klf/dyadic.hpp"
#include "klf/format.hpp"

#include <string>

namespace klf {

// Exact decimal expansion ("0.000244140625", "-4096"). Every dyadic value has one.
std::string to_decimal(const DyadicValue& v);

// Parses [-+]digits[.digits][e[-+]digits]. Dyadic inputs are exact. Otherwise
// the result carries at least 128 significant bits followed by a sticky one
// bit, so it lies strictly between the same rounding boundaries as the true
// value. Throws FormatError on malformed text or non-finite values.
DyadicValue parse_decimal(const std::string& text);

// Round-to-nearest-even conversion of an exact value into any format.
Bits encode_value(const DyadicValue& x, const FormatConfig& format);

// Value text for a pattern: exact decimal for posits, "2^<exponent>" for log
// formats, "inf" / "nan" for specials.
std::string describe_value(Bits bits, const FormatConfig& format);

// Pattern as zero-padded lowercase hex, ceil(N / 4) digits, no prefix.
std::string hex_pattern(Bits bits, const FormatConfig& format);

}  // namespace klf
