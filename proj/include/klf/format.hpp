#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace klf {

// An encoded word, right-aligned. All supported formats are at most 16 bits.
using Bits = std::uint32_t;

inline constexpr int kMaxWordBits = 16;

/// (N, s) posit: N word bits, exponent scale s (Golomb-Rice divisor 2^s).
struct PositConfig {
  int n = 8;
  int es = 1;

  friend bool operator==(const PositConfig&, const PositConfig&) = default;
};

/// Log payload laid out exactly like an (N, s) posit.
struct PositTapered {
  int n = 8;
  int es = 1;

  friend bool operator==(const PositTapered&, const PositTapered&) = default;
};

/// Sign bit, biased exponent, fixed fraction; denormals flush to zero.
struct IeeeStyle {
  int exp_bits = 5;
  int frac_bits = 10;

  friend bool operator==(const IeeeStyle&, const IeeeStyle&) = default;
};

/// Base-2 log format with its p (log->linear) and q (linear->log) table widths.
///
/// alpha is the p-table output width, beta the q-table input width and gamma
/// the q-table output width. Valid configurations satisfy
/// alpha >= F + 1, beta >= alpha and F <= gamma <= F + 3, where F is the
/// payload fraction width.
struct LogConfig {
  std::variant<PositTapered, IeeeStyle> encoding;
  int alpha = 5;
  int beta = 5;
  int gamma = 7;

  friend bool operator==(const LogConfig&, const LogConfig&) = default;
};

using FormatConfig = std::variant<PositConfig, LogConfig>;

enum class NumberClass { zero, infinity, normal };

/// Unpacked word. For posits the value is sign * 2^exponent * (1 + fraction / 2^width);
/// for log formats it is sign * 2^(exponent + fraction / 2^width).
struct DecodedNumber {
  NumberClass cls = NumberClass::zero;
  bool negative = false;
  int exponent = 0;
  std::uint64_t fraction = 0;
  int fraction_width = 0;

  bool is_zero() const { return cls == NumberClass::zero; }
  bool is_infinity() const { return cls == NumberClass::infinity; }
  bool is_normal() const { return cls == NumberClass::normal; }

  friend bool operator==(const DecodedNumber&, const DecodedNumber&) = default;
};

// Throws FormatError when a constraint is violated; the message names it.
void validate(const PositConfig& cfg);
void validate(const LogConfig& cfg);
void validate(const FormatConfig& cfg);

int word_bits(const PositConfig& cfg);
int word_bits(const LogConfig& cfg);
int word_bits(const FormatConfig& cfg);

// Payload fraction width F: N - 3 - s for tapered encodings, frac_bits for IEEE-style.
int fraction_width(const LogConfig& cfg);

// Exponent of f_max and f_min. For IEEE-style logs these are the largest and
// smallest normal integer parts m.
int max_exponent(const PositConfig& cfg);
int min_exponent(const PositConfig& cfg);
int max_exponent(const LogConfig& cfg);
int min_exponent(const LogConfig& cfg);
int max_exponent(const FormatConfig& cfg);
int min_exponent(const FormatConfig& cfg);

inline bool is_log(const FormatConfig& cfg) { return std::holds_alternative<LogConfig>(cfg); }

// Largest / smallest positive finite patterns, optionally negated.
Bits max_pattern(const FormatConfig& cfg, bool negative = false);
Bits min_pattern(const FormatConfig& cfg, bool negative = false);
Bits zero_pattern(const FormatConfig& cfg);

// Descriptor grammar: posit<N>es<s> | log<N>es<s>-<a>-<b>-<g> | logieee<e>e<f>-<a>-<b>-<g>
FormatConfig parse_format(const std::string& descriptor);
std::string to_string(const FormatConfig& cfg);

// 20 log10(f_max / f_min), rounded to one decimal place.
double dynamic_range_db(const FormatConfig& cfg);

// Fraction bits at the point of maximum precision.
int max_fraction_bits(const FormatConfig& cfg);

}  // namespace klf
