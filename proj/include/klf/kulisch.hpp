#pragma once

#include "klf/dyadic.hpp"
#include "klf/format.hpp"

#include <cstdint>
#include <vector>

namespace klf {

struct PqTables;

/// Register geometry: unit bit at 2^msb_weight, lowest bit at 2^lsb_weight,
/// plus a sign bit. For a format this is msb = e_max, lsb = 2 * e_min, which
/// covers +-[f_min^2, f_max].
struct KulischConfig {
  int msb_weight = 0;
  int lsb_weight = 0;

  int width() const { return msb_weight - lsb_weight + 2; }

  friend bool operator==(const KulischConfig&, const KulischConfig&) = default;
};

KulischConfig kulisch_config_for(const FormatConfig& format);

/// A value to be shifted into the accumulator:
/// sign * significand * 2^(exponent - fraction_bits).
struct LinearTerm {
  NumberClass cls = NumberClass::zero;
  bool negative = false;
  std::int64_t exponent = 0;
  std::uint64_t significand = 0;
  int fraction_bits = 0;
};

inline std::int64_t bias_input(std::int64_t m, int bias_m) { return m + bias_m; }

/// Wide two's-complement fixed-point register.
///
/// Bits of a term below lsb_weight are dropped from its magnitude before the
/// sign is applied (the truncated flag records it). A result outside the
/// register saturates to the extreme of that sign and sets the overflow flag;
/// both flags are sticky.
class KulischAccumulator {
 public:
  explicit KulischAccumulator(KulischConfig cfg);

  const KulischConfig& config() const { return cfg_; }

  void accumulate(const LinearTerm& term);
  void accumulate(bool negative, std::int64_t exponent, std::uint64_t significand,
                  int fraction_bits);
  void merge(const KulischAccumulator& other);
  // Register <- RNE(register / d). Throws std::invalid_argument for d == 0 or
  // when the overflow flag is set.
  void divide(std::uint64_t d);
  void reset();

  bool overflow() const { return overflow_; }
  bool truncated() const { return truncated_; }
  bool is_zero() const;
  bool is_negative() const;

  // Exact register contents: register * 2^lsb_weight.
  DyadicValue value() const;
  // |register| as an integer (units of 2^lsb_weight).
  BigInt magnitude() const;

  friend bool operator==(const KulischAccumulator&, const KulischAccumulator&) = default;

 private:
  void add_magnitude_at(std::uint64_t magnitude, int offset, bool negative);
  void saturate(bool negative);
  void clamp_to_range();

  KulischConfig cfg_;
  std::vector<std::uint64_t> limbs_;  // little-endian two's complement, with headroom
  bool overflow_ = false;
  bool truncated_ = false;
};

KulischAccumulator merge(const KulischAccumulator& a, const KulischAccumulator& b);
KulischAccumulator divide_by_uint(const KulischAccumulator& acc, std::uint64_t d);

// Single rounding of the register into the output format after scaling by
// 2^bias_n. Log formats need their tables. Throws SaturationError if the
// overflow flag is set.
Bits to_encoded(const KulischAccumulator& acc, const FormatConfig& format, int bias_n = 0,
                const PqTables* tables = nullptr);

}  // namespace klf
