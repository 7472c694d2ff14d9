#include "klf/kulisch.hpp"

#include "klf/errors.hpp"
#include "klf/logcodec.hpp"
#include "klf/posit.hpp"

#include <bit>
#include <stdexcept>

namespace klf {

namespace mp = boost::multiprecision;

namespace {

using u128 = unsigned __int128;

std::size_t limb_count(const KulischConfig& cfg) {
  // Two's complement headroom: any in-range register plus any accepted term fits.
  return static_cast<std::size_t>(cfg.width() + 3 + 63) / 64;
}

}  // namespace

KulischConfig kulisch_config_for(const FormatConfig& format) {
  return {max_exponent(format), 2 * min_exponent(format)};
}

KulischAccumulator::KulischAccumulator(KulischConfig cfg) : cfg_(cfg), limbs_(limb_count(cfg), 0) {
  if (cfg.width() < 2) throw std::invalid_argument("Kulisch register narrower than 2 bits");
}

void KulischAccumulator::reset() {
  std::fill(limbs_.begin(), limbs_.end(), 0);
  overflow_ = false;
  truncated_ = false;
}

bool KulischAccumulator::is_negative() const { return (limbs_.back() >> 63) != 0; }

bool KulischAccumulator::is_zero() const {
  for (auto l : limbs_) {
    if (l != 0) return false;
  }
  return true;
}

void KulischAccumulator::accumulate(const LinearTerm& term) {
  switch (term.cls) {
    case NumberClass::zero:
      return;
    case NumberClass::infinity:
      saturate(term.negative);
      return;
    case NumberClass::normal:
      accumulate(term.negative, term.exponent, term.significand, term.fraction_bits);
      return;
  }
}

void KulischAccumulator::accumulate(bool negative, std::int64_t exponent, std::uint64_t significand,
                                    int fraction_bits) {
  if (significand == 0) return;
  std::int64_t shift = exponent - fraction_bits - cfg_.lsb_weight;
  if (shift < 0) {
    const std::int64_t drop = -shift;
    if (drop >= 64) {
      truncated_ = true;
      return;
    }
    if ((significand & ((std::uint64_t{1} << drop) - 1)) != 0) truncated_ = true;
    significand >>= drop;
    shift = 0;
    if (significand == 0) return;
  }
  const std::int64_t top = static_cast<std::int64_t>(std::bit_width(significand)) - 1 + shift;
  if (top > cfg_.width()) {
    // |term| >= 2^(W+1): no in-range register can bring the sum back.
    saturate(negative);
    return;
  }
  add_magnitude_at(significand, static_cast<int>(shift), negative);
  clamp_to_range();
}

void KulischAccumulator::add_magnitude_at(std::uint64_t magnitude, int offset, bool negative) {
  const std::size_t index = static_cast<std::size_t>(offset) / 64;
  const int bit = offset % 64;
  const std::uint64_t lo = magnitude << bit;
  const std::uint64_t hi = bit == 0 ? 0 : magnitude >> (64 - bit);
  if (!negative) {
    u128 carry = 0;
    for (std::size_t i = index; i < limbs_.size(); ++i) {
      std::uint64_t add = 0;
      if (i == index) add = lo;
      else if (i == index + 1) add = hi;
      else if (carry == 0) break;
      const u128 s = static_cast<u128>(limbs_[i]) + add + carry;
      limbs_[i] = static_cast<std::uint64_t>(s);
      carry = s >> 64;
    }
  } else {
    std::uint64_t borrow = 0;
    for (std::size_t i = index; i < limbs_.size(); ++i) {
      std::uint64_t sub = 0;
      if (i == index) sub = lo;
      else if (i == index + 1) sub = hi;
      else if (borrow == 0) break;
      const std::uint64_t before = limbs_[i];
      const u128 need = static_cast<u128>(sub) + borrow;
      limbs_[i] = before - static_cast<std::uint64_t>(sub) - borrow;
      borrow = static_cast<u128>(before) < need ? 1 : 0;
    }
  }
}

void KulischAccumulator::saturate(bool negative) {
  // 2^(W-1) - 1 or -2^(W-1): bits below W-1 are !negative, the rest negative.
  const int edge = cfg_.width() - 1;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    const int lo = static_cast<int>(i) * 64;
    std::uint64_t below = 0;
    if (edge >= lo + 64) below = ~std::uint64_t{0};
    else if (edge > lo) below = (std::uint64_t{1} << (edge - lo)) - 1;
    limbs_[i] = negative ? ~below : below;
  }
  overflow_ = true;
}

void KulischAccumulator::clamp_to_range() {
  // In range iff every bit at position >= width - 1 equals the sign.
  const bool negative = is_negative();
  const std::uint64_t fill = negative ? ~std::uint64_t{0} : 0;
  const int first = cfg_.width() - 1;
  const std::size_t index = static_cast<std::size_t>(first) / 64;
  const int bit = first % 64;
  const std::uint64_t mask = ~std::uint64_t{0} << bit;
  bool ok = (limbs_[index] & mask) == (fill & mask);
  for (std::size_t i = index + 1; ok && i < limbs_.size(); ++i) ok = limbs_[i] == fill;
  if (!ok) saturate(negative);
}

void KulischAccumulator::merge(const KulischAccumulator& other) {
  if (!(other.cfg_ == cfg_)) throw std::invalid_argument("merge: accumulator configs differ");
  u128 carry = 0;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    const u128 s = static_cast<u128>(limbs_[i]) + other.limbs_[i] + carry;
    limbs_[i] = static_cast<std::uint64_t>(s);
    carry = s >> 64;
  }
  overflow_ = overflow_ || other.overflow_;
  truncated_ = truncated_ || other.truncated_;
  clamp_to_range();
}

BigInt KulischAccumulator::magnitude() const {
  std::vector<std::uint64_t> mag = limbs_;
  if (is_negative()) {
    u128 carry = 1;
    for (auto& l : mag) {
      const u128 s = static_cast<u128>(~l) + carry;
      l = static_cast<std::uint64_t>(s);
      carry = s >> 64;
    }
  }
  BigInt r = 0;
  for (auto it = mag.rbegin(); it != mag.rend(); ++it) {
    r <<= 64;
    r |= *it;
  }
  return r;
}

DyadicValue KulischAccumulator::value() const {
  BigInt m = magnitude();
  if (is_negative()) m = -m;
  return DyadicValue(std::move(m), cfg_.lsb_weight);
}

void KulischAccumulator::divide(std::uint64_t d) {
  if (d == 0) throw std::invalid_argument("divide: divisor must be positive");
  if (overflow_) throw std::invalid_argument("divide: accumulator has overflowed");
  const bool negative = is_negative();
  std::vector<std::uint64_t> mag = limbs_;
  if (negative) {
    u128 carry = 1;
    for (auto& l : mag) {
      const u128 s = static_cast<u128>(~l) + carry;
      l = static_cast<std::uint64_t>(s);
      carry = s >> 64;
    }
  }
  u128 rem = 0;
  for (auto it = mag.rbegin(); it != mag.rend(); ++it) {
    const u128 cur = (rem << 64) | *it;
    *it = static_cast<std::uint64_t>(cur / d);
    rem = cur % d;
  }
  const bool round_up = 2 * rem > d || (2 * rem == d && (mag[0] & 1) != 0);
  if (round_up) {
    for (auto& l : mag) {
      if (++l != 0) break;
    }
  }
  std::fill(limbs_.begin(), limbs_.end(), 0);
  limbs_ = mag;
  if (negative) {
    u128 carry = 1;
    for (auto& l : limbs_) {
      const u128 s = static_cast<u128>(~l) + carry;
      l = static_cast<std::uint64_t>(s);
      carry = s >> 64;
    }
  }
}

KulischAccumulator merge(const KulischAccumulator& a, const KulischAccumulator& b) {
  KulischAccumulator r = a;
  r.merge(b);
  return r;
}

KulischAccumulator divide_by_uint(const KulischAccumulator& acc, std::uint64_t d) {
  KulischAccumulator r = acc;
  r.divide(d);
  return r;
}

Bits to_encoded(const KulischAccumulator& acc, const FormatConfig& format, int bias_n,
                const PqTables* tables) {
  if (acc.overflow()) {
    throw SaturationError(acc.is_negative() ? "accumulator saturated (negative)"
                                            : "accumulator saturated (positive)",
                          acc.is_negative());
  }
  if (acc.is_zero()) return zero_pattern(format);
  const bool negative = acc.is_negative();
  BigInt mag = acc.magnitude();
  const std::int64_t scale = static_cast<std::int64_t>(acc.config().lsb_weight) + bias_n;

  if (const auto* posit = std::get_if<PositConfig>(&format)) {
    return encode(DyadicValue(negative ? BigInt(-mag) : mag, scale), *posit);
  }
  if (tables == nullptr) throw std::invalid_argument("to_encoded: log format needs its tables");
  const auto lead = static_cast<int>(mp::msb(mag));
  mag -= BigInt(1) << lead;
  return linear_to_log(negative, lead + scale, mag, lead, *tables);
}

}  // namespace klf
