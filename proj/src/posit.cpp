#include "klf/posit.hpp"

#include <cmath>
#include <stdexcept>

namespace klf {

namespace mp = boost::multiprecision;

namespace detail {

DecodedNumber unpack_tapered(Bits bits, int n, int es) {
  const Bits mask = (Bits{1} << n) - 1;
  const Bits sign_bit = Bits{1} << (n - 1);
  bits &= mask;
  DecodedNumber d;
  if (bits == 0) return d;
  if (bits == sign_bit) {
    d.cls = NumberClass::infinity;
    return d;
  }
  d.cls = NumberClass::normal;
  d.negative = (bits & sign_bit) != 0;
  if (d.negative) bits = negate_pattern(bits, n);

  int pos = n - 2;
  const Bits first = (bits >> pos) & 1;
  int run = 0;
  while (pos >= 0 && ((bits >> pos) & 1) == first) {
    ++run;
    --pos;
  }
  const int regime = first ? run - 1 : -run;
  int remaining = pos;  // bits left after the terminator (pos is the terminator's index)
  if (remaining < 0) remaining = 0;

  int exp_field = 0;
  for (int i = 0; i < es; ++i) {
    exp_field <<= 1;
    if (remaining > 0) {
      exp_field |= static_cast<int>((bits >> (remaining - 1)) & 1);
      --remaining;
    }
  }
  d.exponent = regime * (1 << es) + exp_field;
  d.fraction_width = remaining;
  d.fraction = bits & ((Bits{1} << remaining) - 1);
  return d;
}

TruncatedPattern pack_tapered(int n, int es, int exponent, const BigInt& fraction,
                              int fraction_width) {
  const int step = 1 << es;
  const int regime = exponent >= 0 ? exponent / step : -((-exponent + step - 1) / step);
  const int exp_field = exponent - regime * step;

  TruncatedPattern out;
  Bits body = 0;
  int avail = n - 1;
  auto put = [&](Bits bit) {
    body = (body << 1) | bit;
    --avail;
  };
  if (regime >= 0) {
    for (int i = 0; i <= regime && avail > 0; ++i) put(1);
    if (avail > 0) put(0);
  } else {
    for (int i = 0; i < -regime && avail > 0; ++i) put(0);
    if (avail > 0) put(1);
  }
  for (int i = es - 1; i >= 0; --i) {
    const Bits bit = (exp_field >> i) & 1;
    if (avail > 0) {
      put(bit);
    } else if (bit) {
      out.inexact = true;
    }
  }
  if (fraction_width >= avail) {
    const int drop = fraction_width - avail;
    const BigInt top = fraction >> drop;
    if (drop > 0 && (top << drop) != fraction) out.inexact = true;
    body = (body << avail) | top.convert_to<Bits>();
  } else {
    body = (body << avail) | (fraction << (avail - fraction_width)).convert_to<Bits>();
  }
  out.bits = body;
  return out;
}

}  // namespace detail

DecodedNumber decode(Bits bits, const PositConfig& cfg) {
  return detail::unpack_tapered(bits, cfg.n, cfg.es);
}

std::optional<DyadicValue> to_dyadic(const DecodedNumber& d) {
  switch (d.cls) {
    case NumberClass::zero:
      return DyadicValue{};
    case NumberClass::infinity:
      return std::nullopt;
    case NumberClass::normal:
      break;
  }
  BigInt sig = (BigInt(1) << d.fraction_width) + d.fraction;
  if (d.negative) sig = -sig;
  return DyadicValue(std::move(sig), static_cast<std::int64_t>(d.exponent) - d.fraction_width);
}

Bits encode(const DyadicValue& x, const PositConfig& cfg) {
  if (x.is_zero()) return 0;
  const FormatConfig format = cfg;
  const bool negative = x.sign() < 0;
  const DyadicValue mag = x.abs();
  const auto lead = mag.leading_exponent();
  if (lead >= max_exponent(cfg)) return max_pattern(format, negative);
  if (lead < min_exponent(cfg)) return min_pattern(format, negative);

  const auto width = static_cast<int>(mp::msb(mag.significand()));
  const BigInt fraction = mag.significand() - (BigInt(1) << width);
  const auto packed =
      detail::pack_tapered(cfg.n, cfg.es, static_cast<int>(lead), fraction, width);
  Bits p = packed.bits;
  if (packed.inexact) {
    // Truncation gave the pattern just below |x|; pick the nearer neighbour by value.
    const DyadicValue lo = *to_dyadic(decode(p, cfg));
    const DyadicValue hi = *to_dyadic(decode(p + 1, cfg));
    const DyadicValue twice = mag.scaled(1);
    const DyadicValue sum = lo + hi;
    if (sum < twice || (twice == sum && (p & 1))) ++p;
  }
  return negative ? detail::negate_pattern(p, cfg.n) : p;
}

int fraction_bits_at(int e, const PositConfig& cfg) {
  if (e < min_exponent(cfg) || e > max_exponent(cfg)) {
    throw std::out_of_range("fraction_bits_at: exponent outside the format's range");
  }
  const int step = 1 << cfg.es;
  const int regime = e >= 0 ? e / step : -((-e + step - 1) / step);
  int regime_len = regime >= 0 ? regime + 2 : -regime + 1;
  if (regime_len > cfg.n - 1) regime_len = cfg.n - 1;
  const int bits = cfg.n - 1 - regime_len - cfg.es;
  return bits > 0 ? bits : 0;
}

double dynamic_range_db(const PositConfig& cfg) { return dynamic_range_db(FormatConfig{cfg}); }

std::vector<PositEntry> enumerate(const PositConfig& cfg) {
  validate(cfg);
  const Bits count = Bits{1} << cfg.n;
  std::vector<PositEntry> out;
  out.reserve(count);
  for (Bits p = 0; p < count; ++p) {
    const DecodedNumber d = decode(p, cfg);
    PositEntry e;
    e.bits = p;
    e.cls = d.cls;
    if (d.is_normal()) e.value = *to_dyadic(d);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace klf
