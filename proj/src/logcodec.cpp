#include "klf/logcodec.hpp"

#include "klf/errors.hpp"
#include "klf/posit.hpp"

#include <cmath>

namespace klf {

namespace mp = boost::multiprecision;

std::int64_t floor_log2_power(const BigInt& base, int k) {
  // Interval squaring: lo * 2^elo <= base^(2^i) <= hi * 2^ehi, each kept to
  // kKeep significant bits with directed truncation. Falls back to exact
  // powering only when the bounds straddle a power of two.
  constexpr std::int64_t kKeep = 192;
  BigInt lo = base;
  BigInt hi = base;
  std::int64_t elo = 0;
  std::int64_t ehi = 0;
  for (int i = 0; i < k; ++i) {
    lo *= lo;
    hi *= hi;
    elo *= 2;
    ehi *= 2;
    const auto mlo = static_cast<std::int64_t>(mp::msb(lo));
    if (mlo > kKeep) {
      lo >>= (mlo - kKeep);
      elo += mlo - kKeep;
    }
    const auto mhi = static_cast<std::int64_t>(mp::msb(hi));
    if (mhi > kKeep) {
      const auto sh = mhi - kKeep;
      BigInt t = hi >> sh;
      if ((t << sh) != hi) ++t;
      hi = std::move(t);
      ehi += sh;
    }
  }
  const auto a = static_cast<std::int64_t>(mp::msb(lo)) + elo;
  const auto b = static_cast<std::int64_t>(mp::msb(hi)) + ehi;
  if (a == b) return a;
  BigInt x = base;
  for (int i = 0; i < k; ++i) x *= x;
  return static_cast<std::int64_t>(mp::msb(x));
}

namespace {

// RNE(2^alpha * (2^(f / 2^F) - 1)). For f > 0 the value is irrational, so
// t is the unique integer with t - 1/2 < u < t + 1/2, where
// k + 1/2 < u  <=>  (2^(alpha+1) + 2k + 1)^(2^F) < 2^(f + (alpha+1) 2^F).
std::uint64_t p_entry(std::uint64_t f, int frac_width, int alpha) {
  if (f == 0) return 0;
  const std::int64_t target =
      static_cast<std::int64_t>(f) + static_cast<std::int64_t>(alpha + 1) * (std::int64_t{1} << frac_width);
  auto below = [&](std::int64_t k) {
    if (k < 0) return true;
    const BigInt base = (BigInt(1) << (alpha + 1)) + 2 * k + 1;
    return floor_log2_power(base, frac_width) < target;
  };
  const long double u =
      (std::exp2l(static_cast<long double>(f) / std::ldexp(1.0L, frac_width)) - 1.0L) *
      std::ldexp(1.0L, alpha);
  auto t = static_cast<std::int64_t>(std::llroundl(u));
  while (!below(t - 1)) --t;
  while (below(t)) ++t;
  return static_cast<std::uint64_t>(t);
}

// RNE(2^gamma * log2(1 + g / 2^beta)). With X = (2^beta + g)^(2^(gamma+1)),
// floor(2^(gamma+1) q) = msb(X) - beta 2^(gamma+1), and since that product is
// irrational for g > 0 the rounded value is floor((L + 1) / 2).
std::uint64_t q_entry(std::uint64_t g, int beta, int gamma) {
  if (g == 0) return 0;
  const BigInt base = (BigInt(1) << beta) + g;
  const std::int64_t l =
      floor_log2_power(base, gamma + 1) - static_cast<std::int64_t>(beta) * (std::int64_t{1} << (gamma + 1));
  return static_cast<std::uint64_t>((l + 1) / 2);
}

const PositTapered* tapered(const LogConfig& cfg) { return std::get_if<PositTapered>(&cfg.encoding); }

int ieee_bias(const IeeeStyle& e) { return (1 << (e.exp_bits - 1)) - 1; }

// Log value m + f/2^F of a positive normal pattern, as an integer over 2^F.
std::int64_t log_numerator(Bits bits, const LogConfig& cfg) {
  const DecodedNumber d = decode_log(bits, cfg);
  return (static_cast<std::int64_t>(d.exponent) << d.fraction_width) +
         static_cast<std::int64_t>(d.fraction);
}

// Sign of x - 2^(c / 2^k) for x > 0.
int compare_with_power(const DyadicValue& x, std::int64_t c, int k) {
  const std::int64_t scale = std::int64_t{1} << k;
  if (x.significand() == 1) {
    const std::int64_t lhs = x.exponent() * scale;
    return lhs < c ? -1 : (lhs > c ? 1 : 0);
  }
  // x^(2^k) is not a power of two, so its floor(log2) decides the comparison.
  const std::int64_t fl = floor_log2_power(x.significand(), k) + x.exponent() * scale;
  return fl < c ? -1 : 1;
}

}  // namespace

PqTables build_tables(const LogConfig& cfg) {
  validate(cfg);
  const int f = fraction_width(cfg);
  PqTables t;
  t.config = cfg;
  t.p.resize(std::size_t{1} << f);
  for (std::uint64_t i = 0; i < t.p.size(); ++i) t.p[i] = p_entry(i, f, cfg.alpha);
  t.q.resize(std::size_t{1} << cfg.beta);
  for (std::uint64_t i = 0; i < t.q.size(); ++i) t.q[i] = q_entry(i, cfg.beta, cfg.gamma);
  return t;
}

DecodedNumber decode_log(Bits bits, const LogConfig& cfg) {
  const int f = fraction_width(cfg);
  if (const auto* t = tapered(cfg)) {
    DecodedNumber d = detail::unpack_tapered(bits, t->n, t->es);
    if (d.is_normal()) {
      d.fraction <<= (f - d.fraction_width);
      d.fraction_width = f;
    }
    return d;
  }
  const auto& e = std::get<IeeeStyle>(cfg.encoding);
  const Bits exp_mask = (Bits{1} << e.exp_bits) - 1;
  const Bits frac_mask = (Bits{1} << f) - 1;
  const Bits biased = (bits >> f) & exp_mask;
  const Bits frac = bits & frac_mask;
  DecodedNumber d;
  if (biased == 0) return d;  // zero and flushed denormals
  d.negative = ((bits >> (e.exp_bits + f)) & 1) != 0;
  if (biased == exp_mask) {
    if (frac != 0) throw InvalidOperation("NaN pattern in IEEE-style log format");
    d.cls = NumberClass::infinity;
    return d;
  }
  d.cls = NumberClass::normal;
  d.exponent = static_cast<int>(biased) - ieee_bias(e);
  d.fraction = frac;
  d.fraction_width = f;
  return d;
}

Bits encode_log(bool negative, std::int64_t m, const BigInt& fraction_in, int fraction_width,
                const LogConfig& cfg) {
  const FormatConfig format = cfg;
  const int f = klf::fraction_width(cfg);
  BigInt fraction = fraction_in;
  if (fraction >> fraction_width != 0) {
    m += (fraction >> fraction_width).convert_to<std::int64_t>();
    fraction &= (BigInt(1) << fraction_width) - 1;
  }
  const int emax = max_exponent(cfg);
  const int emin = min_exponent(cfg);

  if (const auto* t = tapered(cfg)) {
    if (m >= emax) return max_pattern(format, negative);
    if (m < emin) return min_pattern(format, negative);
    const auto packed =
        detail::pack_tapered(t->n, t->es, static_cast<int>(m), fraction, fraction_width);
    Bits p = packed.bits;
    if (packed.inexact) {
      // Nearest in the log domain: compare 2L against L(p) + L(p + 1) on a common scale.
      const int w = std::max(fraction_width, f);
      const BigInt twice = ((BigInt(m) << fraction_width) + fraction) << (w - fraction_width + 1);
      const BigInt sum = BigInt(log_numerator(p, cfg) + log_numerator(p + 1, cfg)) << (w - f);
      if (sum < twice || (sum == twice && (p & 1))) ++p;
    }
    return negative ? detail::negate_pattern(p, t->n) : p;
  }

  const auto& e = std::get<IeeeStyle>(cfg.encoding);
  BigInt q;
  if (fraction_width > f) {
    const int drop = fraction_width - f;
    q = fraction >> drop;
    const BigInt rem = fraction - (q << drop);
    const BigInt half = BigInt(1) << (drop - 1);
    if (rem > half || (rem == half && (q & 1) != 0)) ++q;
    if (q >> f != 0) {
      ++m;
      q = 0;
    }
  } else {
    q = fraction << (f - fraction_width);
  }
  if (m > emax) return max_pattern(format, negative);
  if (m < emin) return min_pattern(format, negative);
  Bits p = (static_cast<Bits>(m + ieee_bias(e)) << f) | q.convert_to<Bits>();
  if (negative) p |= Bits{1} << (e.exp_bits + f);
  return p;
}

DecodedNumber log_multiply(const DecodedNumber& a, const DecodedNumber& b, const LogConfig& cfg) {
  DecodedNumber r;
  if (a.is_zero() || b.is_zero()) {
    if (a.is_infinity() || b.is_infinity()) throw InvalidOperation("log_multiply: zero * infinity");
    return r;
  }
  r.negative = a.negative != b.negative;
  if (a.is_infinity() || b.is_infinity()) {
    r.cls = NumberClass::infinity;
    return r;
  }
  const int f = fraction_width(cfg);
  const std::int64_t sum = (static_cast<std::int64_t>(a.exponent) << f) + static_cast<std::int64_t>(a.fraction) +
                           (static_cast<std::int64_t>(b.exponent) << f) + static_cast<std::int64_t>(b.fraction);
  r.cls = NumberClass::normal;
  r.exponent = static_cast<int>(sum >> f);
  r.fraction = static_cast<std::uint64_t>(sum & ((std::int64_t{1} << f) - 1));
  r.fraction_width = f;
  return r;
}

DecodedNumber log_divide(const DecodedNumber& a, const DecodedNumber& b, const LogConfig& cfg) {
  DecodedNumber r;
  if (b.is_zero()) {
    if (a.is_zero()) throw InvalidOperation("log_divide: zero / zero");
    r.cls = NumberClass::infinity;
    r.negative = a.negative != b.negative;
    return r;
  }
  if (b.is_infinity()) {
    if (a.is_infinity()) throw InvalidOperation("log_divide: infinity / infinity");
    return r;
  }
  if (a.is_zero()) return r;
  r.negative = a.negative != b.negative;
  if (a.is_infinity()) {
    r.cls = NumberClass::infinity;
    return r;
  }
  const int f = fraction_width(cfg);
  const std::int64_t diff = (static_cast<std::int64_t>(a.exponent) << f) + static_cast<std::int64_t>(a.fraction) -
                            (static_cast<std::int64_t>(b.exponent) << f) - static_cast<std::int64_t>(b.fraction);
  r.cls = NumberClass::normal;
  r.exponent = static_cast<int>(diff >> f);
  r.fraction = static_cast<std::uint64_t>(diff & ((std::int64_t{1} << f) - 1));
  r.fraction_width = f;
  return r;
}

LinearTerm log_to_linear(const DecodedNumber& x, const PqTables& tables) {
  LinearTerm t;
  t.cls = x.cls;
  t.negative = x.negative;
  if (!x.is_normal()) return t;
  t.exponent = x.exponent;
  t.significand = (std::uint64_t{1} << tables.config.alpha) + tables.p.at(x.fraction);
  t.fraction_bits = tables.config.alpha;
  return t;
}

LogFraction linear_to_log_fraction(std::int64_t e, const BigInt& g, int width,
                                   const PqTables& tables) {
  const int beta = tables.config.beta;
  BigInt r;
  if (width > beta) {
    const int drop = width - beta;
    r = g >> drop;
    const BigInt rem = g - (r << drop);
    const BigInt half = BigInt(1) << (drop - 1);
    if (rem > half || (rem == half && (r & 1) != 0)) ++r;
  } else {
    r = g << (beta - width);
  }
  if (r >> beta != 0) {
    ++e;
    r = 0;
  }
  return {e, tables.q.at(r.convert_to<std::size_t>())};
}

Bits linear_to_log(bool negative, std::int64_t e, const BigInt& g, int width,
                   const PqTables& tables) {
  const LogFraction lf = linear_to_log_fraction(e, g, width, tables);
  return encode_log(negative, lf.m, BigInt(lf.fraction), tables.config.gamma, tables.config);
}

Bits encode_log_value(const DyadicValue& x, const LogConfig& cfg) {
  if (x.is_zero()) return 0;
  const FormatConfig format = cfg;
  const bool negative = x.sign() < 0;
  const DyadicValue mag = x.abs();
  const int f = fraction_width(cfg);

  // Estimate log2|x| from the top 64 bits of the significand.
  const auto msb = static_cast<std::int64_t>(mp::msb(mag.significand()));
  const std::int64_t shift = msb > 63 ? msb - 63 : 0;
  const long double top = BigInt(mag.significand() >> shift).convert_to<long double>();
  const long double l = std::log2l(top) + static_cast<long double>(shift + mag.exponent());

  const int w = f + 24;
  const auto scaled = static_cast<std::int64_t>(std::floor(std::ldexp(l, w) + 0.5L));
  const std::int64_t m = scaled >> w;
  const std::int64_t frac = scaled - (m << w);
  Bits p = encode_log(false, m, BigInt(frac), w, cfg);

  const Bits top_pattern = max_pattern(format);
  const Bits bottom_pattern = min_pattern(format);
  const long double denom = std::ldexp(1.0L, f + 1);
  constexpr long double kMargin = 1e-9L;
  // Move p until x lies between the log-domain midpoints to its neighbours.
  for (;;) {
    const std::int64_t lp = log_numerator(p, cfg);
    bool moved = false;
    if (p != top_pattern) {
      const std::int64_t c = lp + log_numerator(p + 1, cfg);
      if (!(l < static_cast<long double>(c) / denom - kMargin)) {
        const int cmp = compare_with_power(mag, c, f + 1);
        if (cmp > 0 || (cmp == 0 && ((p + 1) & 1) == 0)) {
          ++p;
          moved = true;
        }
      }
    }
    if (!moved && p != bottom_pattern) {
      const std::int64_t c = log_numerator(p - 1, cfg) + lp;
      if (!(l > static_cast<long double>(c) / denom + kMargin)) {
        const int cmp = compare_with_power(mag, c, f + 1);
        if (cmp < 0 || (cmp == 0 && ((p - 1) & 1) == 0)) {
          --p;
          moved = true;
        }
      }
    }
    if (!moved) break;
  }
  if (!negative) return p;
  if (const auto* t = tapered(cfg)) return detail::negate_pattern(p, t->n);
  return p | (Bits{1} << (word_bits(cfg) - 1));
}

DyadicValue log_exponent(const DecodedNumber& d) {
  return DyadicValue((BigInt(d.exponent) << d.fraction_width) + d.fraction, -d.fraction_width);
}

double log_to_double(Bits bits, const LogConfig& cfg) {
  const DecodedNumber d = decode_log(bits, cfg);
  if (d.is_zero()) return 0.0;
  if (d.is_infinity()) return d.negative ? -HUGE_VAL : HUGE_VAL;
  const long double l = static_cast<long double>(d.exponent) +
                        std::ldexp(static_cast<long double>(d.fraction), -d.fraction_width);
  const auto v = static_cast<double>(std::exp2l(l));
  return d.negative ? -v : v;
}

}  // namespace klf
