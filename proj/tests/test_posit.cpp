#include "klf/errors.hpp"
#include "klf/format.hpp"
#include "klf/oracle.hpp"
#include "klf/posit.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace klf;

namespace {

// Textbook decoding: useed^k * 2^e * (1 + f), computed in long double.
long double reference_value(Bits bits, int n, int es) {
  const Bits mask = (Bits{1} << n) - 1;
  bits &= mask;
  if (bits == 0) return 0.0L;
  if (bits == Bits{1} << (n - 1)) return INFINITY;
  const bool negative = (bits >> (n - 1)) & 1;
  if (negative) bits = (~bits + 1) & mask;
  int i = n - 2;
  const int first = (bits >> i) & 1;
  int run = 0;
  while (i >= 0 && static_cast<int>((bits >> i) & 1) == first) {
    ++run;
    --i;
  }
  --i;  // terminator
  const int k = first ? run - 1 : -run;
  int e = 0;
  for (int j = 0; j < es; ++j, --i) e = 2 * e + (i >= 0 ? static_cast<int>((bits >> i) & 1) : 0);
  long double frac = 1.0L;
  long double w = 0.5L;
  for (; i >= 0; --i, w /= 2) frac += ((bits >> i) & 1) * w;
  const long double v = std::ldexp(frac, k * (1 << es) + e);
  return negative ? -v : v;
}

}  // namespace

TEST_CASE("format parameters") {
  CHECK(max_exponent(PositConfig{8, 1}) == 12);
  CHECK(min_exponent(PositConfig{8, 1}) == -12);
  CHECK(max_exponent(PositConfig{16, 1}) == 28);
  CHECK(max_fraction_bits(PositConfig{8, 0}) == 5);
  CHECK(max_fraction_bits(PositConfig{12, 1}) == 8);
  CHECK(dynamic_range_db(PositConfig{8, 2}) == doctest::Approx(289.0));
  CHECK(dynamic_range_db(PositConfig{16, 1}) == doctest::Approx(337.2));
  CHECK_THROWS_AS(validate(PositConfig{2, 0}), FormatError);
  CHECK_THROWS_AS(validate(PositConfig{8, 6}), FormatError);
  CHECK_THROWS_AS(validate(PositConfig{17, 1}), FormatError);
}

TEST_CASE("descriptor grammar") {
  CHECK(std::get<PositConfig>(parse_format("posit8es1")) == PositConfig{8, 1});
  const auto log = std::get<LogConfig>(parse_format("log8es1-5-5-7"));
  CHECK(std::get<PositTapered>(log.encoding) == PositTapered{8, 1});
  CHECK(log.alpha == 5);
  CHECK(log.gamma == 7);
  const auto ieee = std::get<LogConfig>(parse_format("logieee5e10-11-11-10"));
  CHECK(std::get<IeeeStyle>(ieee.encoding) == IeeeStyle{5, 10});
  for (const char* d : {"posit16es1", "log8es1-5-5-7", "logieee5e10-11-11-10", "log12es1-9-9-10"}) {
    CHECK(to_string(parse_format(d)) == d);
  }
  CHECK_THROWS_AS(parse_format("posit8"), FormatError);
  CHECK_THROWS_AS(parse_format("float32"), FormatError);
  CHECK_THROWS_WITH_AS(parse_format("log8es1-4-5-7"), doctest::Contains("alpha"), FormatError);
  CHECK_THROWS_WITH_AS(parse_format("log8es1-5-4-7"), doctest::Contains("beta"), FormatError);
  CHECK_THROWS_WITH_AS(parse_format("log8es1-5-5-8"), doctest::Contains("gamma"), FormatError);
  CHECK_THROWS_WITH_AS(parse_format("log8es1-5-5-3"), doctest::Contains("gamma"), FormatError);
}

TEST_CASE("decode matches the textbook formula") {
  for (const PositConfig cfg : {PositConfig{5, 0}, PositConfig{7, 1}, PositConfig{8, 0},
                                PositConfig{8, 1}, PositConfig{8, 2}, PositConfig{9, 1},
                                PositConfig{12, 1}, PositConfig{16, 1}, PositConfig{16, 3}}) {
    for (Bits p = 0; p < (Bits{1} << cfg.n); ++p) {
      const DecodedNumber d = decode(p, cfg);
      const long double ref = reference_value(p, cfg.n, cfg.es);
      if (std::isinf(ref)) {
        CHECK(d.is_infinity());
        CHECK(!to_dyadic(d).has_value());
        continue;
      }
      REQUIRE(to_dyadic(d).has_value());
      CHECK(static_cast<long double>(to_dyadic(d)->to_double()) == ref);
    }
  }
}

TEST_CASE("known posit(8,1) patterns") {
  const PositConfig cfg{8, 1};
  CHECK(decode(0x40, cfg) == DecodedNumber{NumberClass::normal, false, 0, 0, 4});
  CHECK(*to_dyadic(decode(0x7f, cfg)) == DyadicValue::from_int(4096));
  CHECK(*to_dyadic(decode(0x01, cfg)) == DyadicValue::pow2(-12));
  CHECK(*to_dyadic(decode(0xff, cfg)) == -DyadicValue::pow2(-12));
  CHECK(decode(0x00, cfg).is_zero());
  CHECK(decode(0x80, cfg).is_infinity());
  // Regime fills the word: the exponent bit is cut off and reads as zero.
  CHECK(*to_dyadic(decode(0x7e, cfg)) == DyadicValue::from_int(1024));
  CHECK(fraction_bits_at(0, cfg) == 4);
  CHECK(fraction_bits_at(12, cfg) == 0);
  CHECK_THROWS_AS(fraction_bits_at(13, cfg), std::out_of_range);
}

TEST_CASE("encode rounds to nearest with ties to even") {
  const PositConfig cfg{8, 1};
  CHECK(encode(DyadicValue::from_int(1), cfg) == 0x40);
  CHECK(encode(DyadicValue(), cfg) == 0x00);
  CHECK(encode(DyadicValue::from_int(1000000000), cfg) == 0x7f);
  CHECK(encode(-DyadicValue::from_int(1000000000), cfg) == 0x81);
  CHECK(encode(DyadicValue::pow2(-100), cfg) == 0x01);
  CHECK(encode(DyadicValue(BigInt(33), -5), cfg) == 0x40);
  CHECK(encode(DyadicValue(BigInt(35), -5), cfg) == 0x42);
  // Between 1024 and 4096 the midpoint 2560 ties; 0x7e is even.
  CHECK(encode(DyadicValue::from_int(2560), cfg) == 0x7e);
  CHECK(encode(DyadicValue::from_int(2561), cfg) == 0x7f);
}

TEST_CASE("encode agrees with the oracle on random values") {
  std::mt19937_64 rng(11);
  for (const PositConfig cfg : {PositConfig{7, 1}, PositConfig{8, 0}, PositConfig{8, 2},
                                PositConfig{9, 1}, PositConfig{16, 1}}) {
    const auto table = oracle::value_table(cfg);
    std::uniform_int_distribution<std::int64_t> sig(-(std::int64_t{1} << 30), std::int64_t{1} << 30);
    std::uniform_int_distribution<int> exp(-max_exponent(cfg) - 40, max_exponent(cfg) + 10);
    for (int i = 0; i < 4000; ++i) {
      const DyadicValue x(BigInt(sig(rng)), exp(rng));
      CHECK(encode(x, cfg) == table->round(x));
    }
    // Every midpoint between neighbours, plus one ulp either side.
    const auto& v = table->values();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      if (v[i].is_zero() || v[i + 1].is_zero()) continue;  // nonzero never rounds to zero
      const DyadicValue mid = (v[i] + v[i + 1]).scaled(-1);
      const DyadicValue eps = DyadicValue::pow2(mid.exponent() - 60);
      CHECK(encode(mid, cfg) == table->round(mid));
      CHECK(encode(mid - eps, cfg) == table->patterns()[i]);
      CHECK(encode(mid + eps, cfg) == table->patterns()[i + 1]);
    }
  }
}

TEST_CASE("enumeration covers every pattern") {
  const auto all = enumerate(PositConfig{8, 1});
  REQUIRE(all.size() == 256);
  CHECK(all[0x80].cls == NumberClass::infinity);
  CHECK(all[0x40].value == DyadicValue::from_int(1));
  int finite = 0;
  for (const auto& e : all) finite += e.cls == NumberClass::normal;
  CHECK(finite == 254);
}

TEST_CASE("codec round-trip and ordering, 16-bit") {
  const PositConfig cfg{16, 1};
  std::optional<DyadicValue> prev;
  for (Bits i = 1; i < 65536; ++i) {
    const Bits p = (0x8000 + i) & 0xffff;
    const DyadicValue v = *to_dyadic(decode(p, cfg));
    CHECK(encode(v, cfg) == p);
    if (prev) CHECK(*prev < v);
    prev = v;
  }
}
