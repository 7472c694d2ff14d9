#include "klf/errors.hpp"
#include "klf/kulisch.hpp"
#include "klf/mac.hpp"
#include "klf/oracle.hpp"
#include "klf/posit.hpp"

#include <doctest.h>

#include <random>

using namespace klf;

TEST_CASE("register geometry") {
  CHECK(kulisch_config_for(PositConfig{8, 1}).width() == 38);
  CHECK(kulisch_config_for(PositConfig{16, 1}).width() == 86);
  CHECK(kulisch_config_for(PositConfig{8, 0}).width() == 20);
  CHECK(kulisch_config_for(parse_format("log8es1-5-5-7")).width() == 38);
  const KulischConfig k = kulisch_config_for(PositConfig{8, 1});
  CHECK(k.msb_weight == 12);
  CHECK(k.lsb_weight == -24);
}

TEST_CASE("accumulation is exact") {
  const KulischConfig k = kulisch_config_for(PositConfig{16, 1});
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> sig(1, (std::uint64_t{1} << 26) - 1);
  std::uniform_int_distribution<int> exp(-30, 20);
  for (int t = 0; t < 200; ++t) {
    KulischAccumulator acc(k);
    DyadicValue sum;
    for (int i = 0; i < 64; ++i) {
      const bool neg = rng() & 1;
      const std::uint64_t s = sig(rng);
      const int e = exp(rng);
      acc.accumulate(neg, e, s, 26);
      const DyadicValue term(BigInt(s), e - 26);
      sum += neg ? -term : term;
    }
    REQUIRE(!acc.truncated());
    REQUIRE(!acc.overflow());
    CHECK(acc.value() == sum);
    CHECK(acc.is_negative() == (sum.sign() < 0));
  }
}

TEST_CASE("bits below the register are dropped and flagged") {
  const KulischConfig k = kulisch_config_for(PositConfig{8, 1});
  KulischAccumulator acc(k);
  acc.accumulate(false, -24, 1, 0);
  CHECK(!acc.truncated());
  acc.accumulate(false, -24, 3, 1);  // 1.5 units
  CHECK(acc.truncated());
  CHECK(acc.value() == DyadicValue(BigInt(2), -24));
  acc.accumulate(true, -90, 1, 0);
  CHECK(acc.value() == DyadicValue(BigInt(2), -24));
  acc.reset();
  CHECK(acc.is_zero());
  CHECK(!acc.truncated());
}

TEST_CASE("overflow saturates and is sticky") {
  const EngineConfig engine = make_engine(PositConfig{8, 1});
  KulischAccumulator acc(engine.kulisch);
  for (int i = 0; i < 4; ++i) acc.accumulate(ema_product(0x7f, 0x7f, engine));
  CHECK(acc.overflow());
  CHECK(!acc.is_negative());
  acc.accumulate(ema_product(0xc0, 0x40, engine));  // back inside the range, flag stays
  CHECK(acc.overflow());
  CHECK(!acc.is_negative());
  try {
    (void)to_encoded(acc, engine);
    FAIL("expected SaturationError");
  } catch (const SaturationError& e) {
    CHECK(!e.negative());
  }
  KulischAccumulator neg(engine.kulisch);
  neg.accumulate(ema_product(0x80, 0x40, engine));  // infinity saturates
  CHECK(neg.overflow());
}

TEST_CASE("adding x then -x restores the register") {
  const EngineConfig engine = make_engine(PositConfig{8, 1});
  KulischAccumulator acc(engine.kulisch);
  acc.accumulate(ema_product(0x48, 0x33, engine));
  const KulischAccumulator before = acc;
  for (Bits p : {Bits{0x01}, Bits{0x7f}, Bits{0x45}, Bits{0x9c}}) {
    acc.accumulate(ema_product(p, 0x01, engine));
    acc.accumulate(ema_product(p, 0xff, engine));
  }
  CHECK(acc.value() == before.value());
}

TEST_CASE("merge equals accumulating everything in one register") {
  const EngineConfig engine = make_engine(PositConfig{8, 1});
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<Bits> pick(0, 255);
  KulischAccumulator all(engine.kulisch);
  KulischAccumulator left(engine.kulisch);
  KulischAccumulator right(engine.kulisch);
  for (int i = 0; i < 300; ++i) {
    Bits a = pick(rng);
    Bits b = pick(rng);
    if (a == 0x80 || b == 0x80) continue;
    const LinearTerm t = ema_product(a, b, engine);
    all.accumulate(t);
    (i % 2 ? left : right).accumulate(t);
  }
  CHECK(merge(left, right) == all);
  KulischAccumulator other(kulisch_config_for(PositConfig{16, 1}));
  CHECK_THROWS_AS(left.merge(other), std::invalid_argument);
}

TEST_CASE("division rounds to nearest even") {
  const KulischConfig k = kulisch_config_for(PositConfig{8, 1});
  const auto units = [&](std::int64_t n) {
    KulischAccumulator acc(k);
    acc.accumulate(n < 0, -24, static_cast<std::uint64_t>(n < 0 ? -n : n), 0);
    return acc;
  };
  CHECK(divide_by_uint(units(5), 2).value() == DyadicValue(BigInt(2), -24));
  CHECK(divide_by_uint(units(7), 2).value() == DyadicValue(BigInt(4), -24));
  CHECK(divide_by_uint(units(-5), 2).value() == DyadicValue(BigInt(-2), -24));
  CHECK(divide_by_uint(units(-7), 2).value() == DyadicValue(BigInt(-4), -24));
  CHECK(divide_by_uint(units(10), 3).value() == DyadicValue(BigInt(3), -24));
  CHECK(divide_by_uint(units(11), 3).value() == DyadicValue(BigInt(4), -24));
  CHECK_THROWS_AS(divide_by_uint(units(1), 0), std::invalid_argument);
}

TEST_CASE("single conversion with output bias") {
  const FormatConfig format = PositConfig{8, 1};
  KulischAccumulator acc(kulisch_config_for(format));
  acc.accumulate(false, 4, 1, 0);  // 16.0
  CHECK(to_encoded(acc, format) == encode(DyadicValue::from_int(16), PositConfig{8, 1}));
  CHECK(to_encoded(acc, format, -4) == 0x40);
  KulischAccumulator zero(kulisch_config_for(format));
  CHECK(to_encoded(zero, format) == 0x00);
  CHECK_THROWS_AS(to_encoded(acc, parse_format("log8es1-5-5-7")), std::invalid_argument);
}

TEST_CASE("single-element identity for every finite posit") {
  for (const PositConfig cfg : {PositConfig{8, 1}, PositConfig{8, 0}, PositConfig{12, 1}}) {
    const FormatConfig format = cfg;
    const KulischConfig k = kulisch_config_for(format);
    for (Bits p = 1; p < (Bits{1} << cfg.n); ++p) {
      const DecodedNumber d = decode(p, cfg);
      if (!d.is_normal()) continue;
      KulischAccumulator acc(k);
      acc.accumulate(d.negative, d.exponent, (std::uint64_t{1} << d.fraction_width) + d.fraction,
                     d.fraction_width);
      CHECK(to_encoded(acc, format) == p);
    }
  }
}
