#include "klf/decimal.hpp"
#include "klf/dyadic.hpp"
#include "klf/errors.hpp"
#include "klf/oracle.hpp"

#include <doctest.h>

#include <random>

using namespace klf;

TEST_CASE("dyadic values are canonical") {
  const DyadicValue a(BigInt(12), 0);
  CHECK(a.significand() == 3);
  CHECK(a.exponent() == 2);
  CHECK(DyadicValue(BigInt(0), 17) == DyadicValue());
  CHECK(DyadicValue(BigInt(-8), 1) == DyadicValue::from_int(-16));
  CHECK(DyadicValue::from_int(-16).exponent() == 4);
}

TEST_CASE("dyadic arithmetic is exact") {
  const DyadicValue third_bit = DyadicValue::pow2(-3);
  CHECK(DyadicValue::from_int(1) + third_bit == DyadicValue(BigInt(9), -3));
  CHECK(third_bit * third_bit == DyadicValue::pow2(-6));
  CHECK(DyadicValue::from_int(5) - DyadicValue::from_int(5) == DyadicValue());
  CHECK(DyadicValue::pow2(-1000) + DyadicValue::pow2(1000) > DyadicValue::pow2(1000));
  CHECK(DyadicValue::from_int(-3) < DyadicValue::pow2(-40));
  CHECK(DyadicValue::from_double(0.1).to_double() == 0.1);
  CHECK(DyadicValue(BigInt(3), -2).scaled(2) == DyadicValue::from_int(3));
  CHECK(DyadicValue::from_int(-12).leading_exponent() == 3);
  CHECK_THROWS_AS(DyadicValue::from_double(std::numeric_limits<double>::infinity()),
                  std::domain_error);
}

TEST_CASE("ordering agrees with doubles") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1e3);
  for (int i = 0; i < 2000; ++i) {
    const double x = n(rng);
    const double y = n(rng);
    const auto a = DyadicValue::from_double(x);
    const auto b = DyadicValue::from_double(y);
    CHECK(((a <=> b) < 0) == (x < y));
    CHECK((a + b).to_double() == doctest::Approx(x + y));
    CHECK(oracle::dyadic_mul(a, b) == a * b);
    CHECK(oracle::dyadic_add(a, b) == b + a);
  }
}

TEST_CASE("decimal expansion") {
  CHECK(to_decimal(DyadicValue()) == "0");
  CHECK(to_decimal(DyadicValue::pow2(-12)) == "0.000244140625");
  CHECK(to_decimal(DyadicValue::from_int(-4096)) == "-4096");
  CHECK(to_decimal(DyadicValue(BigInt(-11), -3)) == "-1.375");
  CHECK(parse_decimal("1.375") == DyadicValue(BigInt(11), -3));
  CHECK(parse_decimal("-2.5e2") == DyadicValue::from_int(-250));
  CHECK(parse_decimal("+0.0") == DyadicValue());
  CHECK(parse_decimal("0.25") == DyadicValue::pow2(-2));
  CHECK(parse_decimal("-0.75") == DyadicValue(BigInt(-3), -2));
  CHECK(parse_decimal("0010.5") == DyadicValue(BigInt(21), -1));
  CHECK(parse_decimal(".5") == DyadicValue::pow2(-1));
  CHECK(parse_decimal("0.08") == parse_decimal("8e-2"));
  CHECK_THROWS_AS(parse_decimal("1.2.3"), FormatError);
  CHECK_THROWS_AS(parse_decimal("inf"), FormatError);
  // 0.1 is not dyadic: the parsed value must sit strictly inside the rounding interval of 0.1.
  const DyadicValue tenth = parse_decimal("0.1");
  const DyadicValue err = tenth * DyadicValue::from_int(10) - DyadicValue::from_int(1);
  CHECK(!err.is_zero());
  CHECK(err.abs() < DyadicValue::pow2(-120));
  CHECK(tenth.significand() % 2 == 1);
}

TEST_CASE("exact dot products") {
  const std::vector<DyadicValue> a{DyadicValue::pow2(12), DyadicValue::pow2(-12),
                                   DyadicValue::pow2(12)};
  const std::vector<DyadicValue> b{DyadicValue::pow2(12), DyadicValue::pow2(-12),
                                   DyadicValue::from_int(-4096)};
  CHECK(oracle::exact_dot(a, b) == DyadicValue::pow2(-24));
  CHECK(oracle::exact_dot(std::span<const DyadicValue>(), std::span<const DyadicValue>()) ==
        DyadicValue());
  const std::vector<DyadicValue> shorter{DyadicValue::from_int(1)};
  CHECK_THROWS_AS(oracle::exact_dot(a, shorter), ShapeError);
}

TEST_CASE("value table of posit(8,1)") {
  const auto table = oracle::value_table(PositConfig{8, 1});
  CHECK(table->values().size() == 255);
  CHECK(table->value_of(0x40) == DyadicValue::from_int(1));
  CHECK(table->value_of(0x7f) == DyadicValue::pow2(12));
  CHECK(table->value_of(0x01) == DyadicValue::pow2(-12));
  CHECK(table->value_of(0xc0) == DyadicValue::from_int(-1));
  CHECK(table->round(DyadicValue::from_int(1)) == 0x40);
  CHECK(table->round(DyadicValue::pow2(40)) == 0x7f);
  CHECK(table->round(-DyadicValue::pow2(40)) == 0x81);
  CHECK(table->round(DyadicValue::pow2(-40)) == 0x01);
  CHECK(table->round(DyadicValue()) == 0x00);
  // 1 + 1/32 is halfway between 0x40 and 0x41; ties go to the even pattern.
  CHECK(table->round(DyadicValue(BigInt(33), -5)) == 0x40);
  CHECK(table->round(DyadicValue(BigInt(35), -5)) == 0x42);
  CHECK(table->round(1.0) == 0x40);
  CHECK(table->round(1.03125) == 0x40);
  CHECK(table->round(-1e300) == 0x81);
  CHECK(table->round(1e-300) == 0x01);
}

TEST_CASE("rounding is the identity on representable values") {
  for (const PositConfig cfg : {PositConfig{7, 1}, PositConfig{8, 2}, PositConfig{12, 1},
                                PositConfig{16, 1}}) {
    const auto table = oracle::value_table(cfg);
    for (Bits p : table->patterns()) CHECK(table->round(table->value_of(p)) == p);
  }
}

TEST_CASE("double and exact rounding agree") {
  for (const PositConfig cfg : {PositConfig{7, 1}, PositConfig{8, 0}, PositConfig{9, 1},
                                PositConfig{16, 1}}) {
    const auto table = oracle::value_table(cfg);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n(0.0, 4.0);
    for (int i = 0; i < 5000; ++i) {
      const double x = n(rng);
      CHECK(table->round(x) == table->round(DyadicValue::from_double(x)));
    }
  }
}

TEST_CASE("sequential rounding model") {
  const auto table = oracle::value_table(PositConfig{8, 1});
  const FormatConfig format = PositConfig{8, 1};
  // 4096 + 1 + ... stays at 4096 under per-step rounding.
  std::vector<DyadicValue> a(5, DyadicValue::from_int(1));
  std::vector<DyadicValue> b{DyadicValue::pow2(12), DyadicValue::from_int(1),
                             DyadicValue::from_int(1), DyadicValue::from_int(1),
                             -DyadicValue::pow2(12)};
  CHECK(oracle::sequential_rounded_dot(a, b, format) == 0x00);
  CHECK(table->round(oracle::exact_dot(a, b)) == table->round(DyadicValue::from_int(3)));
  CHECK_THROWS_AS(oracle::round_nearest_even(DyadicValue(), parse_format("log8es1-5-5-7")),
                  FormatError);
}
