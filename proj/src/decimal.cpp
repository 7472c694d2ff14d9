#include "klf/decimal.hpp"

#include "klf/errors.hpp"
#include "klf/logcodec.hpp"
#include "klf/posit.hpp"

#include <cstdio>
#include <regex>

namespace klf {

namespace mp = boost::multiprecision;

std::string to_decimal(const DyadicValue& v) {
  if (v.is_zero()) return "0";
  const bool negative = v.sign() < 0;
  const BigInt mag = negative ? BigInt(-v.significand()) : v.significand();
  std::string out;
  if (v.exponent() >= 0) {
    out = BigInt(mag << v.exponent()).str();
  } else {
    // m * 2^-k = m * 5^k / 10^k; m odd so the last digit is nonzero.
    const auto k = static_cast<unsigned>(-v.exponent());
    std::string digits = BigInt(mag * mp::pow(BigInt(5), k)).str();
    if (digits.size() <= k) digits.insert(0, k - digits.size() + 1, '0');
    out = digits.substr(0, digits.size() - k) + "." + digits.substr(digits.size() - k);
  }
  return negative ? "-" + out : out;
}

DyadicValue parse_decimal(const std::string& text) {
  static const std::regex number(R"(([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?)");
  std::smatch m;
  if (!std::regex_match(text, m, number) || (m[2].length() == 0 && m[3].length() == 0)) {
    throw FormatError("not a finite decimal number: '" + text + "'");
  }
  const bool negative = m[1].str() == "-";
  const std::string frac_digits = m[3].str();
  std::string all = m[2].str() + frac_digits;
  all.erase(0, all.find_first_not_of('0'));
  long exp10 = 0;
  if (m[4].matched) {
    try {
      exp10 = std::stol(m[4].str());
    } catch (const std::out_of_range&) {
      throw FormatError("decimal exponent out of range: '" + text + "'");
    }
  }
  exp10 -= static_cast<long>(frac_digits.size());
  if (exp10 > 100000 || exp10 < -100000) throw FormatError("decimal exponent out of range");
  BigInt digits(all.empty() ? std::string("0") : all);
  if (digits.is_zero()) return {};
  if (negative) digits = -digits;
  if (exp10 >= 0) {
    return DyadicValue(digits * mp::pow(BigInt(10), static_cast<unsigned>(exp10)), 0);
  }
  const auto k = static_cast<unsigned>(-exp10);
  const BigInt den = mp::pow(BigInt(5), k);
  const BigInt mag = negative ? BigInt(-digits) : digits;
  BigInt q;
  BigInt r;
  mp::divide_qr(mag, den, q, r);
  if (r.is_zero()) return DyadicValue(negative ? BigInt(-q) : q, -static_cast<std::int64_t>(k));
  // Inexact: keep 128+ significant bits and append a sticky one bit.
  const auto gap = static_cast<std::int64_t>(mp::msb(den)) - static_cast<std::int64_t>(mp::msb(mag));
  const std::int64_t p = std::max<std::int64_t>(0, gap + 130);
  q = (mag << p) / den;
  BigInt sig = 2 * q + 1;
  if (negative) sig = -sig;
  return DyadicValue(std::move(sig), -p - 1 - static_cast<std::int64_t>(k));
}

Bits encode_value(const DyadicValue& x, const FormatConfig& format) {
  if (const auto* posit = std::get_if<PositConfig>(&format)) return encode(x, *posit);
  return encode_log_value(x, std::get<LogConfig>(format));
}

std::string describe_value(Bits bits, const FormatConfig& format) {
  if (const auto* posit = std::get_if<PositConfig>(&format)) {
    const DecodedNumber d = decode(bits, *posit);
    if (d.is_infinity()) return "inf";
    return to_decimal(*to_dyadic(d));
  }
  const auto& log = std::get<LogConfig>(format);
  DecodedNumber d;
  try {
    d = decode_log(bits, log);
  } catch (const InvalidOperation&) {
    return "nan";
  }
  if (d.is_zero()) return "0";
  const bool signed_inf = std::holds_alternative<IeeeStyle>(log.encoding);
  if (d.is_infinity()) return (signed_inf && d.negative) ? "-inf" : "inf";
  return (d.negative ? "-2^" : "2^") + to_decimal(log_exponent(d));
}

std::string hex_pattern(Bits bits, const FormatConfig& format) {
  const int digits = (word_bits(format) + 3) / 4;
  char buf[16];
  std::snprintf(buf, sizeof buf, "%0*x", digits, static_cast<unsigned>(bits));
  return buf;
}

}  // namespace klf
