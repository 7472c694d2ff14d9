#include "klf/mac.hpp"

#include "klf/errors.hpp"
#include "klf/posit.hpp"

namespace klf {

EngineConfig make_engine(const FormatConfig& format, int bias_m, int bias_n) {
  validate(format);
  EngineConfig cfg;
  cfg.format = format;
  cfg.kulisch = kulisch_config_for(format);
  cfg.bias_m = bias_m;
  cfg.bias_n = bias_n;
  const Bits count = Bits{1} << word_bits(format);
  auto table = std::make_shared<std::vector<DecodedNumber>>(count);
  auto valid = std::make_shared<std::vector<bool>>(count, true);
  if (const auto* log = std::get_if<LogConfig>(&format)) {
    cfg.mode = MacMode::elma;
    cfg.tables = std::make_shared<const PqTables>(build_tables(*log));
    for (Bits p = 0; p < count; ++p) {
      try {
        (*table)[p] = decode_log(p, *log);
      } catch (const InvalidOperation&) {
        (*valid)[p] = false;
      }
    }
  } else {
    cfg.mode = MacMode::ema;
    const auto& posit = std::get<PositConfig>(format);
    for (Bits p = 0; p < count; ++p) (*table)[p] = decode(p, posit);
  }
  cfg.decode_table = std::move(table);
  cfg.valid_pattern = std::move(valid);
  return cfg;
}

const DecodedNumber& EngineConfig::decoded(Bits bits) const {
  if (bits >= decode_table->size()) throw std::out_of_range("pattern wider than the format");
  if (!(*valid_pattern)[bits]) throw InvalidOperation("NaN pattern as operand");
  return (*decode_table)[bits];
}

LinearTerm ema_product(const DecodedNumber& a, const DecodedNumber& b) {
  LinearTerm t;
  if (a.is_zero() || b.is_zero()) {
    if (a.is_infinity() || b.is_infinity()) throw InvalidOperation("ema_product: zero * infinity");
    return t;
  }
  t.negative = a.negative != b.negative;
  if (a.is_infinity() || b.is_infinity()) {
    t.cls = NumberClass::infinity;
    return t;
  }
  t.cls = NumberClass::normal;
  t.exponent = static_cast<std::int64_t>(a.exponent) + b.exponent;
  t.significand = ((std::uint64_t{1} << a.fraction_width) + a.fraction) *
                  ((std::uint64_t{1} << b.fraction_width) + b.fraction);
  t.fraction_bits = a.fraction_width + b.fraction_width;
  return t;
}

LinearTerm ema_product(Bits a, Bits b, const EngineConfig& cfg) {
  return ema_product(cfg.decoded(a), cfg.decoded(b));
}

LinearTerm elma_product(const DecodedNumber& a, const DecodedNumber& b, const PqTables& tables) {
  return log_to_linear(log_multiply(a, b, tables.config), tables);
}

LinearTerm elma_product(Bits a, Bits b, const EngineConfig& cfg) {
  if (!cfg.tables) throw FormatError("elma_product: engine has no log tables");
  return elma_product(cfg.decoded(a), cfg.decoded(b), *cfg.tables);
}

LinearTerm engine_product(const DecodedNumber& a, const DecodedNumber& b, const EngineConfig& cfg) {
  LinearTerm t = cfg.mode == MacMode::ema ? ema_product(a, b) : elma_product(a, b, *cfg.tables);
  t.exponent = bias_input(t.exponent, cfg.bias_m);
  return t;
}

KulischAccumulator accumulate_dot(std::span<const Bits> a, std::span<const Bits> b,
                                  const EngineConfig& cfg) {
  if (a.size() != b.size()) throw ShapeError("dot: operand lengths differ");
  KulischAccumulator acc(cfg.kulisch);
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc.accumulate(engine_product(cfg.decoded(a[i]), cfg.decoded(b[i]), cfg));
  }
  return acc;
}

Bits to_encoded(const KulischAccumulator& acc, const EngineConfig& cfg) {
  return to_encoded(acc, cfg.format, cfg.bias_n, cfg.tables.get());
}

Bits dot(std::span<const Bits> a, std::span<const Bits> b, const EngineConfig& cfg, MacMode mode) {
  if (mode != cfg.mode) {
    throw FormatError(mode == MacMode::ema ? "EMA requires a linear posit format"
                                           : "ELMA requires a log format");
  }
  return dot(a, b, cfg);
}

Bits dot(std::span<const Bits> a, std::span<const Bits> b, const EngineConfig& cfg) {
  return to_encoded(accumulate_dot(a, b, cfg), cfg);
}

}  // namespace klf
