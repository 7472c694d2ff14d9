#pragma once

#include "klf/format.hpp"
#include "klf/kulisch.hpp"
#include "klf/logcodec.hpp"

#include <memory>
#include <span>
#include <vector>

namespace klf {

enum class MacMode { ema, elma };

/// A format paired with its accumulator geometry, tables and input/output
/// exponent biases. Build with make_engine.
struct EngineConfig {
  FormatConfig format;
  KulischConfig kulisch;
  MacMode mode = MacMode::ema;
  std::shared_ptr<const PqTables> tables;  // log formats only
  int bias_m = 0;
  int bias_n = 0;

  // Decoded form of a pattern from a table built once per engine.
  // Throws InvalidOperation for NaN patterns.
  const DecodedNumber& decoded(Bits bits) const;

  std::shared_ptr<const std::vector<DecodedNumber>> decode_table;
  std::shared_ptr<const std::vector<bool>> valid_pattern;
};

EngineConfig make_engine(const FormatConfig& format, int bias_m = 0, int bias_n = 0);

// Exact product of two decoded posits; significand keeps the full
// (wa + 1) * (wb + 1) bit product, value in [1, 4).
LinearTerm ema_product(const DecodedNumber& a, const DecodedNumber& b);
LinearTerm ema_product(Bits a, Bits b, const EngineConfig& cfg);

// Exact log-domain product, linearized through the p table.
LinearTerm elma_product(const DecodedNumber& a, const DecodedNumber& b, const PqTables& tables);
LinearTerm elma_product(Bits a, Bits b, const EngineConfig& cfg);

// Product in the engine's mode with bias_m applied.
LinearTerm engine_product(const DecodedNumber& a, const DecodedNumber& b, const EngineConfig& cfg);

// All products accumulated into one fresh accumulator (no conversion).
KulischAccumulator accumulate_dot(std::span<const Bits> a, std::span<const Bits> b,
                                  const EngineConfig& cfg);

// One rounding per dot product. Throws ShapeError on length mismatch,
// FormatError if mode does not match the format family, SaturationError on overflow.
Bits dot(std::span<const Bits> a, std::span<const Bits> b, const EngineConfig& cfg, MacMode mode);
Bits dot(std::span<const Bits> a, std::span<const Bits> b, const EngineConfig& cfg);

// Engine-level conversion of a finished accumulator (bias_n applied).
Bits to_encoded(const KulischAccumulator& acc, const EngineConfig& cfg);

}  // namespace klf
