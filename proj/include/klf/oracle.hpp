#pragma once

#include "klf/dyadic.hpp"
#include "klf/format.hpp"

#include <memory>
#include <span>
#include <vector>

// Reference arithmetic. Everything here is exact and deliberately simple; it
// is the ground truth the bit-level codecs and accumulators are checked against.
namespace klf::oracle {

DyadicValue dyadic_add(const DyadicValue& a, const DyadicValue& b);
DyadicValue dyadic_mul(const DyadicValue& a, const DyadicValue& b);

// Exact sum of a[i] * b[i]. Throws ShapeError on a length mismatch.
DyadicValue exact_dot(std::span<const DyadicValue> a, std::span<const DyadicValue> b);

/// Every finite value of a linear format, sorted ascending, with its pattern.
///
/// Rounding is done by search over this table, independently of the bit-level
/// encoder in the posit codec.
class ValueTable {
 public:
  explicit ValueTable(const PositConfig& cfg);

  const PositConfig& config() const { return cfg_; }

  // Nearest finite pattern; ties go to the even pattern. Nonzero inputs never
  // round to zero and finite inputs never round to infinity.
  Bits round(const DyadicValue& x) const;
  // Same rule for a double input.
  Bits round(double x) const;

  // Sorted finite values (including zero).
  const std::vector<DyadicValue>& values() const { return values_; }
  const std::vector<Bits>& patterns() const { return patterns_; }

  // Exact value of a finite pattern.
  const DyadicValue& value_of(Bits pattern) const;

 private:
  Bits with_sign(Bits positive, bool negative) const;

  PositConfig cfg_;
  std::vector<DyadicValue> values_;
  std::vector<Bits> patterns_;
  std::vector<double> positive_doubles_;
  std::vector<double> midpoints_;  // between consecutive positive values, when exact in double
  std::vector<std::size_t> index_of_pattern_;
  std::size_t first_positive_ = 0;
  bool double_fast_path_ = false;
};

// Shared, lazily built table for a configuration. Thread-safe.
std::shared_ptr<const ValueTable> value_table(const PositConfig& cfg);

// Nearest representable pattern of a linear format. Throws FormatError for log formats,
// whose values are not dyadic.
Bits round_nearest_even(const DyadicValue& x, const FormatConfig& format);

// FMA-chain model: acc <- round(acc + a[i] * b[i]) for each i, left to right.
Bits sequential_rounded_dot(std::span<const DyadicValue> a, std::span<const DyadicValue> b,
                            const FormatConfig& format);

}  // namespace klf::oracle
