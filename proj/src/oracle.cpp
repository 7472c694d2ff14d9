#include "klf/oracle.hpp"

#include "klf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

namespace klf::oracle {

DyadicValue dyadic_add(const DyadicValue& a, const DyadicValue& b) { return a + b; }

DyadicValue dyadic_mul(const DyadicValue& a, const DyadicValue& b) { return a * b; }

DyadicValue exact_dot(std::span<const DyadicValue> a, std::span<const DyadicValue> b) {
  if (a.size() != b.size()) throw ShapeError("exact_dot: length mismatch");
  // Sum every product at the smallest product exponent, then canonicalize once.
  std::int64_t base = 0;
  bool any = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero() || b[i].is_zero()) continue;
    const auto e = a[i].exponent() + b[i].exponent();
    base = any ? std::min(base, e) : e;
    any = true;
  }
  if (!any) return {};
  BigInt sum = 0;
  BigInt term;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero() || b[i].is_zero()) continue;
    term = a[i].significand() * b[i].significand();
    term <<= (a[i].exponent() + b[i].exponent() - base);
    sum += term;
  }
  return DyadicValue(std::move(sum), base);
}

namespace {

// Straightforward reading of the posit definition on a '0'/'1' string.
// Kept separate from the bit-twiddling decoder in the posit codec.
struct NaiveEntry {
  bool finite = false;
  DyadicValue value;
};

NaiveEntry naive_posit_value(Bits bits, int n, int es) {
  std::string s;
  for (int i = n - 1; i >= 0; --i) s.push_back(((bits >> i) & 1) ? '1' : '0');
  if (s == std::string(n, '0')) return {true, {}};
  if (s == "1" + std::string(n - 1, '0')) return {false, {}};
  const bool negative = s[0] == '1';
  if (negative) {
    // two's complement: invert and add one
    for (auto& c : s) c = (c == '0') ? '1' : '0';
    for (int i = n - 1; i >= 0; --i) {
      if (s[i] == '0') {
        s[i] = '1';
        break;
      }
      s[i] = '0';
    }
  }
  const std::string body = s.substr(1);
  std::size_t run = 1;
  while (run < body.size() && body[run] == body[0]) ++run;
  const long k = body[0] == '1' ? static_cast<long>(run) - 1 : -static_cast<long>(run);
  std::string rest = run < body.size() ? body.substr(run + 1) : std::string();
  std::string exp_bits = rest.substr(0, std::min<std::size_t>(rest.size(), es));
  exp_bits.resize(es, '0');
  const std::string frac_bits = rest.size() > static_cast<std::size_t>(es) ? rest.substr(es) : "";
  long exp_field = 0;
  for (char c : exp_bits) exp_field = exp_field * 2 + (c - '0');
  BigInt frac = 0;
  for (char c : frac_bits) frac = frac * 2 + (c - '0');
  const long e = k * (1L << es) + exp_field;
  const auto w = static_cast<std::int64_t>(frac_bits.size());
  BigInt sig = (BigInt(1) << w) + frac;
  if (negative) sig = -sig;
  return {true, DyadicValue(std::move(sig), e - w)};
}

}  // namespace

ValueTable::ValueTable(const PositConfig& cfg) : cfg_(cfg) {
  validate(cfg);
  const Bits count = Bits{1} << cfg.n;
  std::vector<std::pair<DyadicValue, Bits>> entries;
  entries.reserve(count);
  for (Bits p = 0; p < count; ++p) {
    auto e = naive_posit_value(p, cfg.n, cfg.es);
    if (e.finite) entries.emplace_back(std::move(e.value), p);
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  index_of_pattern_.assign(count, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    values_.push_back(entries[i].first);
    patterns_.push_back(entries[i].second);
    index_of_pattern_[entries[i].second] = i;
    if (entries[i].first.sign() <= 0) first_positive_ = i + 1;
  }

  double_fast_path_ = true;
  for (std::size_t i = first_positive_; i < values_.size(); ++i) {
    const double v = values_[i].to_double();
    if (!std::isfinite(v) || !(DyadicValue::from_double(v) == values_[i])) {
      double_fast_path_ = false;
      break;
    }
    positive_doubles_.push_back(v);
    if (i + 1 < values_.size()) {
      const DyadicValue mid = (values_[i] + values_[i + 1]).scaled(-1);
      const double m = mid.to_double();
      if (!std::isfinite(m) || !(DyadicValue::from_double(m) == mid)) {
        double_fast_path_ = false;
        break;
      }
      midpoints_.push_back(m);
    }
  }
  if (!double_fast_path_) {
    positive_doubles_.clear();
    midpoints_.clear();
  }
}

const DyadicValue& ValueTable::value_of(Bits pattern) const {
  if (pattern >= index_of_pattern_.size() ||
      index_of_pattern_[pattern] == static_cast<std::size_t>(-1)) {
    throw std::invalid_argument("value_of: pattern is not finite");
  }
  return values_[index_of_pattern_[pattern]];
}

Bits ValueTable::with_sign(Bits positive, bool negative) const {
  if (!negative) return positive;
  const Bits mask = (Bits{1} << cfg_.n) - 1;
  return (~positive + 1) & mask;
}

Bits ValueTable::round(const DyadicValue& x) const {
  if (x.is_zero()) return 0;
  const bool negative = x.sign() < 0;
  const DyadicValue mag = x.abs();
  const auto first = values_.begin() + static_cast<std::ptrdiff_t>(first_positive_);
  if (mag >= values_.back()) return with_sign(patterns_.back(), negative);
  if (mag <= *first) return with_sign(patterns_[first_positive_], negative);
  const auto it = std::lower_bound(first, values_.end(), mag);
  const auto hi = static_cast<std::size_t>(it - values_.begin());
  if (values_[hi] == mag) return with_sign(patterns_[hi], negative);
  const std::size_t lo = hi - 1;
  const DyadicValue twice = mag.scaled(1);
  const DyadicValue sum = values_[lo] + values_[hi];
  Bits pick;
  if (twice < sum) {
    pick = patterns_[lo];
  } else if (sum < twice) {
    pick = patterns_[hi];
  } else {
    pick = (patterns_[lo] % 2 == 0) ? patterns_[lo] : patterns_[hi];
  }
  return with_sign(pick, negative);
}

Bits ValueTable::round(double x) const {
  if (!double_fast_path_) return round(DyadicValue::from_double(x));
  if (!std::isfinite(x)) throw std::domain_error("round: non-finite input");
  if (x == 0.0) return 0;
  const bool negative = x < 0;
  const double mag = std::fabs(x);
  if (mag >= positive_doubles_.back()) return with_sign(patterns_.back(), negative);
  if (mag <= positive_doubles_.front()) return with_sign(patterns_[first_positive_], negative);
  const auto it = std::lower_bound(positive_doubles_.begin(), positive_doubles_.end(), mag);
  const auto hi = static_cast<std::size_t>(it - positive_doubles_.begin());
  const Bits p_hi = patterns_[first_positive_ + hi];
  if (*it == mag) return with_sign(p_hi, negative);
  const Bits p_lo = patterns_[first_positive_ + hi - 1];
  const double mid = midpoints_[hi - 1];
  Bits pick;
  if (mag < mid) {
    pick = p_lo;
  } else if (mag > mid) {
    pick = p_hi;
  } else {
    pick = (p_lo % 2 == 0) ? p_lo : p_hi;
  }
  return with_sign(pick, negative);
}

std::shared_ptr<const ValueTable> value_table(const PositConfig& cfg) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const ValueTable>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{cfg.n, cfg.es}];
  if (!slot) slot = std::make_shared<const ValueTable>(cfg);
  return slot;
}

Bits round_nearest_even(const DyadicValue& x, const FormatConfig& format) {
  const auto* posit = std::get_if<PositConfig>(&format);
  if (posit == nullptr) {
    throw FormatError("round_nearest_even: log format values are not dyadic");
  }
  return value_table(*posit)->round(x);
}

Bits sequential_rounded_dot(std::span<const DyadicValue> a, std::span<const DyadicValue> b,
                            const FormatConfig& format) {
  if (a.size() != b.size()) throw ShapeError("sequential_rounded_dot: length mismatch");
  const auto* posit = std::get_if<PositConfig>(&format);
  if (posit == nullptr) throw FormatError("sequential_rounded_dot: linear formats only");
  const auto table = value_table(*posit);
  Bits acc_bits = 0;
  DyadicValue acc;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc_bits = table->round(acc + a[i] * b[i]);
    acc = table->value_of(acc_bits);
  }
  return acc_bits;
}

}  // namespace klf::oracle
