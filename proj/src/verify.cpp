#include "klf/verify.hpp"

#include "klf/errors.hpp"
#include "klf/mac.hpp"
#include "klf/oracle.hpp"
#include "klf/posit.hpp"
#include "klf/stimulus.hpp"

#include <algorithm>
#include <random>

namespace klf {

std::int64_t first_round_trip_failure(const PqTables& tables) {
  const int f = fraction_width(tables.config);
  const int alpha = tables.config.alpha;
  for (std::uint64_t frac = 0; frac < (std::uint64_t{1} << f); ++frac) {
    const DecodedNumber x{NumberClass::normal, false, 0, frac, f};
    const LinearTerm lin = log_to_linear(x, tables);
    const BigInt g = lin.significand - (std::uint64_t{1} << alpha);
    const Bits back = linear_to_log(false, 0, g, alpha, tables);
    const DecodedNumber d = decode_log(back, tables.config);
    if (!d.is_normal() || d.exponent != 0 || d.fraction != frac) {
      return static_cast<std::int64_t>(frac);
    }
  }
  return -1;
}

namespace {

CheckResult check(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), ok, std::move(detail)};
}

// Patterns to visit: all of them, or a seeded sample.
std::vector<Bits> pattern_sample(int n, const VerifyOptions& opt, std::mt19937_64& rng) {
  const Bits count = Bits{1} << n;
  std::vector<Bits> out;
  if (opt.exhaustive || count <= 4096) {
    out.resize(count);
    for (Bits p = 0; p < count; ++p) out[p] = p;
    return out;
  }
  std::uniform_int_distribution<Bits> pick(0, count - 1);
  for (int i = 0; i < 4096; ++i) out.push_back(pick(rng));
  return out;
}

CheckResult permutation_check(const EngineConfig& engine, const VerifyOptions& opt,
                              std::mt19937_64& rng) {
  NormalStimulus stim(engine.format, rng());
  std::uniform_int_distribution<std::size_t> len(1, 512);
  for (int t = 0; t < opt.random_trials; ++t) {
    const std::size_t n = len(rng);
    std::vector<Bits> a = stim.vector(n);
    std::vector<Bits> b = stim.vector(n);
    const KulischAccumulator ref = accumulate_dot(a, b, engine);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Bits> pa(n);
    std::vector<Bits> pb(n);
    for (std::size_t i = 0; i < n; ++i) {
      pa[i] = a[perm[i]];
      pb[i] = b[perm[i]];
    }
    if (!(accumulate_dot(pa, pb, engine) == ref)) {
      return check("permutation invariance", false, "trial " + std::to_string(t));
    }
  }
  return check("permutation invariance", true, std::to_string(opt.random_trials) + " trials");
}

void verify_posit(const PositConfig& cfg, const VerifyOptions& opt, std::mt19937_64& rng,
                  std::vector<CheckResult>& out) {
  const FormatConfig format = cfg;
  {
    bool ok = true;
    std::string detail;
    for (Bits p : pattern_sample(cfg.n, opt, rng)) {
      const DecodedNumber d = decode(p, cfg);
      if (d.is_infinity()) continue;
      if (encode(*to_dyadic(d), cfg) != p) {
        ok = false;
        detail = "pattern " + std::to_string(p);
        break;
      }
    }
    out.push_back(check("codec round-trip", ok, detail));
  }
  {
    // Signed-integer order of finite patterns equals value order.
    const Bits count = Bits{1} << cfg.n;
    const Bits half = count / 2;
    bool ok = true;
    std::optional<DyadicValue> prev;
    for (Bits i = 1; i < count; ++i) {  // from the most negative pattern upward
      const Bits p = (half + i) % count;
      const DecodedNumber d = decode(p, cfg);
      const DyadicValue v = *to_dyadic(d);
      if (prev && !(*prev < v)) {
        ok = false;
        break;
      }
      prev = v;
    }
    out.push_back(check("monotone ordering", ok));
  }
  {
    const auto table = oracle::value_table(cfg);
    std::uniform_int_distribution<std::int64_t> sig(-(std::int64_t{1} << 40), std::int64_t{1} << 40);
    const int span = max_exponent(cfg) + 48;
    std::uniform_int_distribution<int> exp(-span, span - 40);
    bool ok = true;
    for (int t = 0; t < opt.random_trials * 20 && ok; ++t) {
      const DyadicValue x(BigInt(sig(rng)), exp(rng));
      ok = encode(x, cfg) == table->round(x);
    }
    out.push_back(check("rounding optimality vs oracle", ok));
  }
  const EngineConfig engine = make_engine(format);
  {
    NormalStimulus stim(format, rng());
    const auto table = oracle::value_table(cfg);
    std::uniform_int_distribution<std::size_t> len(1, 512);
    int compared = 0;
    bool ok = true;
    for (int t = 0; t < opt.random_trials && ok; ++t) {
      const std::size_t n = len(rng);
      const std::vector<Bits> a = stim.vector(n);
      const std::vector<Bits> b = stim.vector(n);
      const KulischAccumulator acc = accumulate_dot(a, b, engine);
      if (acc.overflow() || acc.truncated()) continue;
      std::vector<DyadicValue> da;
      std::vector<DyadicValue> db;
      for (std::size_t i = 0; i < n; ++i) {
        da.push_back(table->value_of(a[i]));
        db.push_back(table->value_of(b[i]));
      }
      ok = to_encoded(acc, engine) == table->round(oracle::exact_dot(da, db));
      ++compared;
    }
    out.push_back(check("EMA oracle equivalence", ok, std::to_string(compared) + " dots"));
  }
  out.push_back(permutation_check(engine, opt, rng));
}

void verify_log(const LogConfig& cfg, const VerifyOptions& opt, std::mt19937_64& rng,
                const PqTables& tables, std::vector<CheckResult>& out) {
  const FormatConfig format = cfg;
  const int n = word_bits(cfg);
  const bool is_tapered = std::holds_alternative<PositTapered>(cfg.encoding);
  {
    bool ok = true;
    std::string detail;
    for (Bits p : pattern_sample(n, opt, rng)) {
      DecodedNumber d;
      try {
        d = decode_log(p, cfg);
      } catch (const InvalidOperation&) {
        continue;  // NaN
      }
      if (!d.is_normal()) continue;
      if (encode_log(d.negative, d.exponent, BigInt(d.fraction), d.fraction_width, cfg) != p) {
        ok = false;
        detail = "pattern " + std::to_string(p);
        break;
      }
    }
    out.push_back(check("codec round-trip", ok, detail));
  }
  if (is_tapered) {
    const Bits count = Bits{1} << n;
    bool ok = true;
    std::optional<DyadicValue> prev;
    for (Bits i = 1; i < count / 2; ++i) {
      const DyadicValue v = log_exponent(decode_log(i, cfg));
      if (prev && !(*prev < v)) ok = false;
      prev = v;
    }
    out.push_back(check("monotone ordering", ok));
    const auto& t = std::get<PositTapered>(cfg.encoding);
    const PositConfig posit{t.n, t.es};
    const DecodedNumber top = decode_log(max_pattern(format), cfg);
    const DecodedNumber bottom = decode_log(min_pattern(format), cfg);
    const bool same = top.exponent == max_exponent(posit) && top.fraction == 0 &&
                      bottom.exponent == min_exponent(posit) && bottom.fraction == 0;
    out.push_back(check("f_min/f_max match posit", same));
  }
  {
    const std::int64_t bad = first_round_trip_failure(tables);
    out.push_back(check("LUT round-trip identity", bad < 0,
                        bad < 0 ? std::to_string(tables.p.size()) + " fractions"
                                : "fails at f=" + std::to_string(bad)));
  }
  {
    NormalStimulus stim(format, rng());
    bool ok = true;
    for (int t = 0; t < opt.random_trials && ok; ++t) {
      const DecodedNumber a = decode_log(stim.next(), cfg);
      const DecodedNumber b = decode_log(stim.next(), cfg);
      if (!a.is_normal() || !b.is_normal()) continue;
      const DecodedNumber q = log_divide(log_multiply(a, b, cfg), b, cfg);
      ok = q == a && log_multiply(a, b, cfg) == log_multiply(b, a, cfg);
    }
    out.push_back(check("log multiply/divide inverse", ok));
  }
  EngineConfig engine = make_engine(format);
  engine.tables = std::make_shared<const PqTables>(tables);
  out.push_back(permutation_check(engine, opt, rng));
}

}  // namespace

std::vector<CheckResult> run_verification(const FormatConfig& format, const VerifyOptions& options,
                                          const PqTables* tables) {
  validate(format);
  std::mt19937_64 rng(options.seed);
  std::vector<CheckResult> out;
  if (const auto* posit = std::get_if<PositConfig>(&format)) {
    verify_posit(*posit, options, rng, out);
  } else {
    const auto& log = std::get<LogConfig>(format);
    if (tables != nullptr) {
      verify_log(log, options, rng, *tables, out);
    } else {
      verify_log(log, options, rng, build_tables(log), out);
    }
  }
  return out;
}

}  // namespace klf
