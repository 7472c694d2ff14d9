#include "klf/format.hpp"

#include "klf/errors.hpp"

#include <cmath>
#include <regex>

namespace klf {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void validate_taper(int n, int es) {
  if (n < 3 || n > kMaxWordBits) {
    throw FormatError("word bits N=" + std::to_string(n) + " outside supported range 3..16");
  }
  if (es < 0 || es > n - 3) {
    throw FormatError("exponent scale s=" + std::to_string(es) + " must satisfy 0 <= s <= N-3");
  }
}

int ieee_bias(const IeeeStyle& e) { return (1 << (e.exp_bits - 1)) - 1; }

}  // namespace

void validate(const PositConfig& cfg) { validate_taper(cfg.n, cfg.es); }

void validate(const LogConfig& cfg) {
  std::visit(Overloaded{[](const PositTapered& t) { validate_taper(t.n, t.es); },
                        [](const IeeeStyle& e) {
                          if (e.exp_bits < 2 || e.frac_bits < 0 ||
                              1 + e.exp_bits + e.frac_bits > kMaxWordBits) {
                            throw FormatError(
                                "IEEE-style log needs exp_bits >= 2 and 1 + exp_bits + frac_bits "
                                "<= 16");
                          }
                        }},
             cfg.encoding);
  const int f = fraction_width(cfg);
  if (cfg.alpha < f + 1) {
    throw FormatError("constraint alpha >= F+1 violated: alpha=" + std::to_string(cfg.alpha) +
                      ", F=" + std::to_string(f));
  }
  if (cfg.beta < cfg.alpha) {
    throw FormatError("constraint beta >= alpha violated: beta=" + std::to_string(cfg.beta) +
                      ", alpha=" + std::to_string(cfg.alpha));
  }
  if (cfg.gamma < f || cfg.gamma > f + 3) {
    throw FormatError("constraint F <= gamma <= F+3 violated: gamma=" + std::to_string(cfg.gamma) +
                      ", F=" + std::to_string(f));
  }
  if (cfg.alpha > 40 || cfg.beta > 20) {
    throw FormatError("table widths beyond alpha <= 40, beta <= 20 are not supported");
  }
}

void validate(const FormatConfig& cfg) {
  std::visit([](const auto& c) { validate(c); }, cfg);
}

int word_bits(const PositConfig& cfg) { return cfg.n; }

int word_bits(const LogConfig& cfg) {
  return std::visit(Overloaded{[](const PositTapered& t) { return t.n; },
                               [](const IeeeStyle& e) { return 1 + e.exp_bits + e.frac_bits; }},
                    cfg.encoding);
}

int word_bits(const FormatConfig& cfg) {
  return std::visit([](const auto& c) { return word_bits(c); }, cfg);
}

int fraction_width(const LogConfig& cfg) {
  return std::visit(Overloaded{[](const PositTapered& t) { return t.n - 3 - t.es; },
                               [](const IeeeStyle& e) { return e.frac_bits; }},
                    cfg.encoding);
}

int max_exponent(const PositConfig& cfg) { return (cfg.n - 2) << cfg.es; }
int min_exponent(const PositConfig& cfg) { return -max_exponent(cfg); }

int max_exponent(const LogConfig& cfg) {
  return std::visit(Overloaded{[](const PositTapered& t) { return (t.n - 2) << t.es; },
                               [](const IeeeStyle& e) { return ieee_bias(e); }},
                    cfg.encoding);
}

int min_exponent(const LogConfig& cfg) {
  return std::visit(Overloaded{[](const PositTapered& t) { return -((t.n - 2) << t.es); },
                               [](const IeeeStyle& e) { return 1 - ieee_bias(e); }},
                    cfg.encoding);
}

int max_exponent(const FormatConfig& cfg) {
  return std::visit([](const auto& c) { return max_exponent(c); }, cfg);
}
int min_exponent(const FormatConfig& cfg) {
  return std::visit([](const auto& c) { return min_exponent(c); }, cfg);
}

namespace {

bool is_ieee(const FormatConfig& cfg) {
  const auto* log = std::get_if<LogConfig>(&cfg);
  return log != nullptr && std::holds_alternative<IeeeStyle>(log->encoding);
}

Bits apply_sign(Bits positive, bool negative, const FormatConfig& cfg) {
  if (!negative) return positive;
  const int n = word_bits(cfg);
  if (is_ieee(cfg)) return positive | (Bits{1} << (n - 1));
  return (~positive + 1) & ((Bits{1} << n) - 1);
}

}  // namespace

Bits max_pattern(const FormatConfig& cfg, bool negative) {
  const int n = word_bits(cfg);
  Bits p = (Bits{1} << (n - 1)) - 1;
  if (is_ieee(cfg)) {
    const auto& e = std::get<IeeeStyle>(std::get<LogConfig>(cfg).encoding);
    const Bits max_biased = (Bits{1} << e.exp_bits) - 2;
    p = (max_biased << e.frac_bits) | ((Bits{1} << e.frac_bits) - 1);
  }
  return apply_sign(p, negative, cfg);
}

Bits min_pattern(const FormatConfig& cfg, bool negative) {
  Bits p = 1;
  if (is_ieee(cfg)) {
    const auto& e = std::get<IeeeStyle>(std::get<LogConfig>(cfg).encoding);
    p = Bits{1} << e.frac_bits;
  }
  return apply_sign(p, negative, cfg);
}

Bits zero_pattern(const FormatConfig&) { return 0; }

FormatConfig parse_format(const std::string& descriptor) {
  static const std::regex posit_re(R"(posit(\d+)es(\d+))");
  static const std::regex log_re(R"(log(\d+)es(\d+)-(\d+)-(\d+)-(\d+))");
  static const std::regex ieee_re(R"(logieee(\d+)e(\d+)-(\d+)-(\d+)-(\d+))");
  std::smatch m;
  auto num = [&m](int i) { return std::stoi(m[i].str()); };
  try {
    if (std::regex_match(descriptor, m, posit_re)) {
      PositConfig cfg{num(1), num(2)};
      validate(cfg);
      return cfg;
    }
    if (std::regex_match(descriptor, m, log_re)) {
      LogConfig cfg{PositTapered{num(1), num(2)}, num(3), num(4), num(5)};
      validate(cfg);
      return cfg;
    }
    if (std::regex_match(descriptor, m, ieee_re)) {
      LogConfig cfg{IeeeStyle{num(1), num(2)}, num(3), num(4), num(5)};
      validate(cfg);
      return cfg;
    }
  } catch (const std::out_of_range&) {
    throw FormatError("numeric field out of range in '" + descriptor + "'");
  }
  throw FormatError("unrecognized format descriptor '" + descriptor +
                    "' (expected posit<N>es<s>, log<N>es<s>-<a>-<b>-<g> or "
                    "logieee<e>e<f>-<a>-<b>-<g>)");
}

std::string to_string(const FormatConfig& cfg) {
  return std::visit(
      Overloaded{
          [](const PositConfig& p) {
            return "posit" + std::to_string(p.n) + "es" + std::to_string(p.es);
          },
          [](const LogConfig& l) {
            const std::string tables = "-" + std::to_string(l.alpha) + "-" +
                                       std::to_string(l.beta) + "-" + std::to_string(l.gamma);
            return std::visit(
                Overloaded{[&](const PositTapered& t) {
                             return "log" + std::to_string(t.n) + "es" + std::to_string(t.es) +
                                    tables;
                           },
                           [&](const IeeeStyle& e) {
                             return "logieee" + std::to_string(e.exp_bits) + "e" +
                                    std::to_string(e.frac_bits) + tables;
                           }},
                l.encoding);
          }},
      cfg);
}

double dynamic_range_db(const FormatConfig& cfg) {
  // log2(f_max / f_min); IEEE-style logs top out at 2^(bias + 1 - 2^-F).
  double octaves = static_cast<double>(max_exponent(cfg)) - min_exponent(cfg);
  if (is_ieee(cfg)) {
    const int f = fraction_width(std::get<LogConfig>(cfg));
    octaves += 1.0 - std::ldexp(1.0, -f);
  }
  const double db = 20.0 * octaves * std::log10(2.0);
  return std::round(db * 10.0) / 10.0;
}

int max_fraction_bits(const FormatConfig& cfg) {
  return std::visit(Overloaded{[](const PositConfig& p) { return p.n - 3 - p.es; },
                               [](const LogConfig& l) { return fraction_width(l); }},
                    cfg);
}

}  // namespace klf
