#include "klf/linalg.hpp"

#include "klf/errors.hpp"
#include "klf/posit.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <limits>

namespace klf {

namespace {

void check_operands(const EncodedMatrix& a, const EncodedMatrix& b, const EngineConfig& cfg) {
  if (a.cols() != b.rows()) {
    throw ShapeError("gemm: inner dimensions differ (" + std::to_string(a.cols()) + " vs " +
                     std::to_string(b.rows()) + ")");
  }
  if (!(a.format == cfg.format) || !(b.format == cfg.format)) {
    throw FormatError("gemm: operand formats must match the engine format");
  }
}

}  // namespace

GemmResult gemm(const EncodedMatrix& a, const EncodedMatrix& b, const EngineConfig& cfg) {
  check_operands(a, b, cfg);
  GemmResult out;
  out.c.format = cfg.format;
  out.c.data.resize(a.rows(), b.cols());
  std::vector<Bits> row(static_cast<std::size_t>(a.cols()));
  std::vector<Bits> col(static_cast<std::size_t>(b.rows()));
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    for (Eigen::Index k = 0; k < b.rows(); ++k) col[static_cast<std::size_t>(k)] = b.data(k, j);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index k = 0; k < a.cols(); ++k) row[static_cast<std::size_t>(k)] = a.data(i, k);
      const KulischAccumulator acc = accumulate_dot(row, col, cfg);
      if (acc.overflow()) {
        out.c.data(i, j) = max_pattern(cfg.format, acc.is_negative());
        out.saturated.push_back({i, j, acc.is_negative()});
      } else {
        out.c.data(i, j) = to_encoded(acc, cfg);
      }
    }
  }
  std::sort(out.saturated.begin(), out.saturated.end(), [](const auto& x, const auto& y) {
    return std::tie(x.row, x.col) < std::tie(y.row, y.col);
  });
  return out;
}

LinearTerm linear_term(const DecodedNumber& x, const EngineConfig& cfg) {
  if (cfg.mode == MacMode::elma) {
    LinearTerm t = log_to_linear(x, *cfg.tables);
    t.exponent = bias_input(t.exponent, cfg.bias_m);
    return t;
  }
  LinearTerm t;
  t.cls = x.cls;
  t.negative = x.negative;
  if (!x.is_normal()) return t;
  t.exponent = bias_input(x.exponent, cfg.bias_m);
  t.significand = (std::uint64_t{1} << x.fraction_width) + x.fraction;
  t.fraction_bits = x.fraction_width;
  return t;
}

Bits average_pool(std::span<const Bits> values, const EngineConfig& cfg) {
  if (values.empty()) throw ShapeError("average_pool: empty input");
  KulischAccumulator acc(cfg.kulisch);
  for (Bits v : values) acc.accumulate(linear_term(cfg.decoded(v), cfg));
  if (acc.overflow()) return to_encoded(acc, cfg);  // throws SaturationError
  acc.divide(values.size());
  return to_encoded(acc, cfg);
}

Eigen::MatrixXd to_double(const EncodedMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const Bits p = m.data(i, j);
      if (const auto* log = std::get_if<LogConfig>(&m.format)) {
        out(i, j) = log_to_double(p, *log);
        continue;
      }
      const DecodedNumber d = decode(p, std::get<PositConfig>(m.format));
      out(i, j) = d.is_infinity() ? std::numeric_limits<double>::infinity()
                                  : to_dyadic(d)->to_double();
    }
  }
  return out;
}

}  // namespace klf
