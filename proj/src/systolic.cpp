#include "klf/systolic.hpp"

#include "klf/errors.hpp"

#include <algorithm>
#include <tuple>
#include <stdexcept>

namespace klf {

std::uint64_t expected_cycles(std::int64_t m, std::int64_t n, std::int64_t k, int converters) {
  if (m <= 0 || n <= 0) return 0;
  const auto compute = static_cast<std::uint64_t>(k + (m - 1) + (n - 1));
  const auto per_row = static_cast<std::uint64_t>((n + converters - 1) / converters);
  return compute + static_cast<std::uint64_t>(m) * per_row;
}

namespace {

struct Latch {
  bool valid = false;
  DecodedNumber value;
};

}  // namespace

SystolicRun run_gemm(const EncodedMatrix& a, const EncodedMatrix& b, const ArrayConfig& cfg) {
  const EngineConfig& engine = cfg.engine;
  if (a.cols() != b.rows()) throw ShapeError("run_gemm: inner dimensions differ");
  if (!(a.format == engine.format) || !(b.format == engine.format)) {
    throw FormatError("run_gemm: operand formats must match the engine format");
  }
  const Eigen::Index m = a.rows();
  const Eigen::Index n = b.cols();
  const Eigen::Index k = a.cols();
  if (m > cfg.rows || n > cfg.cols) {
    throw ShapeError("run_gemm: " + std::to_string(m) + "x" + std::to_string(n) +
                     " output does not fit a " + std::to_string(cfg.rows) + "x" +
                     std::to_string(cfg.cols) + " array");
  }
  if (cfg.output_converters < 1) throw std::invalid_argument("need at least one output converter");
  if (cfg.boundary_decoders < cfg.rows + cfg.cols) {
    throw std::invalid_argument("need one boundary decoder per array edge lane");
  }

  SystolicRun run;
  run.result.c.format = engine.format;
  run.result.c.data.resize(m, n);
  if (m == 0 || n == 0) return run;

  const auto idx = [n](Eigen::Index i, Eigen::Index j) { return static_cast<std::size_t>(i * n + j); };
  std::vector<Latch> a_reg(static_cast<std::size_t>(m * n));
  std::vector<Latch> b_reg(static_cast<std::size_t>(m * n));
  std::vector<KulischAccumulator> acc(static_cast<std::size_t>(m * n),
                                      KulischAccumulator(engine.kulisch));
  ActivityReport& activity = run.activity;

  // Compute phase: the MAC for step kk reaches PE(i, j) at cycle i + j + kk.
  run.compute_cycles = static_cast<std::uint64_t>(k + (m - 1) + (n - 1));
  for (std::uint64_t cycle = 0; cycle < run.compute_cycles; ++cycle) {
    const auto t = static_cast<Eigen::Index>(cycle);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = n - 1; j > 0; --j) a_reg[idx(i, j)] = a_reg[idx(i, j - 1)];
      const Eigen::Index kk = t - i;
      Latch in;
      if (kk >= 0 && kk < k) {
        in = {true, engine.decoded(a.data(i, kk))};
        ++activity.decoder_invocations;
      }
      a_reg[idx(i, 0)] = in;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = m - 1; i > 0; --i) b_reg[idx(i, j)] = b_reg[idx(i - 1, j)];
      const Eigen::Index kk = t - j;
      Latch in;
      if (kk >= 0 && kk < k) {
        in = {true, engine.decoded(b.data(kk, j))};
        ++activity.decoder_invocations;
      }
      b_reg[idx(0, j)] = in;
    }
    for (std::size_t p = 0; p < acc.size(); ++p) {
      if (!a_reg[p].valid || !b_reg[p].valid) continue;
      acc[p].accumulate(engine_product(a_reg[p].value, b_reg[p].value, engine));
      ++activity.multiplies;
      ++activity.shifts;
      ++activity.wide_adds;
    }
  }

  // Drain phase: accumulators shift down one row per step; the bottom row
  // leaves through the converters, ceil(N / converters) cycles per row.
  const auto per_row = static_cast<std::uint64_t>((n + cfg.output_converters - 1) / cfg.output_converters);
  for (Eigen::Index step = 0; step < m; ++step) {
    const Eigen::Index out_row = m - 1 - step;
    for (Eigen::Index j = 0; j < n; ++j) {
      const KulischAccumulator& cell = acc[idx(m - 1, j)];
      if (cell.overflow()) {
        run.result.c.data(out_row, j) = max_pattern(engine.format, cell.is_negative());
        run.result.saturated.push_back({out_row, j, cell.is_negative()});
      } else {
        run.result.c.data(out_row, j) = to_encoded(cell, engine);
      }
      ++activity.conversions;
    }
    run.drain_cycles += per_row;
    for (Eigen::Index i = m - 1; i > 0; --i) {
      for (Eigen::Index j = 0; j < n; ++j) acc[idx(i, j)] = acc[idx(i - 1, j)];
    }
  }
  std::sort(run.result.saturated.begin(), run.result.saturated.end(), [](const auto& x, const auto& y) {
    return std::tie(x.row, x.col) < std::tie(y.row, y.col);
  });
  run.cycles = run.compute_cycles + run.drain_cycles;
  return run;
}

}  // namespace klf
