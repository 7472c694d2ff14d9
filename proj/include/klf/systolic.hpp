#pragma once

#include "klf/linalg.hpp"
#include "klf/mac.hpp"

#include <cstdint>

namespace klf {

/// Stationary-C systolic array. A enters on the left edge (row i delayed by
/// i cycles), B on the top edge (column j delayed by j cycles); every PE keeps
/// its own accumulator. After the last MAC the accumulators shift down and out
/// through the output converters, one array row per ceil(N / converters) cycles.
struct ArrayConfig {
  int rows = 32;
  int cols = 32;
  EngineConfig engine;
  int output_converters = 32;
  int boundary_decoders = 64;
};

struct ActivityReport {
  std::uint64_t multiplies = 0;
  std::uint64_t shifts = 0;
  std::uint64_t wide_adds = 0;
  std::uint64_t conversions = 0;
  std::uint64_t decoder_invocations = 0;

  friend bool operator==(const ActivityReport&, const ActivityReport&) = default;
};

struct SystolicRun {
  GemmResult result;
  std::uint64_t cycles = 0;
  std::uint64_t compute_cycles = 0;
  std::uint64_t drain_cycles = 0;
  ActivityReport activity;
};

// Throws ShapeError if M > rows, N > cols or the inner dimensions disagree,
// std::invalid_argument for an unusable array configuration.
SystolicRun run_gemm(const EncodedMatrix& a, const EncodedMatrix& b, const ArrayConfig& cfg);

inline const ActivityReport& activity_report(const SystolicRun& run) { return run.activity; }

// Schedule arithmetic: K + (M - 1) + (N - 1) compute cycles plus
// M * ceil(N / converters) drain cycles.
std::uint64_t expected_cycles(std::int64_t m, std::int64_t n, std::int64_t k, int converters);

}  // namespace klf
