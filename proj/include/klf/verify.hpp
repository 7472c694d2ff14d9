#pragma once

#include "klf/format.hpp"
#include "klf/logcodec.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace klf {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  bool exhaustive = false;
  std::uint64_t seed = 1;
  int random_trials = 500;
};

// Codec round-trip and ordering, LUT identity, permutation invariance and
// oracle equivalence checks for one format. `tables` overrides the tables
// built from the format (used to exercise a corrupted table).
std::vector<CheckResult> run_verification(const FormatConfig& format, const VerifyOptions& options,
                                          const PqTables* tables = nullptr);

// Log -> linear -> log identity over all 2^F fractions; returns the first
// failing fraction, or -1.
std::int64_t first_round_trip_failure(const PqTables& tables);

}  // namespace klf
