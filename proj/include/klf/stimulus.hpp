#pragma once

#include "klf/format.hpp"
#include "klf/linalg.hpp"
#include "klf/oracle.hpp"

#include <memory>
#include <random>
#include <vector>

namespace klf {

/// Draws from N(0, 1) rounded to nearest-even into a format. Deterministic per seed.
class NormalStimulus {
 public:
  NormalStimulus(const FormatConfig& format, std::uint64_t seed);

  struct Draw {
    double real = 0.0;
    Bits bits = 0;
  };

  Draw draw();
  Bits next() { return draw().bits; }
  std::vector<Bits> vector(std::size_t length);
  EncodedMatrix matrix(Eigen::Index rows, Eigen::Index cols);

  std::mt19937_64& engine() { return rng_; }

 private:
  FormatConfig format_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::shared_ptr<const oracle::ValueTable> table_;  // linear formats
};

}  // namespace klf
