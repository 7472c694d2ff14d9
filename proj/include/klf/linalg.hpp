#pragma once

#include "klf/format.hpp"
#include "klf/mac.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace klf {

using PatternMatrix = Eigen::Matrix<Bits, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct EncodedMatrix {
  FormatConfig format;
  PatternMatrix data;

  Eigen::Index rows() const { return data.rows(); }
  Eigen::Index cols() const { return data.cols(); }
};

struct SaturatedElement {
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  bool negative = false;

  friend bool operator==(const SaturatedElement&, const SaturatedElement&) = default;
};

struct GemmResult {
  EncodedMatrix c;
  // Elements whose accumulator overflowed; their value is the signed f_max pattern.
  std::vector<SaturatedElement> saturated;
};

// C[i][j] = dot(row i of a, column j of b), one rounding per element.
GemmResult gemm(const EncodedMatrix& a, const EncodedMatrix& b, const EngineConfig& cfg);

// Sum in the accumulator, divide by the count there, convert once.
Bits average_pool(std::span<const Bits> values, const EngineConfig& cfg);

// Shift-in term for a single operand (no multiply): posits use their own
// significand, log values go through the p table.
LinearTerm linear_term(const DecodedNumber& x, const EngineConfig& cfg);

// Patterns decoded to double (log values approximate). Infinity maps to +-inf.
Eigen::MatrixXd to_double(const EncodedMatrix& m);

}  // namespace klf
