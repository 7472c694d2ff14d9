#include "klf/stimulus.hpp"

#include "klf/logcodec.hpp"

namespace klf {

NormalStimulus::NormalStimulus(const FormatConfig& format, std::uint64_t seed)
    : format_(format), rng_(seed) {
  if (const auto* posit = std::get_if<PositConfig>(&format)) table_ = oracle::value_table(*posit);
}

NormalStimulus::Draw NormalStimulus::draw() {
  Draw d;
  d.real = normal_(rng_);
  if (table_) {
    d.bits = table_->round(d.real);
  } else {
    d.bits = encode_log_value(DyadicValue::from_double(d.real), std::get<LogConfig>(format_));
  }
  return d;
}

std::vector<Bits> NormalStimulus::vector(std::size_t length) {
  std::vector<Bits> out(length);
  for (auto& v : out) v = next();
  return out;
}

EncodedMatrix NormalStimulus::matrix(Eigen::Index rows, Eigen::Index cols) {
  EncodedMatrix m{format_, PatternMatrix(rows, cols)};
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m.data(i, j) = next();
  }
  return m;
}

}  // namespace klf
