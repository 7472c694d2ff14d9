#include "klf/decimal.hpp"
#include "klf/errors.hpp"
#include "klf/linalg.hpp"
#include "klf/matrix_io.hpp"
#include "klf/oracle.hpp"
#include "klf/posit.hpp"
#include "klf/stimulus.hpp"

#include <doctest.h>

#include <sstream>

using namespace klf;

namespace {

EncodedMatrix identity(const FormatConfig& format, Eigen::Index n) {
  EncodedMatrix m{format, PatternMatrix::Constant(n, n, zero_pattern(format))};
  const Bits one = encode_value(DyadicValue::from_int(1), format);
  for (Eigen::Index i = 0; i < n; ++i) m.data(i, i) = one;
  return m;
}

}  // namespace

TEST_CASE("identity gemm") {
  for (const char* d : {"posit8es1", "log8es1-5-5-7", "posit16es1"}) {
    const FormatConfig format = parse_format(d);
    const EngineConfig engine = make_engine(format);
    NormalStimulus stim(format, 2);
    const EncodedMatrix a = stim.matrix(5, 7);
    const GemmResult left = gemm(identity(format, 5), a, engine);
    const GemmResult right = gemm(a, identity(format, 7), engine);
    CHECK(left.c.data == a.data);
    CHECK(right.c.data == a.data);
    CHECK(left.saturated.empty());
  }
}

TEST_CASE("gemm elements are dot products") {
  const FormatConfig format = PositConfig{8, 1};
  const EngineConfig engine = make_engine(format);
  NormalStimulus stim(format, 4);
  const EncodedMatrix a = stim.matrix(6, 40);
  const EncodedMatrix b = stim.matrix(40, 3);
  const GemmResult r = gemm(a, b, engine);
  for (Eigen::Index i = 0; i < 6; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) {
      std::vector<Bits> row(a.data.row(i).begin(), a.data.row(i).end());
      std::vector<Bits> col(b.data.col(j).begin(), b.data.col(j).end());
      CHECK(r.c.data(i, j) == dot(row, col, engine));
    }
  }
  CHECK_THROWS_AS(gemm(a, a, engine), ShapeError);
  const EncodedMatrix wrong{parse_format("posit8es0"), b.data};
  CHECK_THROWS_AS(gemm(a, wrong, engine), FormatError);
}

TEST_CASE("saturated elements are reported") {
  const FormatConfig format = PositConfig{8, 1};
  const EngineConfig engine = make_engine(format);
  EncodedMatrix a{format, PatternMatrix::Constant(2, 3, 0x40)};
  a.data.row(1).setConstant(0x7f);
  EncodedMatrix b{format, PatternMatrix::Constant(3, 2, 0xc0)};
  b.data.col(0) << 0x40, 0x00, 0x00;
  const GemmResult r = gemm(a, b, engine);
  REQUIRE(r.saturated.size() == 1);
  CHECK(r.saturated[0] == SaturatedElement{1, 1, true});
  CHECK(r.c.data(1, 1) == max_pattern(format, true));
  CHECK(r.c.data(0, 0) == 0x40);
  CHECK(r.c.data(1, 0) == 0x7f);
}

TEST_CASE("text matrices") {
  const FormatConfig format = PositConfig{8, 1};
  std::istringstream in("2 3\n1 -1 0.5\n0 1e9 -0.0001\n");
  const EncodedMatrix m = read_text_matrix(in, format);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m.data(0, 0) == 0x40);
  CHECK(m.data(0, 1) == 0xc0);
  CHECK(m.data(1, 0) == 0x00);
  CHECK(m.data(1, 1) == 0x7f);
  CHECK(m.data(1, 2) == 0xff);
  std::istringstream short_in("2 2\n1 2 3\n");
  CHECK_THROWS_AS(read_text_matrix(short_in, format), FormatError);
  std::istringstream long_in("1 1\n1 2\n");
  CHECK_THROWS_AS(read_text_matrix(long_in, format), FormatError);
  std::istringstream vec("1 2\n3\n");
  CHECK(read_vector(vec, format).size() == 3);
}

TEST_CASE("binary matrices round-trip") {
  for (const char* d : {"posit8es1", "posit16es1", "logieee5e10-11-11-10"}) {
    const FormatConfig format = parse_format(d);
    NormalStimulus stim(format, 6);
    const EncodedMatrix m = stim.matrix(4, 9);
    std::stringstream buf;
    write_binary_matrix(buf, m);
    const std::string bytes = buf.str();
    CHECK(bytes.substr(0, 4) == "KLF1");
    const std::size_t elem = word_bits(format) > 8 ? 2 : 1;
    CHECK(bytes.size() == 16 + std::string(d).size() + 36 * elem);
    const EncodedMatrix back = read_binary_matrix(buf);
    CHECK(back.format == format);
    CHECK(back.data == m.data);
  }
  std::istringstream bad("XXXX");
  CHECK_THROWS_AS(read_binary_matrix(bad), FormatError);
}

TEST_CASE("decimal conversion of values") {
  const FormatConfig posit = PositConfig{8, 1};
  CHECK(describe_value(0x40, posit) == "1");
  CHECK(describe_value(0x7f, posit) == "4096");
  CHECK(describe_value(0x80, posit) == "inf");
  CHECK(describe_value(0x00, posit) == "0");
  CHECK(hex_pattern(0x0a, posit) == "0a");
  const FormatConfig log = parse_format("log8es1-5-5-7");
  CHECK(describe_value(0x40, log) == "2^0");
  CHECK(describe_value(0xc0, log) == "-2^0");
  CHECK(describe_value(0x01, log) == "2^-12");
  CHECK(describe_value(0x80, log) == "inf");
  const FormatConfig ieee = parse_format("logieee5e10-11-11-10");
  CHECK(describe_value(0x7c01, ieee) == "nan");
  CHECK(hex_pattern(0x3c00, ieee) == "3c00");
  CHECK(encode_value(parse_decimal("1.0"), posit) == 0x40);
  CHECK(encode_value(parse_decimal("1.0"), log) == 0x40);
}

TEST_CASE("patterns to doubles") {
  const FormatConfig format = PositConfig{8, 1};
  EncodedMatrix m{format, PatternMatrix(1, 3)};
  m.data << 0x40, 0x80, 0xb8;
  const Eigen::MatrixXd d = to_double(m);
  CHECK(d(0, 0) == 1.0);
  CHECK(std::isinf(d(0, 1)));
  CHECK(d(0, 2) == -1.5);
}

TEST_CASE("16-bit gemm agrees with exact products and one rounding") {
  const FormatConfig format = PositConfig{16, 1};
  const EngineConfig engine = make_engine(format);
  const auto table = oracle::value_table(PositConfig{16, 1});
  NormalStimulus stim(format, 16);
  for (int t = 0; t < 100; ++t) {
    const EncodedMatrix a = stim.matrix(8, 32);
    const EncodedMatrix b = stim.matrix(32, 8);
    const GemmResult r = gemm(a, b, engine);
    for (Eigen::Index i = 0; i < 8; ++i) {
      for (Eigen::Index j = 0; j < 8; ++j) {
        std::vector<DyadicValue> row;
        std::vector<DyadicValue> col;
        for (Eigen::Index k = 0; k < 32; ++k) {
          row.push_back(table->value_of(a.data(i, k)));
          col.push_back(table->value_of(b.data(k, j)));
        }
        CHECK(r.c.data(i, j) == table->round(oracle::exact_dot(row, col)));
      }
    }
  }
}
