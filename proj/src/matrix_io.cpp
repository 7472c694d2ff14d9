#include "klf/matrix_io.hpp"

#include "klf/decimal.hpp"
#include "klf/errors.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>

namespace klf {

namespace {

constexpr std::array<char, 4> kMagic{'K', 'L', 'F', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw FormatError("truncated binary matrix");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

EncodedMatrix read_text_matrix(std::istream& in, const FormatConfig& format) {
  long rows = 0;
  long cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0) {
    throw FormatError("matrix text: expected 'rows cols' header");
  }
  EncodedMatrix m{format, PatternMatrix(rows, cols)};
  std::string token;
  for (long i = 0; i < rows; ++i) {
    for (long j = 0; j < cols; ++j) {
      if (!(in >> token)) throw FormatError("matrix text: too few values");
      m.data(i, j) = encode_value(parse_decimal(token), format);
    }
  }
  if (in >> token) throw FormatError("matrix text: trailing values after the last row");
  return m;
}

void write_binary_matrix(std::ostream& out, const EncodedMatrix& m) {
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  const std::string desc = to_string(m.format);
  put_u32(out, static_cast<std::uint32_t>(desc.size()));
  out.write(desc.data(), static_cast<std::streamsize>(desc.size()));
  const bool wide = word_bits(m.format) > 8;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const Bits v = m.data(i, j);
      out.put(static_cast<char>(v & 0xff));
      if (wide) out.put(static_cast<char>((v >> 8) & 0xff));
    }
  }
}

EncodedMatrix read_binary_matrix(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw FormatError("binary matrix: bad magic");
  }
  const std::uint32_t rows = get_u32(in);
  const std::uint32_t cols = get_u32(in);
  const std::uint32_t len = get_u32(in);
  if (len > 256) throw FormatError("binary matrix: descriptor too long");
  std::string desc(len, '\0');
  if (!in.read(desc.data(), len)) throw FormatError("truncated binary matrix");
  EncodedMatrix m{parse_format(desc), PatternMatrix(rows, cols)};
  const int n = word_bits(m.format);
  const Bits mask = (Bits{1} << n) - 1;
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t j = 0; j < cols; ++j) {
      unsigned char b[2] = {0, 0};
      if (!in.read(reinterpret_cast<char*>(b), n > 8 ? 2 : 1)) {
        throw FormatError("truncated binary matrix");
      }
      const Bits v = static_cast<Bits>(b[0]) | (static_cast<Bits>(b[1]) << 8);
      if ((v & ~mask) != 0) throw FormatError("binary matrix: element wider than the format");
      m.data(i, j) = v;
    }
  }
  return m;
}

EncodedMatrix load_matrix(const std::string& path, const FormatConfig& format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::array<char, 4> head{};
  in.read(head.data(), head.size());
  const bool binary = in.gcount() == 4 && head == kMagic;
  in.clear();
  in.seekg(0);
  if (binary) {
    EncodedMatrix m = read_binary_matrix(in);
    if (!(m.format == format)) {
      throw FormatError("'" + path + "' is encoded as " + to_string(m.format) + ", expected " +
                        to_string(format));
    }
    return m;
  }
  return read_text_matrix(in, format);
}

std::vector<Bits> read_vector(std::istream& in, const FormatConfig& format) {
  std::vector<Bits> out;
  std::string token;
  while (in >> token) out.push_back(encode_value(parse_decimal(token), format));
  return out;
}

}  // namespace klf
