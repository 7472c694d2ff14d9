#pragma once

#include "klf/linalg.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace klf {

// Text: first line "rows cols", then rows of space-separated decimal values,
// each rounded to nearest-even in the target format.
EncodedMatrix read_text_matrix(std::istream& in, const FormatConfig& format);

// Binary: "KLF1", u32 rows, u32 cols, u32 descriptor length, descriptor bytes,
// then row-major elements (1 byte for N <= 8, else 2 bytes little-endian).
void write_binary_matrix(std::ostream& out, const EncodedMatrix& m);
EncodedMatrix read_binary_matrix(std::istream& in);

// Detects the binary magic, otherwise parses text into `format`.
EncodedMatrix load_matrix(const std::string& path, const FormatConfig& format);

// Whitespace-separated decimal values, encoded into `format`.
std::vector<Bits> read_vector(std::istream& in, const FormatConfig& format);

}  // namespace klf
