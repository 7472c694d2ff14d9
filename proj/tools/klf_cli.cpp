#include "klf/decimal.hpp"
#include "klf/errors.hpp"
#include "klf/format.hpp"
#include "klf/linalg.hpp"
#include "klf/logcodec.hpp"
#include "klf/mac.hpp"
#include "klf/matrix_io.hpp"
#include "klf/posit.hpp"
#include "klf/systolic.hpp"
#include "klf/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <bit>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kShape = 3, kSaturation = 4, kVerifyFailed = 5 };

klf::MacMode mode_for(const klf::FormatConfig& format, const std::string& name) {
  if (name.empty()) return klf::is_log(format) ? klf::MacMode::elma : klf::MacMode::ema;
  if (name == "ema") return klf::MacMode::ema;
  if (name == "elma") return klf::MacMode::elma;
  throw klf::FormatError("unknown mode '" + name + "' (expected ema or elma)");
}

klf::EngineConfig engine_for(const klf::FormatConfig& format, const std::string& mode,
                             int bias_m, int bias_n) {
  klf::EngineConfig engine = klf::make_engine(format, bias_m, bias_n);
  if (mode_for(format, mode) != engine.mode) {
    throw klf::FormatError("mode '" + mode + "' does not apply to " + klf::to_string(format));
  }
  return engine;
}

std::vector<klf::Bits> load_vector(const std::string& path, const klf::FormatConfig& format) {
  std::ifstream in(path);
  if (!in) throw klf::FormatError("cannot open " + path);
  return klf::read_vector(in, format);
}

std::string binary(std::uint64_t v, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if ((v >> i) & 1) s[static_cast<std::size_t>(width - 1 - i)] = '1';
  }
  return s;
}

int cmd_tables(const std::vector<std::string>& descriptors) {
  std::vector<klf::FormatConfig> formats;
  for (const auto& d : descriptors) formats.push_back(klf::parse_format(d));
  std::cout << std::left << std::setw(24) << "format" << std::right << std::setw(6) << "bits"
            << std::setw(10) << "range_db" << std::setw(10) << "frac_bits" << '\n';
  for (const auto& f : formats) {
    std::ostringstream db;
    db << std::fixed << std::setprecision(1) << klf::dynamic_range_db(f);
    std::cout << std::left << std::setw(24) << klf::to_string(f) << std::right << std::setw(6)
              << klf::word_bits(f) << std::setw(10) << db.str() << std::setw(10)
              << klf::max_fraction_bits(f) << '\n';
  }
  return kOk;
}

int cmd_enumerate(const std::string& descriptor) {
  const klf::FormatConfig format = klf::parse_format(descriptor);
  const klf::Bits count = klf::Bits{1} << klf::word_bits(format);
  std::string out;
  for (klf::Bits p = 0; p < count; ++p) {
    out += klf::hex_pattern(p, format);
    out += ' ';
    out += klf::describe_value(p, format);
    out += '\n';
  }
  std::cout << out;
  return kOk;
}

int cmd_convert(const std::string& descriptor, const std::string& value) {
  const klf::FormatConfig format = klf::parse_format(descriptor);
  const klf::Bits p = klf::encode_value(klf::parse_decimal(value), format);
  std::cout << klf::hex_pattern(p, format) << ' ' << klf::describe_value(p, format) << '\n';
  return kOk;
}

int cmd_dot(const std::string& descriptor, const std::string& mode, const std::string& file_a,
            const std::string& file_b, int bias_m, int bias_n) {
  const klf::FormatConfig format = klf::parse_format(descriptor);
  const klf::EngineConfig engine = engine_for(format, mode, bias_m, bias_n);
  const auto a = load_vector(file_a, format);
  const auto b = load_vector(file_b, format);
  const klf::Bits p = klf::dot(a, b, engine);
  std::cout << klf::hex_pattern(p, format) << ' ' << klf::describe_value(p, format) << '\n';
  return kOk;
}

int cmd_gemm(const std::string& descriptor, const std::string& mode, const std::string& file_a,
             const std::string& file_b, const std::string& engine_name, const std::string& out_path,
             int converters) {
  const klf::FormatConfig format = klf::parse_format(descriptor);
  const klf::EngineConfig engine = engine_for(format, mode, 0, 0);
  const klf::EncodedMatrix a = klf::load_matrix(file_a, format);
  const klf::EncodedMatrix b = klf::load_matrix(file_b, format);
  klf::GemmResult result;
  if (engine_name == "systolic") {
    klf::ArrayConfig array;
    array.engine = engine;
    array.output_converters = converters;
    const klf::SystolicRun run = klf::run_gemm(a, b, array);
    result = run.result;
    const klf::ActivityReport& act = klf::activity_report(run);
    std::cout << "cycles " << run.cycles << " (compute " << run.compute_cycles << ", drain "
              << run.drain_cycles << ")\n"
              << "activity multiplies " << act.multiplies << " shifts " << act.shifts
              << " wide_adds " << act.wide_adds << " conversions " << act.conversions
              << " decoder_invocations " << act.decoder_invocations << '\n';
  } else {
    result = klf::gemm(a, b, engine);
  }
  std::cout << "saturated " << result.saturated.size() << '\n';
  for (const auto& s : result.saturated) {
    std::cout << "  " << s.row << ' ' << s.col << ' ' << (s.negative ? '-' : '+') << '\n';
  }
  if (out_path.empty()) {
    for (Eigen::Index i = 0; i < result.c.rows(); ++i) {
      for (Eigen::Index j = 0; j < result.c.cols(); ++j) {
        std::cout << (j ? " " : "") << klf::hex_pattern(result.c.data(i, j), format);
      }
      std::cout << '\n';
    }
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw klf::FormatError("cannot write " + out_path);
    klf::write_binary_matrix(out, result.c);
  }
  return kOk;
}

int cmd_verify(const std::string& descriptor, bool exhaustive, long corrupt_q,
               std::uint64_t seed, int trials) {
  const klf::FormatConfig format = klf::parse_format(descriptor);
  klf::VerifyOptions options;
  options.exhaustive = exhaustive;
  options.seed = seed;
  options.random_trials = trials;
  std::vector<klf::CheckResult> results;
  if (const auto* log = std::get_if<klf::LogConfig>(&format)) {
    klf::PqTables tables = klf::build_tables(*log);
    if (corrupt_q >= 0) {
      if (static_cast<std::size_t>(corrupt_q) >= tables.q.size()) {
        throw klf::FormatError("--corrupt-q index out of range");
      }
      // One unit in the last place of the payload fraction.
      tables.q[static_cast<std::size_t>(corrupt_q)] += std::uint64_t{1}
                                                      << (log->gamma - klf::fraction_width(*log));
    }
    results = klf::run_verification(format, options, &tables);
  } else {
    if (corrupt_q >= 0) throw klf::FormatError("--corrupt-q needs a log format");
    results = klf::run_verification(format, options);
  }
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) std::cout << " (" << r.detail << ')';
    std::cout << '\n';
  }
  std::cout << (all ? "all checks passed" : "verification failed") << '\n';
  return all ? kOk : kVerifyFailed;
}

int cmd_luts(const std::string& descriptor) {
  const klf::FormatConfig format = klf::parse_format(descriptor);
  const auto* log = std::get_if<klf::LogConfig>(&format);
  if (log == nullptr) throw klf::FormatError("luts needs a log format");
  const klf::PqTables t = klf::build_tables(*log);
  const int f = klf::fraction_width(*log);
  std::string out = "p " + std::to_string(t.p.size()) + ' ' + std::to_string(t.p_bits()) + '\n';
  for (std::size_t i = 0; i < t.p.size(); ++i) {
    out += binary(i, f) + ' ' + binary(t.p[i], t.p_bits()) + '\n';
  }
  int q_width = t.q_bits();
  for (std::uint64_t e : t.q) q_width = std::max(q_width, static_cast<int>(std::bit_width(e)));
  out += "q " + std::to_string(t.q.size()) + ' ' + std::to_string(t.q_bits()) + '\n';
  for (std::size_t i = 0; i < t.q.size(); ++i) {
    out += binary(i, log->beta) + ' ' + binary(t.q[i], q_width) + '\n';
  }
  std::cout << out;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Posit and tapered-log arithmetic with exact accumulation"};
  app.require_subcommand(1);
  std::function<int()> action;

  auto* tables = app.add_subcommand("tables", "Word bits, dynamic range and precision per format");
  std::vector<std::string> table_formats;
  tables->add_option("formats", table_formats, "Format descriptors")->required();
  tables->callback([&] { action = [&] { return cmd_tables(table_formats); }; });

  std::string format;
  auto* enumerate = app.add_subcommand("enumerate", "List every pattern with its value");
  enumerate->add_option("format", format)->required();
  enumerate->callback([&] { action = [&] { return cmd_enumerate(format); }; });

  std::string value;
  auto* convert = app.add_subcommand("convert", "Round a decimal value into a format");
  convert->add_option("format", format)->required();
  convert->add_option("value", value)->required();
  convert->callback([&] { action = [&] { return cmd_convert(format, value); }; });

  std::string mode;
  std::string file_a;
  std::string file_b;
  int bias_m = 0;
  int bias_n = 0;
  auto* dot = app.add_subcommand("dot", "Dot product of two vector files, one rounding");
  dot->add_option("format", format)->required();
  dot->add_option("a", file_a)->required()->check(CLI::ExistingFile);
  dot->add_option("b", file_b)->required()->check(CLI::ExistingFile);
  dot->add_option("--mode", mode, "ema or elma (default follows the format)");
  dot->add_option("--bias-m", bias_m, "Input exponent bias");
  dot->add_option("--bias-n", bias_n, "Output exponent bias");
  dot->callback([&] {
    action = [&] { return cmd_dot(format, mode, file_a, file_b, bias_m, bias_n); };
  });

  std::string engine = "reference";
  std::string out_path;
  int converters = 32;
  auto* gemm = app.add_subcommand("gemm", "Matrix product of two matrix files");
  gemm->add_option("format", format)->required();
  gemm->add_option("a", file_a)->required()->check(CLI::ExistingFile);
  gemm->add_option("b", file_b)->required()->check(CLI::ExistingFile);
  gemm->add_option("--mode", mode, "ema or elma (default follows the format)");
  gemm->add_option("--engine", engine)->check(CLI::IsMember({"reference", "systolic"}));
  gemm->add_option("--out", out_path, "Write the result as a binary matrix");
  gemm->add_option("--converters", converters, "Output converters of the systolic array")
      ->check(CLI::PositiveNumber);
  gemm->callback([&] {
    action = [&] { return cmd_gemm(format, mode, file_a, file_b, engine, out_path, converters); };
  });

  bool exhaustive = false;
  long corrupt_q = -1;
  std::uint64_t seed = 1;
  int trials = 500;
  auto* verify = app.add_subcommand("verify", "Run the invariant suites for a format");
  verify->add_option("format", format)->required();
  verify->add_flag("--exhaustive", exhaustive, "Visit every pattern");
  verify->add_option("--corrupt-q", corrupt_q, "Add one payload ulp to a q-table entry");
  verify->add_option("--seed", seed);
  verify->add_option("--trials", trials)->check(CLI::PositiveNumber);
  verify->callback([&] {
    action = [&] { return cmd_verify(format, exhaustive, corrupt_q, seed, trials); };
  });

  auto* luts = app.add_subcommand("luts", "Dump the p and q tables of a log format");
  luts->add_option("format", format)->required();
  luts->callback([&] { action = [&] { return cmd_luts(format); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    return action();
  } catch (const klf::ShapeError& e) {
    std::cerr << "shape mismatch: " << e.what() << '\n';
    return kShape;
  } catch (const klf::SaturationError& e) {
    std::cerr << "saturation: " << e.what() << '\n';
    return kSaturation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
