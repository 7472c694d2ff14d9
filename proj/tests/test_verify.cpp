#include "klf/logcodec.hpp"
#include "klf/verify.hpp"

#include <doctest.h>

using namespace klf;

TEST_CASE("verification suites pass") {
  VerifyOptions opt;
  opt.exhaustive = true;
  opt.random_trials = 50;
  for (const char* d : {"posit8es1", "posit7es1", "log8es1-5-5-7", "logieee5e10-11-11-10"}) {
    for (const CheckResult& r : run_verification(parse_format(d), opt)) {
      INFO(d, ": ", r.name, " ", r.detail);
      CHECK(r.passed);
    }
  }
}

TEST_CASE("a corrupted table fails verification") {
  const FormatConfig format = parse_format("log8es1-5-5-7");
  PqTables t = build_tables(std::get<LogConfig>(format));
  t.q[13] += 8;
  VerifyOptions opt;
  opt.random_trials = 20;
  bool any_failed = false;
  for (const CheckResult& r : run_verification(format, opt, &t)) any_failed = any_failed || !r.passed;
  CHECK(any_failed);
}
