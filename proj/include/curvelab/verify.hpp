#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace curvelab {

/// One row of a verification table.
struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Suites: "imposs", "quad", "twostep", "local", "nogo", or "all".
bool is_known_suite(std::string_view suite);

/// `search_samples` bounds the witness search run by the nogo suite.
std::vector<CheckResult> run_verify_suite(std::string_view suite, std::uint64_t seed,
                                          std::size_t search_samples = 20000);

void print_check_table(std::ostream& out, const std::vector<CheckResult>& checks);

}  // namespace curvelab
