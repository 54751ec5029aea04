#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "curvelab/iterators.hpp"
#include "curvelab/objectives.hpp"
#include "curvelab/serialization.hpp"

namespace curvelab::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitSuiteFailure = 1;
inline constexpr int kExitUsage = 2;

struct Options {
  std::string config;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
};

/// A single experiment as described by a `run` config file.
struct RunConfig {
  ObjectiveDescription objective;
  Scheme scheme = Scheme::kGradientDescent;
  Vector x0;
  double eta = 0.0;
  std::size_t steps = 0;
  std::optional<NoiseSchedule> noise;  // inexact only
  std::optional<double> theta;         // twostep only
  std::optional<Vector> x_minus1;      // twostep only
  double tolerance = 1e-10;
  std::string trajectory_file = "trajectory.csv";
  std::string report_file = "report.json";
};

/// Throws Error(kInvalidConfig) unless scheme-specific fields appear exactly
/// when the scheme needs them.
RunConfig run_config_from_json(const Json& j);

struct RunArtifacts {
  RunResult run;
  Json report;
};

RunArtifacts execute_run(const RunConfig& config);

int cmd_run(const Options& options, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& suite, const Options& options, std::ostream& out,
               std::ostream& err);
int cmd_sweep(const Options& options, std::ostream& out, std::ostream& err);
int cmd_search(const Options& options, std::ostream& out, std::ostream& err);
int cmd_replay(const Options& options, std::ostream& out, std::ostream& err);

/// Parses a grid: a number, an array, or {"from", "to", "count"} (inclusive).
std::vector<double> parse_grid(const Json& j);

}  // namespace curvelab::cli
