#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curvelab/objectives.hpp"

namespace curvelab {

enum class Scheme { kGradientDescent, kInexact, kTwoStep };

std::string_view to_string(Scheme scheme) noexcept;

/// Iterates x_0..x_N of one constant-stepsize run, with f and |grad f| at each.
struct Trajectory {
  std::vector<Vector> points;
  std::vector<double> values;
  std::vector<double> gradnorms;
  double stepsize = 0.0;
  Scheme scheme = Scheme::kGradientDescent;

  std::size_t size() const { return points.size(); }
};

/// Where a run stopped because an iterate, value or gradient became nonfinite.
/// The trajectory keeps every finite iterate before `failing_index`.
struct DivergenceReport {
  std::size_t failing_index = 0;
  std::string reason;
};

struct RunResult {
  Trajectory trajectory;
  std::optional<DivergenceReport> divergence;

  bool diverged() const { return divergence.has_value(); }
};

/// Relative gradient error e_n = epsilons[n] * grad f(x_n), |epsilons[n]| <= delta.
struct NoiseSchedule {
  double delta = 0.0;
  std::vector<double> epsilons;
};

void validate(const NoiseSchedule& noise);

/// x_{n+1} = x_n - eta g_n - theta (g_n - g_{n-1}), seeded with x_{-1}.
struct TwoStepConfig {
  double eta = 0.0;
  double theta = 0.0;
  Vector x_minus1;
};

RunResult run_gd(const Objective& objective, std::span<const double> x0, double eta,
                 std::size_t steps);

RunResult run_inexact_gd(const Objective& objective, std::span<const double> x0, double eta,
                         const NoiseSchedule& noise, std::size_t steps);

// x_{-1} drives the first update only; the trajectory starts at x_0.
RunResult run_two_step(const Objective& objective, std::span<const double> x0,
                       const TwoStepConfig& config, std::size_t steps);

double norm(std::span<const double> v);

}  // namespace curvelab
