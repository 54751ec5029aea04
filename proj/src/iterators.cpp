#include "curvelab/iterators.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "curvelab/error.hpp"

namespace curvelab {

std::string_view to_string(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::kGradientDescent: return "gd";
    case Scheme::kInexact: return "inexact";
    case Scheme::kTwoStep: return "twostep";
  }
  return "unknown";
}

double norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

void validate(const NoiseSchedule& noise) {
  if (!(noise.delta >= 0.0 && noise.delta < 1.0)) {
    throw Error(ErrorCode::kInvalidSchedule,
                fmt::format("noise delta must lie in [0, 1), got {}", noise.delta));
  }
  for (std::size_t n = 0; n < noise.epsilons.size(); ++n) {
    if (!(std::abs(noise.epsilons[n]) <= noise.delta)) {
      throw Error(ErrorCode::kInvalidSchedule,
                  fmt::format("|epsilon_{}| = {} exceeds delta = {}", n,
                              std::abs(noise.epsilons[n]), noise.delta));
    }
  }
}

namespace {

bool finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void check_common(const Objective& objective, std::span<const double> x0, double eta,
                  std::size_t steps) {
  if (x0.size() != objective.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("x0 has dimension {}, objective {}", x0.size(),
                            objective.dimension()));
  }
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::kInvalidConfig, fmt::format("stepsize must be finite and >= 0, got {}", eta));
  }
  if (steps < 1) throw Error(ErrorCode::kInvalidConfig, "steps must be >= 1");
  if (!finite(x0)) throw Error(ErrorCode::kInvalidConfig, "x0 has a nonfinite entry");
}

// Shared driver. `advance(n, x, g, next)` writes x_{n+1} given x_n and g_n.
// Stops at the first iterate whose coordinates, value or gradient are nonfinite.
template <typename Advance>
RunResult iterate(const Objective& objective, std::span<const double> x0, double eta,
                  std::size_t steps, Scheme scheme, Advance&& advance) {
  const std::size_t d = objective.dimension();
  RunResult result;
  Trajectory& traj = result.trajectory;
  traj.stepsize = eta;
  traj.scheme = scheme;
  traj.points.reserve(steps + 1);
  traj.values.reserve(steps + 1);
  traj.gradnorms.reserve(steps + 1);

  Vector x(x0.begin(), x0.end());
  Vector g(d);
  Vector next(d);
  for (std::size_t n = 0;; ++n) {
    const double f = objective.value(x);
    objective.gradient(x, g);
    if (!std::isfinite(f) || !finite(g)) {
      result.divergence = DivergenceReport{
          n, fmt::format("nonfinite {} at iterate {}", std::isfinite(f) ? "gradient" : "value", n)};
      return result;
    }
    traj.points.push_back(x);
    traj.values.push_back(f);
    traj.gradnorms.push_back(norm(g));
    if (n == steps) break;

    advance(n, std::span<const double>(x), std::span<const double>(g), std::span<double>(next));
    if (!finite(next)) {
      result.divergence =
          DivergenceReport{n + 1, fmt::format("nonfinite iterate at index {}", n + 1)};
      return result;
    }
    x.swap(next);
  }
  return result;
}

}  // namespace

RunResult run_gd(const Objective& objective, std::span<const double> x0, double eta,
                 std::size_t steps) {
  check_common(objective, x0, eta, steps);
  return iterate(objective, x0, eta, steps, Scheme::kGradientDescent,
                 [eta](std::size_t, std::span<const double> x, std::span<const double> g,
                       std::span<double> next) {
                   for (std::size_t i = 0; i < x.size(); ++i) next[i] = std::fma(-eta, g[i], x[i]);
                 });
}

RunResult run_inexact_gd(const Objective& objective, std::span<const double> x0, double eta,
                         const NoiseSchedule& noise, std::size_t steps) {
  check_common(objective, x0, eta, steps);
  validate(noise);
  if (noise.epsilons.size() < steps) {
    throw Error(ErrorCode::kInvalidSchedule,
                fmt::format("schedule has {} multipliers but {} steps were requested",
                            noise.epsilons.size(), steps));
  }
  return iterate(objective, x0, eta, steps, Scheme::kInexact,
                 [eta, &noise](std::size_t n, std::span<const double> x,
                               std::span<const double> g, std::span<double> next) {
                   const double eps = noise.epsilons[n];
                   for (std::size_t i = 0; i < x.size(); ++i) {
                     next[i] = std::fma(-eta, g[i] + eps * g[i], x[i]);
                   }
                 });
}

RunResult run_two_step(const Objective& objective, std::span<const double> x0,
                       const TwoStepConfig& config, std::size_t steps) {
  check_common(objective, x0, config.eta, steps);
  if (config.x_minus1.size() != objective.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("x_minus1 has dimension {}, objective {}", config.x_minus1.size(),
                            objective.dimension()));
  }
  if (!std::isfinite(config.theta)) {
    throw Error(ErrorCode::kInvalidConfig, "theta must be finite");
  }
  Vector previous = objective.gradient(config.x_minus1);
  return iterate(objective, x0, config.eta, steps, Scheme::kTwoStep,
                 [&config, &previous](std::size_t, std::span<const double> x,
                                      std::span<const double> g, std::span<double> next) {
                   for (std::size_t i = 0; i < x.size(); ++i) {
                     next[i] = std::fma(-config.theta, g[i] - previous[i],
                                        std::fma(-config.eta, g[i], x[i]));
                   }
                   std::copy(g.begin(), g.end(), previous.begin());
                 });
}

}  // namespace curvelab
