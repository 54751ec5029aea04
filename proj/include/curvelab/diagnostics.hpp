#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "curvelab/iterators.hpp"

namespace curvelab {

/// Absolute slack applied by every verdict. Forward differences decay
/// geometrically, so a zero tolerance would flag rounding noise.
inline constexpr double kDefaultTolerance = 1e-10;

struct CurveReport {
  std::vector<double> deltas;        // f(x_n) - f(x_{n+1})
  std::vector<double> second_diffs;  // deltas[n] - deltas[n+1]
  bool monotone_values = true;
  bool convex_curve = true;
  std::optional<std::size_t> first_convexity_violation;
  bool gradnorm_monotone = true;
  double tolerance = kDefaultTolerance;
};

/// Forward-difference analysis of a value sequence. A sequence is convex iff
/// its forward differences are nonincreasing, so the verdict is read off the
/// second differences. `gradnorms` may be empty; otherwise it must have the
/// same length as `values`.
CurveReport analyze_curve(std::span<const double> values, std::span<const double> gradnorms,
                          double tolerance = kDefaultTolerance);

CurveReport analyze_curve(const Trajectory& trajectory, double tolerance = kDefaultTolerance);

/// Compares the second difference of values with the gradient-norm drop it
/// would be bounded by:
///   lhs = D_n - D_{n+1},  rhs = eta (1 - eta L / 2) (|g_{n+1}|^2 - |g_{n+2}|^2).
/// violated means lhs < rhs by more than the tolerance.
struct NogoGapReport {
  std::size_t index = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  bool violated = false;
  double tolerance = kDefaultTolerance;
};

NogoGapReport nogo_gap(const Trajectory& trajectory, double L, std::size_t n,
                       double tolerance = kDefaultTolerance);

enum class Regime {
  kConvexGuaranteed,  // eta <= 1.75 / L
  kGradnormOnly,      // 1.75 / L < eta <= 2 / L
  kUnstable,          // eta > 2 / L
};

std::string_view to_string(Regime regime) noexcept;

Regime threshold_report(double L, double eta);

}  // namespace curvelab
