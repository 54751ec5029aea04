#include "curvelab/diagnostics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "curvelab/error.hpp"

namespace curvelab {

CurveReport analyze_curve(std::span<const double> values, std::span<const double> gradnorms,
                          double tolerance) {
  if (values.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                fmt::format("curve analysis needs at least 2 values, got {}", values.size()));
  }
  if (!gradnorms.empty() && gradnorms.size() != values.size()) {
    throw Error(ErrorCode::kInsufficientData,
                fmt::format("{} gradient norms for {} values", gradnorms.size(), values.size()));
  }
  if (!(tolerance >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "tolerance must be nonnegative");
  }

  CurveReport report;
  report.tolerance = tolerance;
  report.deltas.resize(values.size() - 1);
  for (std::size_t n = 0; n + 1 < values.size(); ++n) {
    report.deltas[n] = values[n] - values[n + 1];
    if (report.deltas[n] < -tolerance) report.monotone_values = false;
  }
  if (report.deltas.size() >= 2) {
    report.second_diffs.resize(report.deltas.size() - 1);
    for (std::size_t n = 0; n + 1 < report.deltas.size(); ++n) {
      report.second_diffs[n] = report.deltas[n] - report.deltas[n + 1];
      if (report.second_diffs[n] < -tolerance && !report.first_convexity_violation) {
        report.first_convexity_violation = n;
      }
    }
  }
  report.convex_curve = !report.first_convexity_violation.has_value();

  for (std::size_t n = 0; n + 1 < gradnorms.size(); ++n) {
    if (gradnorms[n + 1] > gradnorms[n] + tolerance) {
      report.gradnorm_monotone = false;
      break;
    }
  }
  return report;
}

CurveReport analyze_curve(const Trajectory& trajectory, double tolerance) {
  return analyze_curve(trajectory.values, trajectory.gradnorms, tolerance);
}

NogoGapReport nogo_gap(const Trajectory& trajectory, double L, std::size_t n, double tolerance) {
  const double eta = trajectory.stepsize;
  if (!(L > 0.0)) throw Error(ErrorCode::kInvalidConfig, fmt::format("L must be positive, got {}", L));
  if (!(eta > 0.0)) throw Error(ErrorCode::kOutOfRegime, "no-go gap needs a positive stepsize");
  if (eta >= 2.0 / L) {
    throw Error(ErrorCode::kOutOfRegime,
                fmt::format("stepsize {} is not below 2/L = {}", eta, 2.0 / L));
  }
  if (trajectory.values.size() < n + 3 || trajectory.gradnorms.size() < n + 3) {
    throw Error(ErrorCode::kInsufficientData,
                fmt::format("no-go gap at index {} needs {} points, trajectory has {}", n, n + 3,
                            trajectory.values.size()));
  }
  const auto& v = trajectory.values;
  const auto& gn = trajectory.gradnorms;

  NogoGapReport report;
  report.index = n;
  report.tolerance = tolerance;
  report.lhs = (v[n] - v[n + 1]) - (v[n + 1] - v[n + 2]);
  report.rhs = eta * (1.0 - eta * L / 2.0) * (gn[n + 1] * gn[n + 1] - gn[n + 2] * gn[n + 2]);
  report.gap = report.lhs - report.rhs;
  report.violated = report.gap < -tolerance;
  return report;
}

std::string_view to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::kConvexGuaranteed: return "convex_guaranteed";
    case Regime::kGradnormOnly: return "gradnorm_only";
    case Regime::kUnstable: return "unstable";
  }
  return "unknown";
}

Regime threshold_report(double L, double eta) {
  if (!(L > 0.0) || !(eta > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                fmt::format("threshold report needs L > 0 and eta > 0 (L={}, eta={})", L, eta));
  }
  if (eta <= 1.75 / L) return Regime::kConvexGuaranteed;
  if (eta <= 2.0 / L) return Regime::kGradnormOnly;
  return Regime::kUnstable;
}

}  // namespace curvelab
