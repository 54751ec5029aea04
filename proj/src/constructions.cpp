#include "curvelab/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "curvelab/error.hpp"

namespace curvelab {

namespace {

constexpr double kScanLow = 1e-6;
constexpr double kScanHigh = 4.0;
constexpr std::size_t kScanPoints = 4000;
constexpr double kBisectionWidth = 1e-12;

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidSpec, fmt::format("delta must lie in (0, 1), got {}", delta));
  }
}

}  // namespace

double s_function(double alpha, double delta) {
  // Expanded in alpha, using t0 + t1 = 2 and t0 t1 = 1 - delta^2:
  //   S = -2 delta + (2 + 2 delta - 2 delta^2) alpha - 2 (1 - delta^2) alpha^2
  //       + (1 - delta^2)^2 / 2 alpha^3,
  // so S(0) is exactly -2 delta.
  const double p = 1.0 - delta * delta;
  const double c1 = 2.0 + 2.0 * delta - 2.0 * delta * delta;
  const double c2 = -2.0 * p;
  const double c3 = 0.5 * p * p;
  return -2.0 * delta + alpha * (c1 + alpha * (c2 + alpha * c3));
}

double find_alpha_star(double delta) {
  require_delta(delta);

  double lo = 0.0;  // S(0) = -2 delta < 0
  double hi = std::numeric_limits<double>::quiet_NaN();
  const double ratio = std::pow(kScanHigh / kScanLow, 1.0 / double(kScanPoints - 1));
  double alpha = kScanLow;
  for (std::size_t k = 0; k < kScanPoints; ++k, alpha *= ratio) {
    if (k + 1 == kScanPoints) alpha = kScanHigh;
    if (s_function(alpha, delta) >= 0.0) {
      hi = alpha;
      break;
    }
    lo = alpha;
  }
  if (std::isnan(hi)) return lo;

  for (int iter = 0; iter < 200 && hi - lo > kBisectionWidth * std::min(1.0, hi); ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (s_function(mid, delta) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

ImpossibilityWitness certify_impossibility(double delta, double L, std::size_t grid_points) {
  require_delta(delta);
  if (!(L > 0.0)) throw Error(ErrorCode::kInvalidSpec, "L must be positive");

  ImpossibilityWitness witness;
  witness.delta = delta;
  witness.L = L;
  witness.alpha_star = find_alpha_star(delta);
  witness.alpha_grid.reserve(grid_points);
  for (std::size_t k = 1; k <= grid_points; ++k) {
    const double alpha = witness.alpha_star * double(k) / double(grid_points + 1);
    if (!(s_function(alpha, delta) < 0.0)) {
      throw Error(ErrorCode::kInconsistentWitness,
                  fmt::format("S({}) >= 0 below alpha* = {} for delta = {}", alpha,
                              witness.alpha_star, delta));
    }
    witness.alpha_grid.push_back(alpha);
  }
  return witness;
}

NoiseSchedule adversarial_schedule(double delta, std::size_t steps) {
  NoiseSchedule noise;
  noise.delta = delta;
  noise.epsilons.assign(std::max<std::size_t>(steps, 2), 0.0);
  noise.epsilons[0] = -delta;
  noise.epsilons[1] = delta;
  return noise;
}

ImpossibilityOutcome impossibility_experiment(double delta, double L, double x0, double eta,
                                              std::size_t steps, double tolerance) {
  require_delta(delta);
  if (x0 == 0.0) {
    throw Error(ErrorCode::kDegenerateStart, "x0 = 0 is a fixed point; there is no witness");
  }
  if (steps < 2) throw Error(ErrorCode::kInvalidConfig, "the schedule needs at least 2 steps");
  const double alpha_star = find_alpha_star(delta);
  if (!(eta > 0.0 && eta <= alpha_star / L)) {
    throw Error(ErrorCode::kOutOfRegime,
                fmt::format("eta = {} is outside the certified range (0, {}]", eta,
                            alpha_star / L));
  }
  const Objective objective = make_scaled_quadratic_1d(L);
  const Vector start{x0};
  ImpossibilityOutcome outcome{
      run_inexact_gd(objective, start, eta, adversarial_schedule(delta, steps), steps), {}};
  outcome.report = analyze_curve(outcome.run.trajectory, tolerance);
  return outcome;
}

ClosedFormDelta quadratic_delta_closed_form(const QuadraticSpec& spec, double eta, std::size_t n) {
  validate(spec);
  ClosedFormDelta out;
  double sum = 0.0;
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    const double lambda = spec.eigenvalues[i];
    const double y = spec.initial_coords[i];
    const double step = eta * lambda;
    if (step < 0.0 || step > 2.0) out.in_regime = false;
    const double contraction = (1.0 - step) * (1.0 - step);
    const double gamma = eta * lambda * lambda * (2.0 - step) * y * y;
    sum += gamma * std::pow(contraction, double(n));
  }
  out.value = 0.5 * sum;
  return out;
}

bool quadratic_divergence_check(const QuadraticSpec& spec, double eta, std::size_t steps) {
  validate(spec);
  const double top = spec.smoothness();
  if (!(top > 0.0) || !(eta > 2.0 / top)) {
    throw Error(ErrorCode::kOutOfRegime,
                fmt::format("divergence check needs eta > 2/L (eta = {}, L = {})", eta, top));
  }
  if (steps < 2) throw Error(ErrorCode::kInvalidConfig, "divergence check needs at least 2 steps");

  double dominant = 0.0;  // largest (1 - eta lambda)^2 over excited unstable modes
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    const double step = eta * spec.eigenvalues[i];
    if (step > 2.0 && spec.initial_coords[i] != 0.0) {
      dominant = std::max(dominant, (1.0 - step) * (1.0 - step));
    }
  }
  if (dominant == 0.0) {
    throw Error(ErrorCode::kInapplicable,
                "every mode with eta*lambda > 2 starts at zero; GD cannot diverge");
  }

  const RunResult run = run_gd(make_quadratic(spec), spec.initial_coords, eta, steps);
  if (run.diverged()) return true;

  const auto& v = run.trajectory.values;
  const std::size_t last = v.size() - 1;
  if (!(v[last] > v.front()) || !(v[last - 1] > 0.0)) return false;
  const double ratio = v[last] / v[last - 1];
  return ratio > 1.0 && std::abs(ratio - dominant) <= 0.5 * (dominant - 1.0);
}

TwoStepConfig twostep_counterexample_config(double L, double eta, const Vector& x0) {
  if (!(L > 0.0)) throw Error(ErrorCode::kInvalidSpec, "L must be positive");
  const double lower = 2.0 / (3.0 * L);
  const double upper = 1.0 / L;
  if (!(eta >= lower && eta < upper)) {
    throw Error(ErrorCode::kOutOfInterval,
                fmt::format("eta = {} is outside [{}, {})", eta, lower, upper));
  }
  return TwoStepConfig{.eta = eta, .theta = upper - eta, .x_minus1 = x0};
}

double twostep_predicted_gap(double L, double eta, double x1) {
  const double t = eta * L;
  return 0.5 * L * t * (2.0 - t) * x1 * x1;
}

double effective_threshold(const HessianBound& bound) {
  validate(bound);
  const double l_eff = bound.effective_smoothness();
  if (l_eff == 0.0) {
    throw Error(ErrorCode::kUnboundedStepsize,
                "L_eff = 0: f is affine on the sublevel set, every stepsize qualifies");
  }
  return 1.75 / l_eff;
}

SublevelAudit sublevel_invariance_audit(const Objective& objective, std::span<const double> x0,
                                        double eta, std::size_t steps, double tolerance) {
  const auto bound = objective.hessian_bound();
  if (!bound) {
    throw Error(ErrorCode::kInapplicable,
                fmt::format("objective '{}' declares no Hessian bound", objective.kind()));
  }
  validate(*bound);
  const double l_eff = bound->effective_smoothness();
  if (l_eff > 0.0 && !(eta < 2.0 / l_eff)) {
    throw Error(ErrorCode::kOutOfRegime,
                fmt::format("eta = {} is not below 2/L_eff = {}", eta, 2.0 / l_eff));
  }

  SublevelAudit audit;
  audit.effective_smoothness = l_eff;
  audit.convexity_threshold =
      l_eff > 0.0 ? 1.75 / l_eff : std::numeric_limits<double>::infinity();
  audit.eta = eta;
  audit.tolerance = tolerance;

  const RunResult run = run_gd(objective, x0, eta, steps);
  audit.diverged = run.diverged();
  const auto& v = run.trajectory.values;
  audit.level = v.front();
  for (std::size_t n = 0; n < v.size(); ++n) {
    if (v[n] > audit.level + tolerance) audit.violating_indices.push_back(n);
  }
  audit.invariant = audit.violating_indices.empty() && !audit.diverged;
  if (v.size() >= 2) audit.curve = analyze_curve(run.trajectory, tolerance);
  return audit;
}

}  // namespace curvelab
