#pragma once

#include <cstddef>
#include <vector>

#include "curvelab/diagnostics.hpp"
#include "curvelab/iterators.hpp"
#include "curvelab/objectives.hpp"

namespace curvelab {

// ---------------------------------------------------------------------------
// Relative-error impossibility on f(x) = L/2 x^2.
//
// With alpha = eta L and the schedule eps = (-delta, +delta, 0, ...),
//   D_0 - D_1 = L x0^2 alpha S(alpha),
//   S(alpha) = t0 (1 - alpha t0 / 2) - t1 (1 - alpha t0)^2 (1 - alpha t1 / 2),
// where t0 = 1 - delta and t1 = 1 + delta. S(0) = -2 delta < 0, so every small
// enough stepsize produces D_0 < D_1.
// ---------------------------------------------------------------------------

double s_function(double alpha, double delta);

/// An alpha* with S < 0 on all of (0, alpha*]. Scans S on a geometric grid over
/// [1e-6, 4], bisects the first sign change to 1e-12 and returns the negative
/// end of the final bracket. If S never turns nonnegative on the grid the
/// grid's upper end is returned.
double find_alpha_star(double delta);

struct ImpossibilityWitness {
  double delta = 0.0;
  double L = 0.0;
  double alpha_star = 0.0;
  std::vector<double> alpha_grid;  // points in (0, alpha_star) with S < 0
};

/// Builds alpha* for `delta` and re-checks S < 0 on `grid_points` evenly
/// spaced points of (0, alpha*). Throws kInconsistentWitness if any fails.
ImpossibilityWitness certify_impossibility(double delta, double L, std::size_t grid_points = 1000);

/// The adversarial schedule (-delta, +delta, 0, 0, ...) of length `steps`.
NoiseSchedule adversarial_schedule(double delta, std::size_t steps);

struct ImpossibilityOutcome {
  RunResult run;
  CurveReport report;
};

/// Runs relative-inexact GD with the adversarial schedule on L/2 x^2.
/// Requires x0 != 0 and 0 < eta <= find_alpha_star(delta) / L.
ImpossibilityOutcome impossibility_experiment(double delta, double L, double x0, double eta,
                                              std::size_t steps,
                                              double tolerance = kDefaultTolerance);

// ---------------------------------------------------------------------------
// Quadratics in closed form.
// ---------------------------------------------------------------------------

struct ClosedFormDelta {
  double value = 0.0;
  bool in_regime = true;  // eta * lambda_i in [0, 2] for every i
};

/// D_n = 1/2 sum_i gamma_i s_i^n with s_i = (1 - eta lambda_i)^2 and
/// gamma_i = eta lambda_i^2 (2 - eta lambda_i) y_{0,i}^2. Evaluated for any
/// eta; `in_regime` reports whether the monotone-convex guarantee applies.
ClosedFormDelta quadratic_delta_closed_form(const QuadraticSpec& spec, double eta, std::size_t n);

/// True iff GD from the spec's initial point blows up: the values leave
/// f(x_0) behind and keep growing geometrically (or overflow). Requires
/// eta > 2 / max lambda and some y_{0,i} != 0 with eta lambda_i > 2.
bool quadratic_divergence_check(const QuadraticSpec& spec, double eta, std::size_t steps);

// ---------------------------------------------------------------------------
// Two-step gradient-difference counterexample.
// ---------------------------------------------------------------------------

/// theta = 1/L - eta and x_{-1} = x0, for eta in [2/(3L), 1/L). On L/2 x^2
/// the recurrence collapses to x_{n+1} = (theta L) x_{n-1}.
TwoStepConfig twostep_counterexample_config(double L, double eta, const Vector& x0);

/// Predicted D_2 - D_1 = L/2 t (2 - t) x_1^2 with t = eta L.
double twostep_predicted_gap(double L, double eta, double x1);

// ---------------------------------------------------------------------------
// Sublevel-set smoothness.
// ---------------------------------------------------------------------------

/// 1.75 / (kappa L_A). Throws kUnboundedStepsize when kappa L_A = 0.
double effective_threshold(const HessianBound& bound);

struct SublevelAudit {
  double level = 0.0;  // f(x_0)
  double effective_smoothness = 0.0;
  double convexity_threshold = 0.0;  // 1.75 / L_eff
  double eta = 0.0;
  bool invariant = true;
  std::vector<std::size_t> violating_indices;  // n with f(x_n) > f(x_0) + tolerance
  bool diverged = false;
  CurveReport curve;
  double tolerance = kDefaultTolerance;
};

/// Runs GD and checks that every iterate stays in {x : f(x) <= f(x_0)}.
/// Requires a declared Hessian bound and 0 <= eta < 2 / L_eff.
SublevelAudit sublevel_invariance_audit(const Objective& objective, std::span<const double> x0,
                                        double eta, std::size_t steps,
                                        double tolerance = kDefaultTolerance);

}  // namespace curvelab
