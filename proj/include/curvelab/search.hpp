#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "curvelab/diagnostics.hpp"
#include "curvelab/objectives.hpp"

namespace curvelab {

/// Randomized hunt for nonconvex GD curves with eta in (1.75/L, 2/L) over
/// one-dimensional convex piecewise quadratics with slopes in [0, L].
struct SearchConfig {
  double L = 1.0;
  double eta_min = 1.76;
  double eta_max = 1.99;
  std::size_t max_breakpoints = 3;  // 0 restricts the family to pure quadratics
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  std::size_t steps = 30;
  double tolerance = kDefaultTolerance;
  double domain_radius = 4.0;    // breakpoints and x0 are drawn from [-r, r]
  std::size_t refine_rounds = 24;
  double refine_window = 1e-2;   // refine when max(D_{n+1} - D_n) exceeds -window
};

void validate(const SearchConfig& config);

struct Witness {
  PiecewiseQuadratic1D spec;
  double L = 1.0;
  double x0 = 0.0;
  double eta = 0.0;
  std::size_t steps = 0;
  std::size_t violation_index = 0;
  double second_diff = 0.0;  // D_n - D_{n+1} at violation_index, < -tolerance
  NogoGapReport nogo;
  double tolerance = kDefaultTolerance;
  std::size_t candidate_index = 0;
};

struct SearchResult {
  bool found = false;
  std::size_t candidates_examined = 0;
  std::optional<Witness> witness;
};

/// Deterministic in the config: candidate i draws from its own stream seeded
/// by (seed, i) and the lowest successful index wins.
SearchResult search_nonconvex_curve(const SearchConfig& config);

/// Re-simulates the witness and evaluates the no-go gap at its violation
/// index. Throws kInconsistentWitness if the curve no longer violates
/// convexity there or gradient norms grow beyond tolerance.
NogoGapReport verify_witness(const Witness& witness);

struct ReplayOutcome {
  bool reproduced = false;  // same first violation index, same sign
  CurveReport report;
  NogoGapReport nogo;
};

ReplayOutcome replay_witness(const Witness& witness);

}  // namespace curvelab
