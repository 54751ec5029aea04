#include "curvelab/search.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <fmt/format.h>

#include "curvelab/error.hpp"
#include "curvelab/iterators.hpp"
#include "curvelab/parallel.hpp"

namespace curvelab {

void validate(const SearchConfig& config) {
  if (!(config.L > 0.0) || !std::isfinite(config.L)) {
    throw Error(ErrorCode::kInvalidConfig, "search: L must be positive");
  }
  const double lower = 1.75 / config.L;
  const double upper = 2.0 / config.L;
  if (!(config.eta_min > lower && config.eta_max < upper && config.eta_min <= config.eta_max)) {
    throw Error(ErrorCode::kOutOfRegime,
                fmt::format("search: eta range [{}, {}] must lie strictly inside ({}, {})",
                            config.eta_min, config.eta_max, lower, upper));
  }
  if (config.samples == 0) throw Error(ErrorCode::kInvalidConfig, "search: samples must be positive");
  if (config.steps < 3) throw Error(ErrorCode::kInvalidConfig, "search: steps must be >= 3");
  if (!(config.tolerance >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "search: tolerance must be nonnegative");
  }
  if (!(config.domain_radius > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "search: domain radius must be positive");
  }
}

namespace {

constexpr std::size_t kBatch = 256;

struct Candidate {
  PiecewiseQuadratic1D spec;
  double x0 = 0.0;
  double eta = 0.0;
};

struct Evaluation {
  bool valid = false;
  double margin = -std::numeric_limits<double>::infinity();  // max_n D_{n+1} - D_n
  std::optional<std::size_t> violation;
  double second_diff = 0.0;
};

Evaluation evaluate(const Candidate& c, const SearchConfig& config) {
  Evaluation out;
  try {
    validate(c.spec);
  } catch (const Error&) {
    return out;
  }
  const Objective objective = make_piecewise_quadratic_1d(c.spec);
  const Vector start{c.x0};
  const RunResult run = run_gd(objective, start, c.eta, config.steps);
  if (run.trajectory.size() < 3) return out;
  const CurveReport report = analyze_curve(run.trajectory, config.tolerance);
  out.valid = true;
  for (double sd : report.second_diffs) out.margin = std::max(out.margin, -sd);
  out.violation = report.first_convexity_violation;
  if (out.violation) out.second_diff = report.second_diffs[*out.violation];
  return out;
}

std::mt19937_64 candidate_stream(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(index),
                    std::uint32_t(std::uint64_t(index) >> 32)};
  return std::mt19937_64(seq);
}

Candidate draw(std::mt19937_64& rng, const SearchConfig& config) {
  const double r = config.domain_radius;
  std::uniform_int_distribution<std::size_t> count(0, config.max_breakpoints);
  std::uniform_real_distribution<double> position(-r, r);
  std::uniform_real_distribution<double> slope(0.0, config.L);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Candidate c;
  const std::size_t k = count(rng);
  c.spec.breakpoints.resize(k);
  for (auto& b : c.spec.breakpoints) b = position(rng);
  std::sort(c.spec.breakpoints.begin(), c.spec.breakpoints.end());
  c.spec.slopes.resize(k + 1);
  for (auto& m : c.spec.slopes) m = slope(rng);
  std::sort(c.spec.slopes.begin(), c.spec.slopes.end());
  // Favor the edges of the admissible slope box: flat pieces and full curvature.
  if (unit(rng) < 0.5) c.spec.slopes.back() = config.L;
  if (k > 0 && unit(rng) < 0.25) c.spec.slopes.front() = 0.0;
  c.spec.gradient_at_zero_offset = 0.5 * config.L * position(rng);
  c.x0 = 2.0 * position(rng);
  c.eta = config.eta_min + (config.eta_max - config.eta_min) * unit(rng);
  return c;
}

Candidate perturb(const Candidate& base, std::mt19937_64& rng, double scale,
                  const SearchConfig& config) {
  std::normal_distribution<double> noise(0.0, scale);
  const double r = config.domain_radius;
  Candidate c = base;
  for (auto& b : c.spec.breakpoints) b += r * noise(rng);
  std::sort(c.spec.breakpoints.begin(), c.spec.breakpoints.end());
  for (auto& m : c.spec.slopes) m = std::clamp(m + config.L * noise(rng), 0.0, config.L);
  std::sort(c.spec.slopes.begin(), c.spec.slopes.end());
  c.spec.gradient_at_zero_offset += 0.5 * config.L * r * noise(rng);
  c.x0 += 2.0 * r * noise(rng);
  c.eta = std::clamp(c.eta + (config.eta_max - config.eta_min) * noise(rng), config.eta_min,
                     config.eta_max);
  return c;
}

struct CandidateOutcome {
  bool found = false;
  Candidate candidate;
  Evaluation evaluation;
};

// Draws candidate `index` and, on a near miss, hill-climbs the largest
// forward-difference increase with shrinking Gaussian perturbations.
CandidateOutcome run_candidate(const SearchConfig& config, std::size_t index) {
  std::mt19937_64 rng = candidate_stream(config.seed, index);
  CandidateOutcome out;
  out.candidate = draw(rng, config);
  out.evaluation = evaluate(out.candidate, config);
  if (out.evaluation.violation) {
    out.found = true;
    return out;
  }
  if (!out.evaluation.valid || out.evaluation.margin <= -config.refine_window) return out;

  double scale = 0.05;
  for (std::size_t round = 0; round < config.refine_rounds; ++round) {
    Candidate trial = perturb(out.candidate, rng, scale, config);
    Evaluation eval = evaluate(trial, config);
    if (eval.valid && eval.margin > out.evaluation.margin) {
      out.candidate = std::move(trial);
      out.evaluation = eval;
      if (eval.violation) {
        out.found = true;
        return out;
      }
    } else {
      scale *= 0.5;
    }
  }
  return out;
}

Witness make_witness(const CandidateOutcome& outcome, const SearchConfig& config,
                     std::size_t index) {
  Witness w;
  w.spec = outcome.candidate.spec;
  w.L = config.L;
  w.x0 = outcome.candidate.x0;
  w.eta = outcome.candidate.eta;
  w.steps = config.steps;
  w.violation_index = *outcome.evaluation.violation;
  w.second_diff = outcome.evaluation.second_diff;
  w.tolerance = config.tolerance;
  w.candidate_index = index;
  w.nogo = verify_witness(w);
  return w;
}

RunResult simulate(const Witness& witness) {
  const Objective objective = make_piecewise_quadratic_1d(witness.spec);
  const Vector start{witness.x0};
  return run_gd(objective, start, witness.eta, witness.steps);
}

}  // namespace

SearchResult search_nonconvex_curve(const SearchConfig& config) {
  validate(config);
  SearchResult result;
  std::vector<CandidateOutcome> batch;
  for (std::size_t begin = 0; begin < config.samples; begin += kBatch) {
    const std::size_t size = std::min(kBatch, config.samples - begin);
    batch.assign(size, CandidateOutcome{});
    parallel_for(size, [&](std::size_t i) { batch[i] = run_candidate(config, begin + i); });
    for (std::size_t i = 0; i < size; ++i) {
      if (batch[i].found) {
        result.found = true;
        result.candidates_examined = begin + i + 1;
        result.witness = make_witness(batch[i], config, begin + i);
        return result;
      }
    }
  }
  result.candidates_examined = config.samples;
  return result;
}

NogoGapReport verify_witness(const Witness& witness) {
  const RunResult run = simulate(witness);
  if (run.diverged()) {
    throw Error(ErrorCode::kInconsistentWitness, "witness trajectory diverged on replay");
  }
  const CurveReport report = analyze_curve(run.trajectory, witness.tolerance);
  if (!report.gradnorm_monotone) {
    throw Error(ErrorCode::kInconsistentWitness,
                "gradient norms increase along the witness trajectory; the objective is not "
                "convex and L-smooth or eta exceeds 2/L");
  }
  return nogo_gap(run.trajectory, witness.L, witness.violation_index, witness.tolerance);
}

ReplayOutcome replay_witness(const Witness& witness) {
  const RunResult run = simulate(witness);
  ReplayOutcome out;
  out.report = analyze_curve(run.trajectory, witness.tolerance);
  out.reproduced = !run.diverged() && out.report.first_convexity_violation &&
                   *out.report.first_convexity_violation == witness.violation_index &&
                   out.report.second_diffs[witness.violation_index] < -witness.tolerance;
  if (!run.diverged() && run.trajectory.size() >= witness.violation_index + 3) {
    out.nogo = nogo_gap(run.trajectory, witness.L, witness.violation_index, witness.tolerance);
  }
  return out;
}

}  // namespace curvelab
