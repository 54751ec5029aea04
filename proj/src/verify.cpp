#include "curvelab/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "curvelab/constructions.hpp"
#include "curvelab/diagnostics.hpp"
#include "curvelab/error.hpp"
#include "curvelab/search.hpp"

namespace curvelab {

namespace {

constexpr std::array<std::string_view, 5> kSuites = {"imposs", "quad", "twostep", "local", "nogo"};

QuadraticSpec random_quadratic(std::mt19937_64& rng, double L) {
  std::uniform_int_distribution<int> dim(1, 8);
  std::uniform_real_distribution<double> eig(0.0, L);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  QuadraticSpec spec;
  const int d = dim(rng);
  for (int i = 0; i < d; ++i) {
    spec.eigenvalues.push_back(eig(rng));
    spec.initial_coords.push_back(coord(rng));
  }
  return spec;
}

void check_quadratics(std::uint64_t seed, std::vector<CheckResult>& out) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr std::size_t kSpecs = 100, kEtas = 20, kSteps = 200;
  double worst = 0.0;
  std::size_t mismatches = 0, nonconvex = 0, nonmonotone = 0;
  for (std::size_t s = 0; s < kSpecs; ++s) {
    const QuadraticSpec spec = random_quadratic(rng, 1.0);
    const Objective objective = make_quadratic(spec);
    const double top = spec.smoothness();
    for (std::size_t e = 0; e < kEtas; ++e) {
      const double eta = top > 0.0 ? 2.0 * unit(rng) / top : unit(rng);
      const RunResult run = run_gd(objective, spec.initial_coords, eta, kSteps);
      const CurveReport report = analyze_curve(run.trajectory, kDefaultTolerance);
      if (!report.convex_curve) ++nonconvex;
      if (!report.monotone_values) ++nonmonotone;
      for (std::size_t n = 0; n < report.deltas.size(); ++n) {
        const double closed = quadratic_delta_closed_form(spec, eta, n).value;
        const double err = std::abs(closed - report.deltas[n]);
        const double allowed = std::max(1e-10 * std::abs(closed), 1e-14);
        if (err > allowed) ++mismatches;
        worst = std::max(worst, err / allowed);
      }
    }
  }
  out.push_back({"quad", "closed-form deltas match simulation", mismatches == 0,
                 fmt::format("{} mismatches, worst error/allowance {:.3g}", mismatches, worst)});
  out.push_back({"quad", "curves monotone and convex for eta*lambda in [0,2]",
                 nonconvex == 0 && nonmonotone == 0,
                 fmt::format("{} nonconvex, {} nonmonotone", nonconvex, nonmonotone)});

  const QuadraticSpec top_mode{{1.0, 0.3}, {1.0, 1.0}};
  const bool diverges = quadratic_divergence_check(top_mode, 2.5, 60);
  out.push_back({"quad", "eta = 2.5/L diverges", diverges, "lambda = (1, 0.3), y0 = (1, 1)"});
}

void check_impossibility(std::vector<CheckResult>& out) {
  std::size_t failures = 0, runs = 0;
  bool identity = true;
  for (int k = 1; k <= 9; ++k) {
    const double delta = 0.1 * k;
    identity = identity && s_function(0.0, delta) == -2.0 * delta;
    const double alpha_star = find_alpha_star(delta);
    for (double L : {0.5, 1.0, 4.0}) {
      for (int j = 1; j <= 10; ++j) {
        const double eta = alpha_star / L * double(j) / 11.0;
        const auto outcome = impossibility_experiment(delta, L, 1.0, eta, 10);
        const auto& d = outcome.report.deltas;
        ++runs;
        if (!(d[1] - d[0] > 1e-12 * L) ||
            outcome.report.first_convexity_violation != std::optional<std::size_t>(0)) {
          ++failures;
        }
      }
    }
  }
  out.push_back({"imposs", "adversarial schedule gives D_0 < D_1", failures == 0,
                 fmt::format("{} of {} runs failed", failures, runs)});
  out.push_back({"imposs", "S(0) = -2 delta", identity, "delta in {0.1, ..., 0.9}"});

  bool certified = true;
  for (double delta : {0.1, 0.5, 0.9}) {
    try {
      certify_impossibility(delta, 1.0);
    } catch (const Error&) {
      certified = false;
    }
  }
  out.push_back({"imposs", "S < 0 on a 1000-point grid below alpha*", certified,
                 "delta in {0.1, 0.5, 0.9}"});
}

void check_twostep(std::vector<CheckResult>& out) {
  std::size_t failures = 0, runs = 0;
  double worst = 0.0;
  for (double L : {0.5, 1.0, 4.0}) {
    const double lo = 2.0 / (3.0 * L);
    const double hi = 1.0 / L - 1e-6;
    for (int k = 0; k < 20; ++k) {
      const double eta = lo + (hi - lo) * double(k) / 19.0;
      for (double x0 : {1.0, -3.0, 0.01}) {
        const Vector start{x0};
        const TwoStepConfig cfg = twostep_counterexample_config(L, eta, start);
        const RunResult run = run_two_step(make_scaled_quadratic_1d(L), start, cfg, 6);
        const CurveReport report = analyze_curve(run.trajectory, 0.0);
        const double predicted = twostep_predicted_gap(L, eta, run.trajectory.points[1][0]);
        const double observed = report.deltas[2] - report.deltas[1];
        const double rel = std::abs(observed - predicted) / std::abs(predicted);
        worst = std::max(worst, rel);
        ++runs;
        if (report.first_convexity_violation != std::optional<std::size_t>(1) || rel > 1e-12) {
          ++failures;
        }
      }
    }
  }
  out.push_back({"twostep", "first violation at n = 1 with predicted gap", failures == 0,
                 fmt::format("{} of {} runs failed, worst relative error {:.3g}", failures, runs,
                             worst)});
}

void check_local(std::vector<CheckResult>& out) {
  const Objective logcosh = make_logcosh_1d();
  std::size_t failures = 0;
  for (double x0 : {0.5, 2.0, 10.0}) {
    const Vector start{x0};
    for (double eta : {0.5, 1.0, 1.75}) {
      const SublevelAudit audit = sublevel_invariance_audit(logcosh, start, eta, 200);
      if (!audit.invariant || !audit.curve.convex_curve) ++failures;
    }
    if (!sublevel_invariance_audit(logcosh, start, 1.99, 200).invariant) ++failures;
  }
  out.push_back({"local", "logcosh stays in its sublevel set with a convex curve", failures == 0,
                 fmt::format("{} failing configurations", failures)});
  const double threshold = effective_threshold(*logcosh.hessian_bound());
  out.push_back({"local", "1.75/L_eff for logcosh", threshold == 1.75,
                 fmt::format("threshold {}", threshold)});
}

void check_nogo(std::uint64_t seed, std::size_t samples, std::vector<CheckResult>& out) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t violations = 0, evaluated = 0;
  for (int s = 0; s < 50; ++s) {
    const QuadraticSpec spec = random_quadratic(rng, 1.0);
    const double top = spec.smoothness();
    if (top <= 0.0) continue;
    const double eta = (0.01 + 1.98 * unit(rng)) / top;
    const RunResult run = run_gd(make_quadratic(spec), spec.initial_coords, eta, 60);
    for (std::size_t n = 0; n + 3 <= run.trajectory.size(); ++n) {
      ++evaluated;
      if (nogo_gap(run.trajectory, top, n).violated) ++violations;
    }
  }
  out.push_back({"nogo", "quadratic GD never violates the gap inequality", violations == 0,
                 fmt::format("{} of {} indices violated", violations, evaluated)});

  SearchConfig cfg;
  cfg.seed = seed;
  cfg.samples = samples;
  const SearchResult result = search_nonconvex_curve(cfg);
  if (!result.found) {
    out.push_back({"nogo", "witness search (best effort)", true,
                   fmt::format("not found after {} candidates", result.candidates_examined)});
    return;
  }
  bool violated = false;
  std::string detail;
  try {
    const NogoGapReport report = verify_witness(*result.witness);
    violated = report.violated;
    detail = fmt::format("candidate {}, eta = {:.6f}, n = {}, gap = {:.6g}",
                         result.witness->candidate_index, result.witness->eta, report.index,
                         report.gap);
  } catch (const Error& e) {
    detail = e.what();
  }
  out.push_back({"nogo", "found witness violates the gap inequality", violated, detail});
}

void run_one(std::string_view suite, std::uint64_t seed, std::size_t samples,
             std::vector<CheckResult>& out) {
  if (suite == "quad") {
    check_quadratics(seed, out);
  } else if (suite == "imposs") {
    check_impossibility(out);
  } else if (suite == "twostep") {
    check_twostep(out);
  } else if (suite == "local") {
    check_local(out);
  } else if (suite == "nogo") {
    check_nogo(seed, samples, out);
  }
}

}  // namespace

bool is_known_suite(std::string_view suite) {
  return suite == "all" || std::find(kSuites.begin(), kSuites.end(), suite) != kSuites.end();
}

std::vector<CheckResult> run_verify_suite(std::string_view suite, std::uint64_t seed,
                                          std::size_t search_samples) {
  if (!is_known_suite(suite)) {
    throw Error(ErrorCode::kInvalidConfig, fmt::format("unknown suite '{}'", suite));
  }
  std::vector<CheckResult> out;
  if (suite == "all") {
    for (auto name : kSuites) run_one(name, seed, search_samples, out);
  } else {
    run_one(suite, seed, search_samples, out);
  }
  return out;
}

void print_check_table(std::ostream& out, const std::vector<CheckResult>& checks) {
  std::size_t name_width = 5;
  for (const auto& c : checks) name_width = std::max(name_width, c.name.size());
  out << fmt::format("{:<8} {:<{}} {:<6} {}\n", "suite", "check", name_width, "result", "detail");
  for (const auto& c : checks) {
    out << fmt::format("{:<8} {:<{}} {:<6} {}\n", c.suite, c.name, name_width,
                       c.passed ? "PASS" : "FAIL", c.detail);
  }
}

}  // namespace curvelab
