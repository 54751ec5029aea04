#include <doctest.h>

#include <cmath>

#include "curvelab/constructions.hpp"
#include "curvelab/error.hpp"

using namespace curvelab;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kInvalidConfig;
}

// Written with t0 = 1 - delta, t1 = 1 + delta in the unexpanded product form.
double s_product_form(double a, double delta) {
  const double t0 = 1.0 - delta, t1 = 1.0 + delta;
  const double b0 = 1.0 - a * t0;
  return t0 * (1.0 - a * t0 / 2.0) - t1 * b0 * b0 * (1.0 - a * t1 / 2.0);
}

}  // namespace

TEST_CASE("S at a hand-computed point") {
  CHECK(s_function(0.1, 0.5) == doctest::Approx(-0.76471875).epsilon(1e-14));
  for (double delta : {0.1, 0.25, 0.5, 0.9}) CHECK(s_function(0.0, delta) == -2.0 * delta);
}

TEST_CASE("expanded S agrees with the product form") {
  for (double delta = 0.05; delta < 1.0; delta += 0.05) {
    for (double a = 0.0; a <= 3.0; a += 0.01) {
      CHECK(s_function(a, delta) == doctest::Approx(s_product_form(a, delta)).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("alpha* matches high-precision roots") {
  // Roots of S(., delta) computed to 40 digits.
  CHECK(find_alpha_star(0.5) == doctest::Approx(0.5797363768218141380832959823372932384252).epsilon(1e-10));
  CHECK(find_alpha_star(0.1) == doctest::Approx(0.1007288165621114).epsilon(1e-10));
  CHECK(find_alpha_star(0.3) == doctest::Approx(0.3188442606322825).epsilon(1e-10));
  CHECK(find_alpha_star(0.9) == doctest::Approx(0.9877886393847695).epsilon(1e-10));
  for (double delta : {0.1, 0.5, 0.9}) {
    const double a = find_alpha_star(delta);
    CHECK(s_function(a, delta) < 0.0);
    CHECK(s_function(a * (1 + 1e-9), delta) >= 0.0);
  }
  CHECK(code_of([] { find_alpha_star(0.0); }) == ErrorCode::kInvalidSpec);
  CHECK(code_of([] { find_alpha_star(1.0); }) == ErrorCode::kInvalidSpec);
}

TEST_CASE("certificate grid lies strictly below alpha*") {
  const ImpossibilityWitness w = certify_impossibility(0.5, 2.0, 100);
  CHECK(w.alpha_grid.size() == 100);
  CHECK(w.alpha_grid.back() < w.alpha_star);
  for (double a : w.alpha_grid) CHECK(s_function(a, 0.5) < 0.0);
}

TEST_CASE("adversarial schedule") {
  const NoiseSchedule n = adversarial_schedule(0.3, 5);
  CHECK(n.delta == 0.3);
  CHECK(n.epsilons == std::vector<double>{-0.3, 0.3, 0.0, 0.0, 0.0});
}

TEST_CASE("impossibility experiment matches hand iteration") {
  SUBCASE("delta = 0.1, L = 2, eta = 0.01") {
    const auto out = impossibility_experiment(0.1, 2.0, 1.0, 0.01, 4);
    CHECK(out.report.deltas[0] == doctest::Approx(0.035676).epsilon(1e-12));
    CHECK(out.report.deltas[1] == doctest::Approx(0.041963523184).epsilon(1e-12));
    CHECK(out.report.first_convexity_violation == std::optional<std::size_t>(0));
  }
  SUBCASE("delta = 0.5, L = 1, eta = 0.1") {
    const auto out = impossibility_experiment(0.5, 1.0, 1.0, 0.1, 4);
    CHECK(out.report.deltas[0] == doctest::Approx(0.04875).epsilon(1e-12));
    CHECK(out.report.deltas[1] == doctest::Approx(0.125221875).epsilon(1e-12));
    CHECK_FALSE(out.report.convex_curve);
  }
}

TEST_CASE("zero noise restores convexity") {
  const Objective f = make_scaled_quadratic_1d(1.0);
  const RunResult run = run_inexact_gd(f, Vector{1.0}, 0.5, NoiseSchedule{0.5, Vector(10, 0.0)}, 10);
  CHECK(analyze_curve(run.trajectory).convex_curve);
}

TEST_CASE("impossibility preconditions") {
  CHECK(code_of([] { impossibility_experiment(0.5, 1.0, 0.0, 0.1, 4); }) == ErrorCode::kDegenerateStart);
  CHECK(code_of([] { impossibility_experiment(0.5, 1.0, 1.0, 0.7, 4); }) == ErrorCode::kOutOfRegime);
  CHECK(code_of([] { impossibility_experiment(0.5, 1.0, 1.0, 0.0, 4); }) == ErrorCode::kOutOfRegime);
}

TEST_CASE("quadratic closed form") {
  const QuadraticSpec spec{{1.0, 2.0}, {1.0, 1.0}};
  CHECK(quadratic_delta_closed_form(spec, 0.5, 0).value == doctest::Approx(1.375).epsilon(1e-15));
  CHECK(quadratic_delta_closed_form(spec, 0.5, 1).value == doctest::Approx(0.09375).epsilon(1e-15));
  CHECK(quadratic_delta_closed_form(spec, 0.5, 0).in_regime);
  CHECK(quadratic_delta_closed_form(spec, 0.0, 3).value == 0.0);
  CHECK(quadratic_delta_closed_form(QuadraticSpec{{2.0}, {1.0}}, 1.0, 0).value == 0.0);
  CHECK_FALSE(quadratic_delta_closed_form(spec, 1.5, 0).in_regime);
}

TEST_CASE("divergence above 2/L") {
  CHECK(quadratic_divergence_check(QuadraticSpec{{1.0}, {1.0}}, 2.5, 40));
  CHECK(quadratic_divergence_check(QuadraticSpec{{1.0, 0.1}, {1.0, 1.0}}, 2.5, 60));
  CHECK(code_of([] { quadratic_divergence_check(QuadraticSpec{{1.0, 0.1}, {0.0, 1.0}}, 2.5, 60); }) ==
        ErrorCode::kInapplicable);
  CHECK(code_of([] { quadratic_divergence_check(QuadraticSpec{{1.0}, {1.0}}, 1.5, 40); }) ==
        ErrorCode::kOutOfRegime);
}

TEST_CASE("two-step counterexample configuration") {
  const TwoStepConfig cfg = twostep_counterexample_config(1.0, 2.0 / 3.0, Vector{1.0});
  CHECK(cfg.theta == doctest::Approx(1.0 / 3.0));
  CHECK(cfg.x_minus1 == Vector{1.0});
  CHECK(code_of([] { twostep_counterexample_config(1.0, 1.0, Vector{1.0}); }) ==
        ErrorCode::kOutOfInterval);
  CHECK(code_of([] { twostep_counterexample_config(1.0, 0.5, Vector{1.0}); }) ==
        ErrorCode::kOutOfInterval);
  CHECK(twostep_predicted_gap(1.0, 0.8, 0.2) == doctest::Approx(0.0192).epsilon(1e-14));

  const RunResult run =
      run_two_step(make_scaled_quadratic_1d(1.0), Vector{1.0},
                   twostep_counterexample_config(1.0, 0.8, Vector{1.0}), 4);
  const CurveReport r = analyze_curve(run.trajectory, 0.0);
  CHECK(r.first_convexity_violation == std::optional<std::size_t>(1));
  CHECK(r.deltas[2] - r.deltas[1] == doctest::Approx(0.0192).epsilon(1e-12));
}

TEST_CASE("effective threshold") {
  CHECK(effective_threshold({3.0, 1.0}) == doctest::Approx(1.75 / 3.0));
  CHECK(effective_threshold({1.0, 1.0}) == 1.75);
  CHECK(effective_threshold({2.0, 3.0}) == doctest::Approx(1.75 / 6.0));
  CHECK(code_of([] { effective_threshold({1.0, 0.0}); }) == ErrorCode::kUnboundedStepsize);
  CHECK(code_of([] { effective_threshold({0.0, 1.0}); }) == ErrorCode::kInvalidSpec);
}

TEST_CASE("sublevel audit on logcosh") {
  const Objective f = make_logcosh_1d();
  const SublevelAudit a = sublevel_invariance_audit(f, Vector{2.0}, 1.5, 100);
  CHECK(a.invariant);
  CHECK(a.curve.convex_curve);
  CHECK(a.convexity_threshold == 1.75);
  CHECK(a.level == doctest::Approx(f.value(Vector{2.0})));

  const SublevelAudit edge = sublevel_invariance_audit(f, Vector{2.0}, 1.99, 100);
  CHECK(edge.invariant);
  CHECK(edge.curve.monotone_values);

  const SublevelAudit still = sublevel_invariance_audit(f, Vector{2.0}, 0.0, 5);
  CHECK(still.invariant);
  CHECK(still.curve.convex_curve);

  CHECK(code_of([&] { sublevel_invariance_audit(f, Vector{2.0}, 2.0, 5); }) == ErrorCode::kOutOfRegime);
  CHECK(code_of([] {
          sublevel_invariance_audit(make_scaled_quadratic_1d(1.0), Vector{1.0}, 1.0, 5);
        }) == ErrorCode::kInapplicable);
}
