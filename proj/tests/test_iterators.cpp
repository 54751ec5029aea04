#include <doctest.h>

#include <cmath>
#include <random>

#include "curvelab/error.hpp"
#include "curvelab/iterators.hpp"

using namespace curvelab;

namespace {

// Distance in units in the last place between two doubles of the same sign.
long long ulps(double a, double b) {
  if (a == b) return 0;
  long long n = 0;
  for (double x = std::min(a, b); x < std::max(a, b) && n < 1000; ++n) x = std::nextafter(x, INFINITY);
  return n;
}

}  // namespace

TEST_CASE("gd solves the unit quadratic in one step at eta = 1") {
  const RunResult r = run_gd(make_scaled_quadratic_1d(1.0), Vector{1.0}, 1.0, 5);
  REQUIRE_FALSE(r.diverged());
  REQUIRE(r.trajectory.size() == 6);
  CHECK(r.trajectory.points[0][0] == 1.0);
  CHECK(r.trajectory.values[0] == 0.5);
  for (std::size_t n = 1; n < 6; ++n) {
    CHECK(r.trajectory.points[n][0] == 0.0);
    CHECK(r.trajectory.values[n] == 0.0);
  }
}

TEST_CASE("gd at eta = 1.9 follows (-0.9)^n") {
  const RunResult r = run_gd(make_scaled_quadratic_1d(1.0), Vector{1.0}, 1.9, 30);
  for (std::size_t n = 0; n <= 30; ++n) {
    CHECK(r.trajectory.points[n][0] == doctest::Approx(std::pow(-0.9, double(n))).epsilon(1e-13));
    CHECK(r.trajectory.values[n] == doctest::Approx(0.5 * std::pow(0.81, double(n))).epsilon(1e-13));
  }
  CHECK(r.trajectory.stepsize == 1.9);
  CHECK(r.trajectory.scheme == Scheme::kGradientDescent);
}

TEST_CASE("zero stepsize gives a constant trajectory") {
  const Objective f = make_quadratic({{1.0, 2.0}, {1.0, 1.0}});
  const RunResult r = run_gd(f, Vector{1.0, -2.0}, 0.0, 4);
  for (const auto& p : r.trajectory.points) CHECK(p == Vector{1.0, -2.0});
}

TEST_CASE("gd preconditions") {
  const Objective f = make_scaled_quadratic_1d(1.0);
  CHECK_THROWS_AS(run_gd(f, Vector{1.0, 2.0}, 0.5, 3), Error);
  CHECK_THROWS_AS(run_gd(f, Vector{1.0}, 0.5, 0), Error);
  CHECK_THROWS_AS(run_gd(f, Vector{1.0}, -0.5, 3), Error);
}

TEST_CASE("divergence keeps the finite prefix") {
  const RunResult r = run_gd(make_scaled_quadratic_1d(1.0), Vector{1.0}, 1e10, 100);
  REQUIRE(r.diverged());
  const auto idx = r.divergence->failing_index;
  CHECK(idx > 1);
  CHECK(r.trajectory.size() == idx);
  for (double v : r.trajectory.values) CHECK(std::isfinite(v));
  CHECK_FALSE(r.divergence->reason.empty());
}

TEST_CASE("inexact gd with zero noise is bit-identical to gd") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Objective f = make_quadratic({{u(rng), 2 * u(rng), 3 * u(rng)}, {0, 0, 0}});
    const Vector x0{u(rng) - 0.5, 4 * u(rng), -u(rng)};
    const double eta = 0.6 * u(rng);
    const RunResult exact = run_gd(f, x0, eta, 40);
    const RunResult noisy = run_inexact_gd(f, x0, eta, NoiseSchedule{0.0, Vector(40, 0.0)}, 40);
    CHECK(exact.trajectory.points == noisy.trajectory.points);
    CHECK(exact.trajectory.values == noisy.trajectory.values);
    CHECK(noisy.trajectory.scheme == Scheme::kInexact);
  }
}

TEST_CASE("inexact gd follows the hand-iterated adversarial run") {
  const RunResult r = run_inexact_gd(make_scaled_quadratic_1d(1.0), Vector{1.0}, 0.1,
                                     NoiseSchedule{0.5, {-0.5, 0.5}}, 2);
  CHECK(r.trajectory.points[1][0] == doctest::Approx(0.95).epsilon(1e-15));
  CHECK(r.trajectory.points[2][0] == doctest::Approx(0.8075).epsilon(1e-15));
  CHECK(r.trajectory.values[0] == 0.5);
  CHECK(r.trajectory.values[1] == doctest::Approx(0.45125).epsilon(1e-15));
  CHECK(r.trajectory.values[2] == doctest::Approx(0.326028125).epsilon(1e-15));
}

TEST_CASE("constant relative noise rescales the stepsize on a quadratic") {
  const Objective f = make_quadratic({{0.3, 1.0}, {0, 0}});
  const double delta = 0.4, eta = 0.7;
  const RunResult noisy =
      run_inexact_gd(f, Vector{2.0, -1.0}, eta, NoiseSchedule{delta, Vector(25, delta)}, 25);
  const RunResult scaled = run_gd(f, Vector{2.0, -1.0}, eta * (1 + delta), 25);
  for (std::size_t n = 0; n <= 25; ++n) {
    CHECK(noisy.trajectory.values[n] == doctest::Approx(scaled.trajectory.values[n]).epsilon(1e-12));
  }
}

TEST_CASE("noise schedule validation") {
  const Objective f = make_scaled_quadratic_1d(1.0);
  CHECK_THROWS_AS(run_inexact_gd(f, Vector{1.0}, 0.1, NoiseSchedule{0.5, {0.6, 0.0}}, 2), Error);
  CHECK_THROWS_AS(run_inexact_gd(f, Vector{1.0}, 0.1, NoiseSchedule{1.0, {0.0, 0.0}}, 2), Error);
  CHECK_THROWS_AS(run_inexact_gd(f, Vector{1.0}, 0.1, NoiseSchedule{0.5, {0.1}}, 2), Error);
  try {
    run_inexact_gd(f, Vector{1.0}, 0.1, NoiseSchedule{0.2, {0.3}}, 1);
    FAIL("expected an invalid-schedule error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidSchedule);
  }
}

TEST_CASE("two-step scheme with theta = 0 is gd") {
  const Objective f = make_quadratic({{0.5, 1.5}, {0, 0}});
  const RunResult gd = run_gd(f, Vector{1.0, 1.0}, 0.9, 20);
  const RunResult ts = run_two_step(f, Vector{1.0, 1.0}, TwoStepConfig{0.9, 0.0, {3.0, -2.0}}, 20);
  CHECK(gd.trajectory.points == ts.trajectory.points);
  CHECK(ts.trajectory.scheme == Scheme::kTwoStep);
}

TEST_CASE("two-step collapse x_{n+1} = s x_{n-1}") {
  const RunResult r =
      run_two_step(make_scaled_quadratic_1d(1.0), Vector{1.0}, TwoStepConfig{0.8, 0.2, {1.0}}, 3);
  const auto& p = r.trajectory.points;
  REQUIRE(p.size() == 4);
  CHECK(p[0][0] == 1.0);
  CHECK(p[1][0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(p[2][0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(p[3][0] == doctest::Approx(0.04).epsilon(1e-14));
  const auto& v = r.trajectory.values;
  CHECK(v[0] == 0.5);
  CHECK(v[1] == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(v[2] == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(v[3] == doctest::Approx(0.0008).epsilon(1e-13));
}

TEST_CASE("two-step first step equals gd when x_{-1} = x_0") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const Objective f = make_quadratic({{0.5, 1.0, 2.0}, {0, 0, 0}});
  for (int trial = 0; trial < 20; ++trial) {
    const Vector x0{u(rng), u(rng), u(rng)};
    const RunResult ts = run_two_step(f, x0, TwoStepConfig{0.3, u(rng), x0}, 1);
    const RunResult gd = run_gd(f, x0, 0.3, 1);
    CHECK(ts.trajectory.points[1] == gd.trajectory.points[1]);
  }
  CHECK_THROWS_AS(run_two_step(f, Vector{1, 1, 1}, TwoStepConfig{0.3, 0.1, {1.0}}, 1), Error);
}

TEST_CASE("stored values re-evaluate within 4 ulps") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  const Objective objectives[] = {make_quadratic({{0.2, 0.9}, {0, 0}}), make_logcosh_1d(),
                                  make_piecewise_quadratic_1d({{-1.0, 0.5}, {0.0, 0.4, 1.0}, 0.3})};
  for (const Objective& f : objectives) {
    Vector x0(f.dimension());
    for (auto& x : x0) x = 5 * u(rng);
    const RunResult r = run_gd(f, x0, 1.2, 50);
    for (std::size_t n = 0; n < r.trajectory.size(); ++n) {
      const double again = f.value(r.trajectory.points[n]);
      CHECK(ulps(again, r.trajectory.values[n]) <= 4);
      CHECK(norm(f.gradient(r.trajectory.points[n])) == r.trajectory.gradnorms[n]);
    }
  }
}

TEST_CASE("gd values on quadratics are nonincreasing when eta*lambda <= 2") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    QuadraticSpec spec;
    const int d = 1 + trial % 8;
    for (int i = 0; i < d; ++i) {
      spec.eigenvalues.push_back(u(rng));
      spec.initial_coords.push_back(20 * u(rng) - 10);
    }
    const double eta = 2.0 * u(rng) / spec.smoothness();
    const RunResult r = run_gd(make_quadratic(spec), spec.initial_coords, eta, 100);
    for (std::size_t n = 0; n + 1 < r.trajectory.size(); ++n) {
      CHECK(r.trajectory.values[n + 1] <= r.trajectory.values[n] + 1e-12);
    }
  }
}
