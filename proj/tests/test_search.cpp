#include <doctest.h>

#include "curvelab/error.hpp"
#include "curvelab/search.hpp"
#include "curvelab/serialization.hpp"

using namespace curvelab;

namespace {

SearchConfig small_config(std::uint64_t seed) {
  SearchConfig c;
  c.seed = seed;
  c.samples = 2000;
  return c;
}

}  // namespace

TEST_CASE("search is deterministic in the config") {
  const SearchResult a = search_nonconvex_curve(small_config(3));
  const SearchResult b = search_nonconvex_curve(small_config(3));
  CHECK(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("search finds witnesses that verify") {
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    const SearchResult r = search_nonconvex_curve(small_config(seed));
    INFO("seed " << seed);
    REQUIRE(r.found);
    const Witness& w = *r.witness;
    CHECK(w.eta > 1.75 / w.L);
    CHECK(w.eta < 2.0 / w.L);
    CHECK(w.second_diff < -w.tolerance);
    const NogoGapReport g = verify_witness(w);
    CHECK(g.violated);
    CHECK(g.gap == doctest::Approx(w.nogo.gap));
    const ReplayOutcome replay = replay_witness(w);
    CHECK(replay.reproduced);
    CHECK(replay.report.first_convexity_violation == std::optional<std::size_t>(w.violation_index));
  }
}

TEST_CASE("pure quadratics yield nothing") {
  SearchConfig c = small_config(0);
  c.max_breakpoints = 0;
  c.samples = 500;
  const SearchResult r = search_nonconvex_curve(c);
  CHECK_FALSE(r.found);
  CHECK(r.candidates_examined == 500);
}

TEST_CASE("stepsize range must sit strictly inside (1.75/L, 2/L)") {
  SearchConfig c;
  c.eta_min = 1.75 - 1e-9;
  CHECK_THROWS_AS(validate(c), Error);
  c.eta_min = 1.76;
  c.eta_max = 2.0;
  try {
    validate(c);
    FAIL("expected out-of-regime");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOutOfRegime);
  }
  c.L = 2.0;
  c.eta_min = 0.88;
  c.eta_max = 0.99;
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("quadratic control witness does not violate the gap") {
  Witness w;
  w.spec = PiecewiseQuadratic1D{{}, {1.0}, 0.0};
  w.L = 1.0;
  w.x0 = 1.0;
  w.eta = 1.9;
  w.steps = 10;
  w.violation_index = 0;
  const NogoGapReport g = verify_witness(w);
  CHECK_FALSE(g.violated);
  CHECK(g.lhs == doctest::Approx(0.01805));
  CHECK_FALSE(replay_witness(w).reproduced);
}

TEST_CASE("tampered witness is inconsistent") {
  const SearchResult r = search_nonconvex_curve(small_config(0));
  REQUIRE(r.found);
  Witness w = *r.witness;
  w.eta = 2.5;
  CHECK_THROWS_AS(verify_witness(w), Error);
}
