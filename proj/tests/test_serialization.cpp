#include <doctest.h>

#include <sstream>

#include "curvelab/error.hpp"
#include "curvelab/serialization.hpp"

using namespace curvelab;

TEST_CASE("objective descriptions round-trip") {
  const std::vector<ObjectiveDescription> corpus{
      QuadraticSpec{{0.1, 2.0}, {1.0 / 3.0, -4.0}}, ScaledQuadratic1D{0.7}, LogCosh1D{},
      PiecewiseQuadratic1D{{-1.0, 0.1}, {0.0, 0.3, 1.0}, 0.123456789012345678}};
  for (const auto& d : corpus) {
    const Json j = to_json(d);
    const Json again = to_json(objective_description_from_json(parse_json(j.dump())));
    CHECK(j == again);
  }
}

TEST_CASE("objective parsing errors") {
  CHECK_THROWS_AS(objective_description_from_json(parse_json(R"({"kind":"cubic"})")), Error);
  CHECK_THROWS_AS(objective_description_from_json(parse_json(R"({"kind":"scaled1d"})")), Error);
  CHECK_THROWS_AS(objective_from_json(parse_json(R"({"kind":"scaled1d","L":-1})")), Error);
  CHECK_THROWS_AS(parse_json("{not json"), Error);
  const auto q = objective_description_from_json(parse_json(R"({"kind":"quadratic","eigenvalues":[1,2]})"));
  CHECK(std::get<QuadraticSpec>(q).initial_coords == std::vector<double>{0.0, 0.0});
}

TEST_CASE("trajectory csv") {
  const RunResult r = run_gd(make_quadratic({{1.0, 0.5}, {0, 0}}), Vector{0.1, 1.0 / 3.0}, 0.3, 2);
  std::ostringstream out;
  write_trajectory_csv(out, r.trajectory);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,value,gradnorm,x_0,x_1");
  std::getline(in, line);
  CHECK(line.rfind("0,", 0) == 0);
  CHECK(line.find("0.33333333333333331") != std::string::npos);
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("search config defaults follow L") {
  const SearchConfig c = search_config_from_json(parse_json(R"({"L": 2.0, "seed": 7})"));
  CHECK(c.eta_min == doctest::Approx(0.88));
  CHECK(c.eta_max == doctest::Approx(0.995));
  CHECK(c.seed == 7);
  CHECK_THROWS_AS(search_config_from_json(parse_json(R"({"eta_range": [1.8]})")), Error);
}

TEST_CASE("search result round-trips bit for bit") {
  Witness w;
  w.spec = PiecewiseQuadratic1D{{0.25}, {0.1, 1.0}, -0.3};
  w.L = 1.0;
  w.x0 = 1.0 / 7.0;
  w.eta = 1.8765432109876543;
  w.steps = 30;
  w.violation_index = 4;
  w.second_diff = -1.2345e-3;
  w.nogo = NogoGapReport{4, 0.1, 0.2, -0.1, true, 1e-10};
  w.candidate_index = 12;
  const SearchResult r{true, 13, w};
  const Json j = to_json(r);
  const SearchResult back = search_result_from_json(parse_json(j.dump()));
  CHECK(to_json(back) == j);
  CHECK(back.witness->eta == w.eta);
  CHECK(back.witness->x0 == w.x0);

  const SearchResult none = search_result_from_json(to_json(SearchResult{false, 5, std::nullopt}));
  CHECK_FALSE(none.witness.has_value());
}

TEST_CASE("noise schedule parsing") {
  const NoiseSchedule n = noise_schedule_from_json(parse_json(R"({"delta":0.5,"epsilons":[-0.5,0.5]})"));
  CHECK(n.delta == 0.5);
  CHECK(n.epsilons.size() == 2);
  CHECK_THROWS_AS(noise_schedule_from_json(parse_json(R"({"delta":0.5})")), Error);
}
