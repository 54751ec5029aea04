#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "curvelab/constructions.hpp"
#include "curvelab/diagnostics.hpp"
#include "curvelab/iterators.hpp"
#include "curvelab/objectives.hpp"
#include "curvelab/search.hpp"

namespace curvelab {

using Json = nlohmann::json;

// Objectives use {"kind": "quadratic" | "scaled1d" | "logcosh" | "piecewise1d", ...}.
Json to_json(const ObjectiveDescription& description);
ObjectiveDescription objective_description_from_json(const Json& j);
Objective objective_from_json(const Json& j);

Json to_json(const HessianBound& bound);
Json to_json(const CurveReport& report);
Json to_json(const NogoGapReport& report);
Json to_json(const ImpossibilityWitness& witness);
Json to_json(const SublevelAudit& audit);
Json to_json(const DivergenceReport& divergence);
Json to_json(const SearchConfig& config);
Json to_json(const Witness& witness);
Json to_json(const SearchResult& result);

NoiseSchedule noise_schedule_from_json(const Json& j);
SearchConfig search_config_from_json(const Json& j);
Witness witness_from_json(const Json& j);
SearchResult search_result_from_json(const Json& j);

/// Header `n,value,gradnorm,x_0..x_{d-1}`; every float has 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

/// 17 significant digits, the shortest width that round-trips any double.
std::string format_double(double value);

/// Parses a JSON document, mapping syntax errors to kInvalidConfig.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

}  // namespace curvelab
