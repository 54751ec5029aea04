#include "curvelab/serialization.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "curvelab/error.hpp"

namespace curvelab {

namespace {

Json optional_index(const std::optional<std::size_t>& index) {
  return index ? Json(*index) : Json(nullptr);
}

// nlohmann throws its own exception types on missing keys and type errors;
// configs are user input, so those become kInvalidConfig.
template <typename F>
auto guarded(std::string_view what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, fmt::format("{}: {}", what, e.what()));
  }
}

}  // namespace

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

Json to_json(const ObjectiveDescription& description) {
  struct Visitor {
    Json operator()(const QuadraticSpec& s) const {
      return {{"kind", "quadratic"},
              {"eigenvalues", s.eigenvalues},
              {"initial_coords", s.initial_coords}};
    }
    Json operator()(const ScaledQuadratic1D& s) const { return {{"kind", "scaled1d"}, {"L", s.L}}; }
    Json operator()(const LogCosh1D&) const { return {{"kind", "logcosh"}}; }
    Json operator()(const PiecewiseQuadratic1D& s) const {
      return {{"kind", "piecewise1d"},
              {"breakpoints", s.breakpoints},
              {"slopes", s.slopes},
              {"gradient_at_zero_offset", s.gradient_at_zero_offset}};
    }
  };
  return std::visit(Visitor{}, description);
}

ObjectiveDescription objective_description_from_json(const Json& j) {
  return guarded("objective", [&]() -> ObjectiveDescription {
    if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "objective must be a JSON object");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "quadratic") {
      QuadraticSpec s;
      s.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
      s.initial_coords = j.value("initial_coords", std::vector<double>(s.eigenvalues.size(), 0.0));
      return s;
    }
    if (kind == "scaled1d") return ScaledQuadratic1D{j.at("L").get<double>()};
    if (kind == "logcosh") return LogCosh1D{};
    if (kind == "piecewise1d") {
      PiecewiseQuadratic1D s;
      s.breakpoints = j.value("breakpoints", std::vector<double>{});
      s.slopes = j.at("slopes").get<std::vector<double>>();
      s.gradient_at_zero_offset = j.value("gradient_at_zero_offset", 0.0);
      return s;
    }
    throw Error(ErrorCode::kInvalidConfig, fmt::format("unknown objective kind '{}'", kind));
  });
}

Objective objective_from_json(const Json& j) {
  try {
    return make_objective(objective_description_from_json(j));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidSpec) throw Error(ErrorCode::kInvalidConfig, e.what());
    throw;
  }
}

Json to_json(const HessianBound& bound) {
  return {{"kappa", bound.kappa},
          {"majorant_eigmax", bound.majorant_eigmax},
          {"effective_smoothness", bound.effective_smoothness()}};
}

Json to_json(const CurveReport& report) {
  return {{"deltas", report.deltas},
          {"second_diffs", report.second_diffs},
          {"monotone_values", report.monotone_values},
          {"convex_curve", report.convex_curve},
          {"first_convexity_violation", optional_index(report.first_convexity_violation)},
          {"gradnorm_monotone", report.gradnorm_monotone},
          {"tolerance", report.tolerance}};
}

Json to_json(const NogoGapReport& report) {
  return {{"index", report.index}, {"lhs", report.lhs},           {"rhs", report.rhs},
          {"gap", report.gap},     {"violated", report.violated}, {"tolerance", report.tolerance}};
}

Json to_json(const ImpossibilityWitness& witness) {
  return {{"delta", witness.delta},
          {"L", witness.L},
          {"alpha_star", witness.alpha_star},
          {"alpha_grid", witness.alpha_grid}};
}

Json to_json(const SublevelAudit& audit) {
  return {{"level", audit.level},
          {"effective_smoothness", audit.effective_smoothness},
          {"convexity_threshold", audit.convexity_threshold},
          {"eta", audit.eta},
          {"invariant", audit.invariant},
          {"violating_indices", audit.violating_indices},
          {"diverged", audit.diverged},
          {"curve", to_json(audit.curve)},
          {"tolerance", audit.tolerance}};
}

Json to_json(const DivergenceReport& divergence) {
  return {{"failing_index", divergence.failing_index}, {"reason", divergence.reason}};
}

Json to_json(const SearchConfig& c) {
  return {{"L", c.L},
          {"eta_range", {c.eta_min, c.eta_max}},
          {"max_breakpoints", c.max_breakpoints},
          {"samples", c.samples},
          {"seed", c.seed},
          {"steps", c.steps},
          {"tolerance", c.tolerance},
          {"domain_radius", c.domain_radius},
          {"refine_rounds", c.refine_rounds},
          {"refine_window", c.refine_window}};
}

Json to_json(const Witness& w) {
  return {{"spec", to_json(ObjectiveDescription{w.spec})},
          {"L", w.L},
          {"x0", w.x0},
          {"eta", w.eta},
          {"steps", w.steps},
          {"violation_index", w.violation_index},
          {"second_diff", w.second_diff},
          {"nogo", to_json(w.nogo)},
          {"tolerance", w.tolerance},
          {"candidate_index", w.candidate_index}};
}

Json to_json(const SearchResult& result) {
  return {{"found", result.found},
          {"candidates_examined", result.candidates_examined},
          {"witness", result.witness ? to_json(*result.witness) : Json(nullptr)}};
}

NoiseSchedule noise_schedule_from_json(const Json& j) {
  return guarded("noise schedule", [&] {
    NoiseSchedule noise;
    noise.delta = j.at("delta").get<double>();
    noise.epsilons = j.at("epsilons").get<std::vector<double>>();
    return noise;
  });
}

SearchConfig search_config_from_json(const Json& j) {
  return guarded("search config", [&] {
    SearchConfig c;
    c.L = j.value("L", c.L);
    if (j.contains("eta_range")) {
      const auto range = j.at("eta_range").get<std::vector<double>>();
      if (range.size() != 2) throw Error(ErrorCode::kInvalidConfig, "eta_range needs two entries");
      c.eta_min = range[0];
      c.eta_max = range[1];
    } else {
      c.eta_min = 1.76 / c.L;
      c.eta_max = 1.99 / c.L;
    }
    c.max_breakpoints = j.value("max_breakpoints", c.max_breakpoints);
    c.samples = j.value("samples", c.samples);
    c.seed = j.value("seed", c.seed);
    c.steps = j.value("steps", c.steps);
    c.tolerance = j.value("tolerance", c.tolerance);
    c.domain_radius = j.value("domain_radius", c.domain_radius);
    c.refine_rounds = j.value("refine_rounds", c.refine_rounds);
    c.refine_window = j.value("refine_window", c.refine_window);
    return c;
  });
}

Witness witness_from_json(const Json& j) {
  return guarded("witness", [&] {
    Witness w;
    const auto description = objective_description_from_json(j.at("spec"));
    if (!std::holds_alternative<PiecewiseQuadratic1D>(description)) {
      throw Error(ErrorCode::kInvalidConfig, "witness spec must be a piecewise1d objective");
    }
    w.spec = std::get<PiecewiseQuadratic1D>(description);
    w.L = j.at("L").get<double>();
    w.x0 = j.at("x0").get<double>();
    w.eta = j.at("eta").get<double>();
    w.steps = j.at("steps").get<std::size_t>();
    w.violation_index = j.at("violation_index").get<std::size_t>();
    w.second_diff = j.value("second_diff", 0.0);
    w.tolerance = j.value("tolerance", kDefaultTolerance);
    w.candidate_index = j.value("candidate_index", std::size_t{0});
    if (j.contains("nogo")) {
      const Json& n = j.at("nogo");
      w.nogo.index = n.at("index").get<std::size_t>();
      w.nogo.lhs = n.at("lhs").get<double>();
      w.nogo.rhs = n.at("rhs").get<double>();
      w.nogo.gap = n.at("gap").get<double>();
      w.nogo.violated = n.at("violated").get<bool>();
      w.nogo.tolerance = n.value("tolerance", w.tolerance);
    }
    return w;
  });
}

SearchResult search_result_from_json(const Json& j) {
  return guarded("search result", [&] {
    SearchResult r;
    r.found = j.at("found").get<bool>();
    r.candidates_examined = j.value("candidates_examined", std::size_t{0});
    if (j.contains("witness") && !j.at("witness").is_null()) {
      r.witness = witness_from_json(j.at("witness"));
    }
    return r;
  });
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  const std::size_t d = trajectory.points.empty() ? 0 : trajectory.points.front().size();
  out << "n,value,gradnorm";
  for (std::size_t i = 0; i < d; ++i) out << ",x_" << i;
  out << '\n';
  for (std::size_t n = 0; n < trajectory.size(); ++n) {
    out << n << ',' << format_double(trajectory.values[n]) << ','
        << format_double(trajectory.gradnorms[n]);
    for (double x : trajectory.points[n]) out << ',' << format_double(x);
    out << '\n';
  }
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kInvalidConfig, fmt::format("malformed JSON: {}", e.what()));
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidConfig, fmt::format("cannot open '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str());
}

}  // namespace curvelab
