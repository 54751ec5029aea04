#include "curvelab/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "curvelab/constructions.hpp"
#include "curvelab/diagnostics.hpp"
#include "curvelab/error.hpp"
#include "curvelab/parallel.hpp"
#include "curvelab/search.hpp"
#include "curvelab/verify.hpp"

namespace curvelab::cli {

namespace fs = std::filesystem;

namespace {

Scheme parse_scheme(const std::string& name) {
  if (name == "gd") return Scheme::kGradientDescent;
  if (name == "inexact") return Scheme::kInexact;
  if (name == "twostep") return Scheme::kTwoStep;
  throw Error(ErrorCode::kInvalidConfig, fmt::format("unknown scheme '{}'", name));
}

void require_field(const Json& j, const char* key, bool wanted, Scheme scheme) {
  const bool present = j.contains(key);
  if (wanted && !present) {
    throw Error(ErrorCode::kInvalidConfig,
                fmt::format("scheme '{}' requires field '{}'", to_string(scheme), key));
  }
  if (!wanted && present) {
    throw Error(ErrorCode::kInvalidConfig,
                fmt::format("field '{}' is not used by scheme '{}'", key, to_string(scheme)));
  }
}

Vector default_start(const ObjectiveDescription& objective, const Json& j) {
  if (j.contains("x0")) return j.at("x0").get<Vector>();
  if (const auto* q = std::get_if<QuadraticSpec>(&objective)) return q->initial_coords;
  throw Error(ErrorCode::kInvalidConfig, "field 'x0' is required for this objective");
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidConfig, fmt::format("cannot write '{}'", path.string()));
  out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json regime_json(const Objective& objective, double eta) {
  const auto L = objective.smoothness();
  if (!L || !(*L > 0.0) || !(eta > 0.0)) return nullptr;
  return std::string(to_string(threshold_report(*L, eta)));
}

// Maps library errors to the CLI's exit-code contract.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error (invalid-config): " << e.what() << '\n';
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace

std::vector<double> parse_grid(const Json& j) {
  if (j.is_number()) return {j.get<double>()};
  if (j.is_array()) return j.get<std::vector<double>>();
  if (j.is_object()) {
    const double from = j.at("from").get<double>();
    const double to = j.at("to").get<double>();
    const auto count = j.at("count").get<std::size_t>();
    std::vector<double> grid(count);
    for (std::size_t k = 0; k < count; ++k) {
      grid[k] = count == 1 ? from : from + (to - from) * double(k) / double(count - 1);
    }
    return grid;
  }
  throw Error(ErrorCode::kInvalidConfig, "grid must be a number, an array or {from, to, count}");
}

RunConfig run_config_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "run config must be a JSON object");
    RunConfig c;
    c.objective = objective_description_from_json(j.at("objective"));
    c.scheme = parse_scheme(j.at("scheme").get<std::string>());
    c.x0 = default_start(c.objective, j);
    c.eta = j.at("eta").get<double>();
    c.steps = j.at("steps").get<std::size_t>();
    c.tolerance = j.value("tolerance", c.tolerance);
    c.trajectory_file = j.value("trajectory_csv", c.trajectory_file);
    c.report_file = j.value("report_json", c.report_file);

    const bool inexact = c.scheme == Scheme::kInexact;
    const bool twostep = c.scheme == Scheme::kTwoStep;
    require_field(j, "delta", inexact, c.scheme);
    require_field(j, "epsilons", inexact, c.scheme);
    require_field(j, "theta", twostep, c.scheme);
    require_field(j, "x_minus1", twostep, c.scheme);
    if (inexact) c.noise = noise_schedule_from_json(j);
    if (twostep) {
      c.theta = j.at("theta").get<double>();
      c.x_minus1 = j.at("x_minus1").get<Vector>();
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, fmt::format("run config: {}", e.what()));
  }
}

RunArtifacts execute_run(const RunConfig& config) {
  Objective objective = [&] {
    try {
      return make_objective(config.objective);
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidConfig, e.what());
    }
  }();

  RunArtifacts artifacts;
  switch (config.scheme) {
    case Scheme::kGradientDescent:
      artifacts.run = run_gd(objective, config.x0, config.eta, config.steps);
      break;
    case Scheme::kInexact:
      artifacts.run = run_inexact_gd(objective, config.x0, config.eta, *config.noise, config.steps);
      break;
    case Scheme::kTwoStep:
      artifacts.run = run_two_step(
          objective, config.x0, TwoStepConfig{config.eta, *config.theta, *config.x_minus1},
          config.steps);
      break;
  }

  const Trajectory& traj = artifacts.run.trajectory;
  Json report = {{"scheme", to_string(config.scheme)},
                 {"objective", to_json(config.objective)},
                 {"eta", config.eta},
                 {"steps", config.steps},
                 {"points", traj.size()},
                 {"smoothness", objective.smoothness() ? Json(*objective.smoothness()) : Json()},
                 {"regime", regime_json(objective, config.eta)}};
  report["curve"] = traj.size() >= 2 ? to_json(analyze_curve(traj, config.tolerance)) : Json();
  report["divergence"] =
      artifacts.run.divergence ? to_json(*artifacts.run.divergence) : Json();
  artifacts.report = std::move(report);
  return artifacts;
}

int cmd_run(const Options& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig config = run_config_from_json(read_json_file(options.config));
    if (options.tolerance) config.tolerance = *options.tolerance;
    const RunArtifacts artifacts = execute_run(config);

    const fs::path dir(options.out_dir);
    fs::create_directories(dir);
    {
      std::ofstream csv(dir / config.trajectory_file);
      if (!csv) throw Error(ErrorCode::kInvalidConfig, "cannot write trajectory CSV");
      write_trajectory_csv(csv, artifacts.run.trajectory);
    }
    write_text(dir / config.report_file, dump(artifacts.report));

    const Json& curve = artifacts.report["curve"];
    out << fmt::format("{}: {} points", to_string(config.scheme), artifacts.run.trajectory.size());
    if (!curve.is_null()) {
      out << fmt::format(", convex_curve={}, monotone_values={}",
                         curve["convex_curve"].get<bool>(), curve["monotone_values"].get<bool>());
      if (!curve["first_convexity_violation"].is_null()) {
        out << fmt::format(", first violation at n={}",
                           curve["first_convexity_violation"].get<std::size_t>());
      }
    }
    if (artifacts.run.divergence) {
      out << fmt::format(", diverged at {}", artifacts.run.divergence->failing_index);
    }
    out << '\n';
    return kExitSuccess;
  });
}

int cmd_verify(const std::string& suite, const Options& options, std::ostream& out,
               std::ostream& err) {
  if (!is_known_suite(suite)) {
    err << fmt::format("error: unknown suite '{}' (expected imposs|quad|twostep|local|nogo|all)\n",
                       suite);
    return kExitUsage;
  }
  return guarded(err, [&] {
    const auto checks = run_verify_suite(suite, options.seed.value_or(0));
    print_check_table(out, checks);
    const bool ok = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
    return ok ? kExitSuccess : kExitSuiteFailure;
  });
}

namespace {

struct SweepPoint {
  double eta = 0.0;
  std::optional<double> delta;
  std::optional<double> theta;
  std::optional<double> L;
};

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

int cmd_sweep(const Options& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Json j = read_json_file(options.config);
    const ObjectiveDescription base = objective_description_from_json(j.at("objective"));
    const Scheme scheme = parse_scheme(j.value("scheme", std::string("gd")));
    const Vector x0 = default_start(base, j);
    const auto steps = j.at("steps").get<std::size_t>();
    const double tolerance = options.tolerance.value_or(j.value("tolerance", kDefaultTolerance));
    const bool inverse_L = j.value("eta_scale", std::string("absolute")) == "inverse_L";

    const std::vector<double> etas = parse_grid(j.at("eta"));

    // At most one secondary axis; arrays and ranges are axes, bare numbers are fixed.
    std::string axis;
    for (const char* key : {"delta", "theta", "L"}) {
      if (j.contains(key) && !j.at(key).is_number()) {
        if (!axis.empty()) {
          throw Error(ErrorCode::kInvalidConfig,
                      fmt::format("sweep grids cross eta with one axis; got '{}' and '{}'", axis, key));
        }
        axis = key;
      }
    }
    if ((scheme == Scheme::kInexact) != j.contains("delta")) {
      throw Error(ErrorCode::kInvalidConfig, "'delta' is required by, and only by, scheme inexact");
    }
    if ((scheme == Scheme::kTwoStep) != j.contains("theta")) {
      throw Error(ErrorCode::kInvalidConfig, "'theta' is required by, and only by, scheme twostep");
    }
    if (j.contains("L") && !std::holds_alternative<ScaledQuadratic1D>(base)) {
      throw Error(ErrorCode::kInvalidConfig, "an 'L' grid needs a scaled1d objective");
    }
    const std::vector<double> pattern =
        j.value("epsilon_pattern", std::vector<double>{-1.0, 1.0});
    const Vector x_minus1 = j.value("x_minus1", x0);

    const std::vector<double> axis_values =
        axis.empty() ? std::vector<double>{0.0} : parse_grid(j.at(axis));
    if (etas.empty() || axis_values.empty()) {
      throw Error(ErrorCode::kInvalidConfig, "sweep grid is empty");
    }

    std::vector<SweepPoint> points;
    for (double a : axis_values) {
      for (double e : etas) {
        SweepPoint p;
        p.eta = e;
        if (j.contains("delta")) p.delta = axis == "delta" ? a : j.at("delta").get<double>();
        if (j.contains("theta")) p.theta = axis == "theta" ? a : j.at("theta").get<double>();
        if (j.contains("L")) p.L = axis == "L" ? a : j.at("L").get<double>();
        points.push_back(p);
      }
    }

    std::vector<std::string> rows(points.size());
    parallel_for(points.size(), [&](std::size_t idx) {
      const SweepPoint& p = points[idx];
      ObjectiveDescription desc = base;
      if (p.L) desc = ScaledQuadratic1D{*p.L};
      const Objective objective = make_objective(desc);
      const auto L = objective.smoothness();
      const double eta = inverse_L ? p.eta / L.value_or(1.0) : p.eta;

      RunResult run;
      if (scheme == Scheme::kGradientDescent) {
        run = run_gd(objective, x0, eta, steps);
      } else if (scheme == Scheme::kInexact) {
        NoiseSchedule noise{*p.delta, std::vector<double>(steps, 0.0)};
        for (std::size_t n = 0; n < std::min(steps, pattern.size()); ++n) {
          noise.epsilons[n] = pattern[n] * *p.delta;
        }
        run = run_inexact_gd(objective, x0, eta, noise, steps);
      } else {
        run = run_two_step(objective, x0, TwoStepConfig{eta, *p.theta, x_minus1}, steps);
      }

      std::optional<double> alpha, s_alpha;
      if (L) alpha = eta * *L;
      if (alpha && p.delta && *p.delta > 0.0 && *p.delta < 1.0) s_alpha = s_function(*alpha, *p.delta);

      const Trajectory& traj = run.trajectory;
      std::string row = fmt::format("{},{},{},{},{},{},{}", idx, format_double(eta), cell(p.delta),
                                    cell(p.theta), cell(L), cell(alpha), cell(s_alpha));
      if (traj.size() >= 2) {
        const CurveReport report = analyze_curve(traj, tolerance);
        const auto& d = report.deltas;
        double min_sd = std::numeric_limits<double>::infinity();
        for (double sd : report.second_diffs) min_sd = std::min(min_sd, sd);
        row += fmt::format(
            ",{},{},{},{},{},{},{},{}", format_double(d[0]),
            d.size() > 1 ? format_double(d[1]) : "",
            report.second_diffs.empty() ? "" : format_double(min_sd), int(report.monotone_values),
            int(report.convex_curve), int(!report.convex_curve),
            report.first_convexity_violation ? std::to_string(*report.first_convexity_violation)
                                             : "",
            int(report.gradnorm_monotone));
      } else {
        row += ",,,,,,,,";
      }
      row += fmt::format(",{},{}", int(run.diverged()),
                         L && *L > 0.0 && eta > 0.0 ? to_string(threshold_report(*L, eta)) : "");
      rows[idx] = std::move(row);
    });

    std::string csv =
        "point,eta,delta,theta,L,alpha,S_alpha,delta0,delta1,min_second_diff,monotone_values,"
        "convex_curve,violated,first_violation,gradnorm_monotone,diverged,regime\n";
    for (const auto& r : rows) csv += r + '\n';
    const fs::path path = fs::path(options.out_dir) / j.value("output", std::string("sweep.csv"));
    write_text(path, csv);
    out << fmt::format("sweep: {} points written to {}\n", rows.size(), path.string());
    return kExitSuccess;
  });
}

int cmd_search(const Options& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    SearchConfig config = search_config_from_json(read_json_file(options.config));
    if (options.seed) config.seed = *options.seed;
    if (options.tolerance) config.tolerance = *options.tolerance;
    const SearchResult result = search_nonconvex_curve(config);

    Json doc = to_json(result);
    doc["config"] = to_json(config);
    const fs::path path = fs::path(options.out_dir) / "search_result.json";
    write_text(path, dump(doc));
    if (result.found) {
      const Witness& w = *result.witness;
      out << fmt::format(
          "search: witness at candidate {} (eta={}, n={}, D_n-D_n+1={:.6g}, nogo violated={})\n",
          w.candidate_index, format_double(w.eta), w.violation_index, w.second_diff,
          w.nogo.violated);
    } else {
      out << fmt::format("search: not found after {} candidates\n", result.candidates_examined);
    }
    return kExitSuccess;
  });
}

int cmd_replay(const Options& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Json j = read_json_file(options.config);
    Witness witness;
    if (j.contains("found")) {
      const SearchResult result = search_result_from_json(j);
      if (!result.witness) {
        throw Error(ErrorCode::kInvalidConfig, "search result holds no witness to replay");
      }
      witness = *result.witness;
    } else {
      witness = witness_from_json(j);
    }
    if (options.tolerance) witness.tolerance = *options.tolerance;

    const ReplayOutcome replay = replay_witness(witness);
    Json doc = {{"reproduced", replay.reproduced},
                {"curve", to_json(replay.report)},
                {"nogo", to_json(replay.nogo)},
                {"witness", to_json(witness)}};
    write_text(fs::path(options.out_dir) / "replay.json", dump(doc));
    out << fmt::format("replay: violation at n={} {}; nogo gap={:.6g} violated={}\n",
                       witness.violation_index, replay.reproduced ? "reproduced" : "NOT reproduced",
                       replay.nogo.gap, replay.nogo.violated);
    return replay.reproduced ? kExitSuccess : kExitSuiteFailure;
  });
}

}  // namespace curvelab::cli
