// curvelab: run, verify, sweep, search and replay optimization-curve experiments.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "curvelab/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = curvelab::cli;

  CLI::App app{"Convexity of optimization curves for constant-stepsize first-order methods"};
  app.require_subcommand(1);

  cli::Options options;
  std::string suite;
  std::uint64_t seed = 0;
  double tolerance = 0.0;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* config = sub->add_option("--config", options.config, "JSON config file");
    if (needs_config) config->required()->check(CLI::ExistingFile);
    sub->add_option("--out", options.out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--tolerance", tolerance, "absolute verdict tolerance")
        ->check(CLI::NonNegativeNumber);
  };

  auto* run = app.add_subcommand("run", "run one experiment; writes trajectory CSV and report JSON");
  add_common(run, true);
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "imposs|quad|twostep|local|nogo|all")->required();
  add_common(verify, false);
  auto* sweep = app.add_subcommand("sweep", "grid over eta (and one of delta/theta/L)");
  add_common(sweep, true);
  auto* search = app.add_subcommand("search", "search for nonconvex GD curves in (1.75/L, 2/L)");
  add_common(search, true);
  auto* replay = app.add_subcommand("replay", "re-simulate a witness from a search result");
  add_common(replay, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitSuccess : cli::kExitUsage;
  }

  for (auto* sub : {run, verify, sweep, search, replay}) {
    if (sub->count("--seed") > 0) options.seed = seed;
    if (sub->count("--tolerance") > 0) options.tolerance = tolerance;
  }

  if (run->parsed()) return cli::cmd_run(options, std::cout, std::cerr);
  if (verify->parsed()) return cli::cmd_verify(suite, options, std::cout, std::cerr);
  if (sweep->parsed()) return cli::cmd_sweep(options, std::cout, std::cerr);
  if (search->parsed()) return cli::cmd_search(options, std::cout, std::cerr);
  if (replay->parsed()) return cli::cmd_replay(options, std::cout, std::cerr);
  return cli::kExitUsage;
}
