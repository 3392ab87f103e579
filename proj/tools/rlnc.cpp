// Command-line front end: analyze, simulate, enumerate, generate, sweep.

#include <CLI11.hpp>
#include <iostream>

#include "rlnc/commands.hpp"

namespace {

void add_format(CLI::App* cmd, rlnc::RunConfig& cfg) {
  static const std::map<std::string, rlnc::OutputFormat> formats{
      {"json", rlnc::OutputFormat::kJson}, {"csv", rlnc::OutputFormat::kCsv}};
  cmd->add_option("--format", cfg.format, "Output format: json or csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case).description("{json,csv}"));
}

void add_network_flags(CLI::App* cmd, rlnc::RunConfig& cfg) {
  cmd->add_option("--network", cfg.network_path, "Network JSON file")->required();
  cmd->add_option("--rate", cfg.rate, "Information rate w")->required();
  cmd->add_option("--field", cfg.field, "Field order q (prime or power of two <= 65536)")
      ->default_val(2);
  add_format(cmd, cfg);
}

}  // namespace

int main(int argc, char** argv) {
  rlnc::RunConfig cfg;
  CLI::App app{"Failure-probability bounds, simulation and enumeration for random linear network coding"};
  app.require_subcommand(1);

  auto* analyze = app.add_subcommand("analyze", "Evaluate every applicable bound exactly");
  add_network_flags(analyze, cfg);
  static const std::map<std::string, rlnc::PathStrategy> strategies{
      {"first-found", rlnc::PathStrategy::kFirstFound},
      {"min-internal", rlnc::PathStrategy::kMinInternal}};
  analyze->add_option("--paths", cfg.paths, "Path strategy: first-found or min-internal")
      ->transform(CLI::CheckedTransformer(strategies, CLI::ignore_case).description("{first-found,min-internal}"));
  analyze->add_option("--budget", cfg.budget, "Search budget for min-internal paths");
  analyze->add_option("--n", cfg.n, "Known upper bound n on the sum of r_i");
  analyze->add_option("--m", cfg.m, "Known upper bound m on the internal node count");
  analyze->add_flag("--explain", cfg.explain, "Include the cut listing");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of failure probabilities");
  add_network_flags(simulate, cfg);
  simulate->add_option("--trials", cfg.trials, "Number of trials")->required();
  simulate->add_option("--seed", cfg.seed, "Seed")->default_val(0);
  simulate->add_option("--workers", cfg.workers, "Worker threads")->default_val(1)->check(CLI::PositiveNumber);

  auto* enumerate = app.add_subcommand("enumerate", "Exact failure probabilities by enumeration");
  add_network_flags(enumerate, cfg);
  enumerate->add_option("--cap", cfg.cap, "Maximum number of assignments");
  enumerate->add_option("--workers", cfg.workers, "Worker threads")->default_val(1)->check(CLI::PositiveNumber);

  auto* generate = app.add_subcommand("generate", "Write a network file");
  generate->add_option("family", cfg.family, "butterfly, plait, plait-union or random")->required();
  generate->add_option("--out", cfg.out_path, "Output file (stdout when omitted)");
  generate->add_option("--w", cfg.plait_w, "Channels per stage (plait, plait-union)");
  generate->add_option("--r", cfg.plait_r, "Internal nodes (plait)");
  generate->add_option("--R", cfg.union_R, "Internal nodes on the first chain (plait-union)");
  generate->add_option("--l", cfg.union_l, "Sinks (plait-union)");
  generate->add_option("--layers", cfg.layers, "Layers (random)");
  generate->add_option("--width", cfg.width, "Nodes per layer (random)");
  generate->add_option("--rate", cfg.rate, "Required min-cut (random)");
  generate->add_option("--sinks", cfg.sinks, "Sinks (random)");
  generate->add_option("--seed", cfg.seed, "Seed (random)");

  auto* sweep = app.add_subcommand("sweep", "Scale a bound by q over a list of field orders");
  sweep->add_option("--bound", cfg.bound, "thm2, thm3, thm4, thm7, thm8 or lower")->default_val("thm3");
  sweep->add_option("--fields", cfg.fields, "Field orders")->delimiter(',')->required();
  sweep->add_option("--network", cfg.network_path, "Derive n, l, |J|, r, delta from a network");
  sweep->add_option("--rate", cfg.rate, "Information rate w");
  sweep->add_option("--n", cfg.n, "Upper bound on sum r_i");
  sweep->add_option("--l", cfg.l, "Sink count");
  sweep->add_option("--m", cfg.m, "Internal node count");
  sweep->add_option("--r", cfg.r, "Internal nodes on one sink's paths");
  sweep->add_option("--delta", cfg.delta, "Capacity slack C_t - w");
  add_format(sweep, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    nlohmann::ordered_json err{{"error", "usage"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return rlnc::kExitUsage;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();

  const auto result = rlnc::run_command(cfg);
  std::cout << result.out;
  std::cerr << result.err;
  return result.exit_code;
}
