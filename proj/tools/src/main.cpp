#include <iostream>

#include <CLI11.hpp>

#include "slowvary_cli/commands.hpp"
#include "slowvary_cli/config.hpp"

namespace cli = slowvary::cli;

int main(int argc, char** argv) {
  CLI::App app{"slowvary: slowly-varying two-armed bandit experiments"};
  app.require_subcommand(1);
  cli::Options opt;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Experiment config (JSON)");
    sub->add_option("--out", opt.out, "Output file or directory");
  };
  auto instance_source = [&](CLI::App* sub) {
    sub->add_option("--instance", opt.instance, "Instance file (JSON)");
    sub->add_option("--spec", opt.spec, "Inline generator spec (JSON)");
    sub->add_option("--T", opt.T, "Horizon for --spec");
  };
  auto replication = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed, "Base seed");
    sub->add_option("--runs", opt.runs, "Number of runs");
    sub->add_option("--decimate", opt.decimate, "Write every n-th timestep");
  };

  auto* validate = app.add_subcommand("validate", "Check an instance against its drift limit");
  common(validate);
  validate->add_option("--instance", opt.instance, "Instance file (JSON)");
  validate->add_option("--delta", opt.delta, "Drift limit to check instead of the file's");

  auto* gen = app.add_subcommand("gen", "Write the instance described by a config or spec");
  common(gen);
  instance_source(gen);

  auto* gap = app.add_subcommand("gap-profile", "Gap and detectable gap profile as CSV");
  common(gap);
  instance_source(gap);
  gap->add_option("--decimate", opt.decimate, "Write every n-th timestep");

  auto* run = app.add_subcommand("run", "Replicate every configured policy");
  common(run);
  replication(run);

  auto* sweep = app.add_subcommand("sweep", "Run the config once per drift limit");
  common(sweep);
  replication(sweep);
  sweep->add_option("--delta", opt.delta, "Single drift limit overriding the config list");

  auto* bounds = app.add_subcommand("bounds", "Theoretical quantities for (T, delta[, instance])");
  common(bounds);
  instance_source(bounds);
  bounds->add_option("--delta", opt.delta, "Drift limit");

  auto* lb = app.add_subcommand("lb-verify", "Change-of-measure and block checks on the lower-bound pair");
  lb->add_option("--out", opt.out, "CSV report file");
  lb->add_option("--m", opt.m, "Block length (default 64)");
  lb->add_option("--runs", opt.runs, "Monte-Carlo runs per instance (default 10000)");
  lb->add_option("--seed", opt.seed, "Base seed");
  lb->add_option("--policies", opt.policies, "Policies to check")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kError;
  }

  try {
    if (*validate) return cli::cmd_validate(opt, std::cout);
    if (*gen) return cli::cmd_gen(opt, std::cout);
    if (*gap) return cli::cmd_gap_profile(opt, std::cout);
    if (*run) return cli::cmd_run(opt, std::cout);
    if (*sweep) return cli::cmd_sweep(opt, std::cout);
    if (*bounds) return cli::cmd_bounds(opt, std::cout);
    if (*lb) return cli::cmd_lb_verify(opt, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kError;
  }
  return cli::kError;
}
