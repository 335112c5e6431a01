#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "uqdc/harness.hpp"
#include "uqdc/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCriteriaFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void print_summary(const uqdc::ExperimentReport& report) {
  const auto& cfg = report.config;
  std::cout << "experiment " << uqdc::to_string(cfg.experiment) << ", m=" << cfg.m << ", replicates "
            << cfg.replicates << "\n";
  std::cout << "n:";
  for (unsigned n : cfg.orders) std::cout << "\t" << n;
  std::cout << "\nE_i(r):";
  for (double e : report.mean.expected_ratio) std::printf("\t%.3f", e);
  std::cout << "\nwritten to " << cfg.output_dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-consistent forward and inverse UQ experiments with surrogate maps"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicates;
  std::optional<std::string> out;

  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config and write its tables");
  std::string config_path;
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--seed", seed, "Override the base seed");
  run->add_option("--replicates", replicates, "Override the replicate count")->check(CLI::PositiveNumber);
  run->add_option("--out", out, "Override the output directory");

  auto* verify = app.add_subcommand("verify", "Run the acceptance checks for one experiment");
  std::string experiment;
  verify->add_option("--experiment", experiment, "ode, pde or singular")
      ->required()
      ->check(CLI::IsMember({"ode", "pde", "singular"}));
  verify->add_option("--seed", seed, "Override the base seed");
  verify->add_option("--replicates", replicates, "Override the replicate count")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      uqdc::ExperimentConfig cfg = uqdc::load_config(config_path);
      if (seed) cfg.seed = *seed;
      if (replicates) cfg.replicates = *replicates;
      if (out) cfg.output_dir = *out;
      cfg.validate();
      const auto report = uqdc::run_experiment(cfg);
      uqdc::emit_tables(report, cfg.output_dir);
      print_summary(report);
      return kExitOk;
    }
    uqdc::AcceptanceSuite::Options opts;
    if (seed) opts.seed = *seed;
    if (replicates) opts.replicates = *replicates;
    uqdc::AcceptanceSuite suite(opts);
    bool all = true;
    for (int id : uqdc::AcceptanceSuite::criteria_for(uqdc::parse_experiment(experiment))) {
      const auto result = suite.run(id);
      std::cout << result.line() << std::endl;
      all = all && result.passed;
    }
    return all ? kExitOk : kExitCriteriaFailed;
  } catch (const uqdc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}
