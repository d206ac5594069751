// SPDX-License-Identifier: Apache-2.0
//
// rissense command line: optimize-config, gen-dataset, train-eval, compare,
// coherence-report.

#include "rissense/config.hpp"
#include "rissense/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> noise;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON experiment config (defaults apply when omitted)");
  cmd->add_option("--seed", c.seed, "override the master seed");
  cmd->add_option("--out", c.out, "override the output directory");
  cmd->add_option("--noise", c.noise, "override dataset noise")->check(CLI::IsMember({"on", "off"}));
}

rissense::ExperimentConfig resolve(const Common& c) {
  rissense::ExperimentConfig cfg = c.config_path.empty() ? rissense::parse_config("{}") : rissense::load_config(c.config_path);
  if (c.seed) cfg.seed = *c.seed;
  if (c.out) cfg.out_dir = *c.out;
  if (c.noise) cfg.dataset.noise = *c.noise == "on";
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS sensing: configuration optimization and posture recognition"};
  app.require_subcommand(1);
  Common common;

  auto* optimize = app.add_subcommand("optimize-config", "optimize the configuration matrix with FCAO");
  add_common(optimize, common);

  std::string configuration;
  auto* gen = app.add_subcommand("gen-dataset", "generate train/test measurement datasets");
  add_common(gen, common);
  gen->add_option("--configuration", configuration, "configuration matrix artifact (default OUT/configuration.txt)");

  std::string train_path, test_path;
  auto* train = app.add_subcommand("train-eval", "train the recognizer and evaluate it on the test split");
  add_common(train, common);
  train->add_option("--train", train_path, "train split (default OUT/train.csv)");
  train->add_option("--test", test_path, "test split (default OUT/test.csv)");

  auto* compare = app.add_subcommand("compare", "optimized vs random vs fixed-state configurations");
  add_common(compare, common);

  auto* report = app.add_subcommand("coherence-report", "pairwise column coherences of a configuration");
  add_common(report, common);
  report->add_option("--configuration", configuration, "configuration matrix artifact (default OUT/configuration.txt)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const rissense::ExperimentConfig cfg = resolve(common);
    const auto in_out = [&](const std::string& given, const char* name) {
      return given.empty() ? cfg.out_dir / name : std::filesystem::path(given);
    };
    if (*optimize) {
      rissense::cmd_optimize_config(cfg, std::cout);
    } else if (*gen) {
      rissense::cmd_gen_dataset(cfg, in_out(configuration, rissense::artifact::kConfiguration), std::cout);
    } else if (*train) {
      rissense::cmd_train_eval(cfg, in_out(train_path, rissense::artifact::kTrain),
                               in_out(test_path, rissense::artifact::kTest), std::cout);
    } else if (*compare) {
      rissense::cmd_compare(cfg, std::cout);
    } else if (*report) {
      rissense::cmd_coherence_report(cfg, in_out(configuration, rissense::artifact::kConfiguration), std::cout);
    }
  } catch (...) {
    std::string message;
    const int rc = rissense::exit_code_for_current_exception(&message);
    std::cerr << "error: " << message << '\n';
    return rc;
  }
  return 0;
}
