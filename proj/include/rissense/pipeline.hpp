// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rissense/config.hpp"
#include "rissense/fcao.hpp"
#include "rissense/recognizer.hpp"
#include "rissense/scenes.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rissense {

/// Everything derived from a config before any command-specific work:
/// the dictionary, the posture masks and the noise-calibrated radio.
struct Experiment {
  ExperimentConfig config;
  SensingDictionary dictionary;
  std::vector<PostureSpec> postures;
  RadioParams radio;
  double los_distance = 0.0;
};

Experiment prepare_experiment(const ExperimentConfig& config);

FcaoResult optimize_configuration(const Experiment& ex);
/// The seeded random T0 that optimize_configuration starts from.
ConfigurationMatrix random_baseline(const Experiment& ex);
ConfigurationMatrix fixed_baseline(const Experiment& ex);

DatasetPair make_datasets(const Experiment& ex, const ConfigurationMatrix& T);

struct TrainEvalResult {
  TrainResult training;
  EvaluationReport report;
};

TrainEvalResult train_and_evaluate(const Experiment& ex, const LabeledDataset& train_set, const LabeledDataset& test_set);

struct ComparisonRow {
  std::string label;
  double mu = 0.0;
  double accuracy = 0.0;
  double psi = 0.0;
};

/// Optimized, random and fixed-state legs sharing one dataset seed.
std::vector<ComparisonRow> run_comparison(const Experiment& ex);

// Commands behind the CLI. Each writes its artifacts under config.out_dir
// and a one-line summary to `log`.
void cmd_optimize_config(const ExperimentConfig& config, std::ostream& log);
void cmd_gen_dataset(const ExperimentConfig& config, const std::filesystem::path& configuration, std::ostream& log);
void cmd_train_eval(const ExperimentConfig& config, const std::filesystem::path& train_path,
                    const std::filesystem::path& test_path, std::ostream& log);
void cmd_compare(const ExperimentConfig& config, std::ostream& log);
void cmd_coherence_report(const ExperimentConfig& config, const std::filesystem::path& configuration, std::ostream& log);

namespace artifact {
inline constexpr const char* kConfiguration = "configuration.txt";
inline constexpr const char* kDictionary = "dictionary.txt";
inline constexpr const char* kHistory = "mu_history.csv";
inline constexpr const char* kTrain = "train.csv";
inline constexpr const char* kTest = "test.csv";
inline constexpr const char* kModel = "model.txt";
inline constexpr const char* kConfusion = "confusion.csv";
inline constexpr const char* kSummary = "summary.csv";
inline constexpr const char* kCompare = "compare.csv";
inline constexpr const char* kCoherence = "coherence.csv";
inline constexpr const char* kCoherenceSummary = "coherence_summary.csv";
}  // namespace artifact

/// Process exit code for the exception currently being handled:
/// 2 config, 3 artifact, 4 numeric, 1 anything else.
int exit_code_for_current_exception(std::string* message);

}  // namespace rissense
