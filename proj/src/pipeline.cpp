// SPDX-License-Identifier: Apache-2.0

#include "rissense/pipeline.hpp"

#include "rissense/coherence.hpp"
#include "rissense/serialization.hpp"

#include <ostream>
#include <sstream>

namespace rissense {

namespace {

std::vector<std::string> posture_names(const Experiment& ex) {
  std::vector<std::string> names;
  for (const auto& p : ex.postures) names.push_back(p.name);
  return names;
}

template <class Writer>
void write_with(const std::filesystem::path& path, Writer&& w) {
  std::ostringstream os;
  w(os);
  write_text_file(path, os.str());
}

/// Loads a configuration artifact and checks it against the experiment shape.
ConfigurationMatrix load_matching_configuration(const Experiment& ex, const std::filesystem::path& path) {
  ConfigurationMatrix T = [&] {
    try {
      return load_configuration(path);
    } catch (const ArtifactError& e) {
      throw ArtifactError(path.string() + ": " + e.what());
    }
  }();
  const auto& c = ex.config;
  if (T.frames() != c.frames || T.groups() != c.groups() || T.states() != c.state_count()) {
    throw ArtifactError(path.string() + ": configuration is " + std::to_string(T.frames()) + "x" +
                        std::to_string(T.groups()) + "x" + std::to_string(T.states()) + " but the config expects " +
                        std::to_string(c.frames) + "x" + std::to_string(c.groups()) + "x" +
                        std::to_string(c.state_count()));
  }
  return T;
}

}  // namespace

Experiment prepare_experiment(const ExperimentConfig& config) {
  config.validate();
  Experiment ex;
  ex.config = config;
  ex.radio = config.radio;
  ex.dictionary = build_dictionary(config.scene, config.states, ex.radio);
  ex.postures = default_postures(config.scene);
  for (auto& p : ex.postures) {
    p.magnitude_min = config.postures.magnitude_min;
    p.magnitude_max = config.postures.magnitude_max;
    p.activation_probability = config.postures.activation_probability;
  }
  if (config.snr_db) calibrate_noise(ex.radio, static_reflected_power(ex.dictionary, ex.postures, ex.radio), *config.snr_db);
  ex.los_distance = los_distance(config.scene);
  return ex;
}

ConfigurationMatrix random_baseline(const Experiment& ex) {
  const auto& c = ex.config;
  return random_configuration(c.frames, c.groups(), c.state_count(), stream_seed(c, SeedStream::InitialConfiguration));
}

ConfigurationMatrix fixed_baseline(const Experiment& ex) {
  const auto& c = ex.config;
  return fixed_state_configuration(c.frames, c.groups(), c.state_count(), 0);
}

FcaoResult optimize_configuration(const Experiment& ex) {
  FcaoParams params = ex.config.fcao;
  params.seed = stream_seed(ex.config, SeedStream::Fcao);
  return fcao_optimize(random_baseline(ex), ex.dictionary, params);
}

DatasetPair make_datasets(const Experiment& ex, const ConfigurationMatrix& T) {
  DatasetSpec spec = ex.config.dataset;
  spec.seed = stream_seed(ex.config, SeedStream::Dataset);
  return generate_dataset(T, ex.dictionary, ex.postures, spec, ex.radio, ex.los_distance);
}

TrainEvalResult train_and_evaluate(const Experiment& ex, const LabeledDataset& train_set, const LabeledDataset& test_set) {
  TrainOptions options = ex.config.training;
  options.seed = stream_seed(ex.config, SeedStream::Training);
  TrainEvalResult out;
  out.training = train(train_set, ex.config.cost, options);
  out.report = evaluate(out.training.net, test_set, ex.config.cost);
  return out;
}

std::vector<ComparisonRow> run_comparison(const Experiment& ex) {
  const FcaoResult optimized = optimize_configuration(ex);
  const ConfigurationMatrix random = random_baseline(ex);
  const ConfigurationMatrix fixed = fixed_baseline(ex);
  std::vector<ComparisonRow> rows;
  for (const auto& [label, T] : {std::pair<const char*, const ConfigurationMatrix*>{"optimized", &optimized.T},
                                 {"random", &random},
                                 {"fixed", &fixed}}) {
    const DatasetPair data = make_datasets(ex, *T);
    const TrainEvalResult r = train_and_evaluate(ex, data.train, data.test);
    rows.push_back({label, average_mutual_coherence(measurement_matrix(*T, ex.dictionary)), r.report.accuracy,
                    r.report.psi});
  }
  return rows;
}

void cmd_optimize_config(const ExperimentConfig& config, std::ostream& log) {
  const Experiment ex = prepare_experiment(config);
  const FcaoResult result = optimize_configuration(ex);
  const auto& dir = config.out_dir;
  save_configuration(dir / artifact::kConfiguration, result.T);
  write_with(dir / artifact::kHistory, [&](std::ostream& os) { write_mu_history(os, result.history); });
  write_with(dir / artifact::kDictionary, [&](std::ostream& os) { write_dictionary(os, ex.dictionary); });
  log << "optimize-config: mu " << format_double(result.history.front().mu) << " -> " << format_double(result.mu)
      << " after " << result.history.back().iteration << " iterations; wrote " << (dir / artifact::kConfiguration).string()
      << '\n';
}

void cmd_gen_dataset(const ExperimentConfig& config, const std::filesystem::path& configuration, std::ostream& log) {
  const Experiment ex = prepare_experiment(config);
  const ConfigurationMatrix T = load_matching_configuration(ex, configuration);
  const DatasetPair data = make_datasets(ex, T);
  DatasetHeader h;
  h.frames = config.frames;
  h.classes = static_cast<int>(ex.postures.size());
  h.seed = stream_seed(config, SeedStream::Dataset);
  h.configuration_hash = configuration_hash(T);
  h.dictionary_hash = dictionary_hash(ex.dictionary);
  h.split = Split::Train;
  save_dataset(config.out_dir / artifact::kTrain, data.train, h);
  h.split = Split::Test;
  save_dataset(config.out_dir / artifact::kTest, data.test, h);
  log << "gen-dataset: " << data.train.size() << " train / " << data.test.size() << " test samples, noise "
      << (config.dataset.noise ? "on" : "off") << '\n';
}

void cmd_train_eval(const ExperimentConfig& config, const std::filesystem::path& train_path,
                    const std::filesystem::path& test_path, std::ostream& log) {
  const Experiment ex = prepare_experiment(config);
  DatasetHeader htrain, htest;
  const LabeledDataset train_set = load_dataset(train_path, &htrain);
  const LabeledDataset test_set = load_dataset(test_path, &htest);
  const std::uint64_t dict_hash = dictionary_hash(ex.dictionary);
  auto check = [&](const std::filesystem::path& path, const DatasetHeader& h, Split expected) {
    if (h.split != expected) throw ArtifactError(path.string() + ": wrong split tag");
    if (h.frames != config.frames) throw ArtifactError(path.string() + ": frame count does not match the config K");
    if (h.classes != static_cast<int>(ex.postures.size())) {
      throw ArtifactError(path.string() + ": class count does not match the config");
    }
    if (h.dictionary_hash != dict_hash) {
      throw ArtifactError(path.string() + ": dictionary hash " + hex64(h.dictionary_hash) +
                          " does not match the config's dictionary " + hex64(dict_hash));
    }
  };
  check(train_path, htrain, Split::Train);
  check(test_path, htest, Split::Test);
  if (htrain.configuration_hash != htest.configuration_hash) {
    throw ArtifactError("train and test sets were generated from different configuration matrices");
  }
  const TrainEvalResult r = train_and_evaluate(ex, train_set, test_set);
  const auto& dir = config.out_dir;
  write_with(dir / artifact::kModel, [&](std::ostream& os) { write_model(os, r.training.net); });
  write_with(dir / artifact::kConfusion,
             [&](std::ostream& os) { write_confusion(os, r.report, posture_names(ex)); });
  write_with(dir / artifact::kSummary, [&](std::ostream& os) { write_summary(os, r.report); });
  log << "train-eval: accuracy " << format_double(r.report.accuracy) << ", psi " << format_double(r.report.psi)
      << ", epochs " << r.training.epochs_run << ", test samples " << r.report.samples << '\n';
}

void cmd_compare(const ExperimentConfig& config, std::ostream& log) {
  const Experiment ex = prepare_experiment(config);
  const auto rows = run_comparison(ex);
  write_with(config.out_dir / artifact::kCompare, [&](std::ostream& os) {
    os << "case,mu,accuracy,psi\n";
    for (const auto& r : rows) {
      os << r.label << ',' << format_double(r.mu) << ',' << format_double(r.accuracy) << ',' << format_double(r.psi)
         << '\n';
    }
  });
  log << "compare:";
  for (const auto& r : rows) log << ' ' << r.label << " acc " << format_double(r.accuracy) << " mu " << format_double(r.mu) << ';';
  log << '\n';
}

void cmd_coherence_report(const ExperimentConfig& config, const std::filesystem::path& configuration, std::ostream& log) {
  const Experiment ex = prepare_experiment(config);
  const ConfigurationMatrix T = load_matching_configuration(ex, configuration);
  const MeasurementMatrix gamma = measurement_matrix(T, ex.dictionary);
  const CoherenceVector u = column_coherences(gamma);
  const double mu = average_mutual_coherence(u, gamma.cols());
  write_with(config.out_dir / artifact::kCoherence,
             [&](std::ostream& os) { write_coherence_table(os, u, gamma.cols()); });
  write_with(config.out_dir / artifact::kCoherenceSummary, [&](std::ostream& os) {
    os << "metric,value\n";
    os << "pairs," << u.size() << '\n';
    os << "mu," << format_double(mu) << '\n';
    os << "max_abs_u," << format_double(u.cwiseAbs().maxCoeff()) << '\n';
  });
  log << "coherence-report: mu " << format_double(mu) << " over " << u.size() << " pairs\n";
}

int exit_code_for_current_exception(std::string* message) {
  auto set = [&](const std::exception& e) {
    if (message) *message = e.what();
  };
  try {
    throw;
  } catch (const ConfigError& e) {
    set(e);
    return 2;
  } catch (const ArtifactError& e) {
    set(e);
    return 3;
  } catch (const NumericFailure& e) {
    set(e);
    return 4;
  } catch (const DegenerateColumnError& e) {
    set(e);
    return 4;
  } catch (const std::exception& e) {
    set(e);
    return 1;
  }
}

}  // namespace rissense
