// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rissense/channel.hpp"
#include "rissense/fcao.hpp"
#include "rissense/geometry.hpp"
#include "rissense/recognizer.hpp"
#include "rissense/ris.hpp"
#include "rissense/scenes.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace rissense {

/// Invalid experiment configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reflectivity knobs applied to every default posture.
struct PostureKnobs {
  double magnitude_min = 0.1;
  double magnitude_max = 0.5;
  double activation_probability = 0.7;
};

struct ExperimentConfig {
  SceneGeometry scene;
  RadioParams radio;
  /// Reflected-term SNR used to set both noise variances; when empty the
  /// variances in `radio` are used as given.
  std::optional<double> snr_db = 20.0;
  StateTable states = default_state_table();
  int frames = 10;  // K
  FcaoParams fcao;
  DatasetSpec dataset;
  PostureKnobs postures;
  TrainOptions training;
  CostModel cost = CostModel::zero_one(4);
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "out";

  int groups() const { return scene.num_groups(); }
  int state_count() const { return static_cast<int>(states.size()); }
  int blocks() const { return scene.num_blocks(); }

  /// Cross-field checks; throws ConfigError.
  void validate() const;
};

/// Parses the JSON config text. Every key is optional and defaults to the
/// value above; unknown keys are rejected.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Sub-seeds of the master seed, one per random consumer.
enum class SeedStream : std::uint64_t { InitialConfiguration = 10, Fcao, Dataset, Training };
std::uint64_t stream_seed(const ExperimentConfig& config, SeedStream stream);

}  // namespace rissense
