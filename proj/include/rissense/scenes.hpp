// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rissense/channel.hpp"
#include "rissense/geometry.hpp"
#include "rissense/recognizer.hpp"
#include "rissense/ris.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rissense {

/// Occupied blocks of one posture and the per-sample reflectivity model.
struct PostureSpec {
  std::string name;
  std::vector<int> occupancy;
  double magnitude_min = 0.1;
  double magnitude_max = 0.5;
  double phase_min = 0.0;
  double phase_max = 2.0 * kPi;
  double activation_probability = 0.7;

  void validate(int blocks) const;
  /// E|eta_m|^2 for an active block.
  double mean_square_magnitude() const;
};

/// Standing, sitting, bending and lying masks on an (x, y, z) grid of at
/// least 2 x 5 x 8 blocks; the body stands in the x = 0 slab at y = 2.
std::vector<PostureSpec> default_postures(const SceneGeometry& scene);

/// Draws one posture instance. Each occupied block is active with the
/// configured probability; if none is drawn active, one occupied block is
/// activated so the posture is never empty.
SpaceReflectionVector posture_reflection_vector(const PostureSpec& spec, int blocks, std::uint64_t seed);

struct DatasetSpec {
  int samples_per_class = 150;
  int train_per_class = 120;
  int test_per_class = 30;
  bool noise = true;
  std::uint64_t seed = 1;

  void validate() const;
};

struct DatasetPair {
  LabeledDataset train;
  LabeledDataset test;
};

/// Samples are interleaved across classes (sample j of every class before
/// sample j+1) and each (class, sample) pair owns its own seed substreams.
DatasetPair generate_dataset(const ConfigurationMatrix& T, const SensingDictionary& dict,
                             const std::vector<PostureSpec>& postures, const DatasetSpec& spec,
                             const RadioParams& params, double d_los);

/// Mean received reflected power of the postures when every group stays in
/// state 0 for the whole frame; the reference for noise calibration.
double static_reflected_power(const SensingDictionary& dict, const std::vector<PostureSpec>& postures,
                              const RadioParams& params);

}  // namespace rissense
