// SPDX-License-Identifier: Apache-2.0

#include "rissense/scenes.hpp"

#include "rissense/coherence.hpp"
#include "rissense/seeding.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace rissense {

void PostureSpec::validate(int blocks) const {
  if (occupancy.empty()) throw std::invalid_argument("posture '" + name + "' has an empty occupancy");
  std::set<int> seen;
  for (int m : occupancy) {
    if (m < 0 || m >= blocks) throw std::out_of_range("posture '" + name + "' occupies a block outside the grid");
    if (!seen.insert(m).second) throw std::invalid_argument("posture '" + name + "' lists a block twice");
  }
  if (!(magnitude_min >= 0.0 && magnitude_max >= magnitude_min)) {
    throw std::invalid_argument("posture '" + name + "' has an invalid magnitude range");
  }
  if (!(phase_max >= phase_min)) throw std::invalid_argument("posture '" + name + "' has an invalid phase range");
  if (!(activation_probability > 0.0 && activation_probability <= 1.0)) {
    throw std::invalid_argument("posture '" + name + "' activation probability must lie in (0, 1]");
  }
}

double PostureSpec::mean_square_magnitude() const {
  const double a = magnitude_min;
  const double b = magnitude_max;
  return (a * a + a * b + b * b) / 3.0;
}

std::vector<PostureSpec> default_postures(const SceneGeometry& scene) {
  const auto& c = scene.block_counts;
  if (c[0] < 2 || c[1] < 5 || c[2] < 8) {
    throw std::invalid_argument("default postures need a block grid of at least 2 x 5 x 8");
  }
  auto at = [&](int x, int y, int z) { return block_index(scene, x, y, z); };
  PostureSpec standing, sitting, bending, lying;
  standing.name = "standing";
  sitting.name = "sitting";
  bending.name = "bending";
  lying.name = "lying";
  for (int z = 0; z < 8; ++z) standing.occupancy.push_back(at(0, 2, z));
  for (int z = 0; z < 5; ++z) sitting.occupancy.push_back(at(0, 2, z));
  sitting.occupancy.push_back(at(1, 2, 2));
  for (int z = 0; z < 4; ++z) bending.occupancy.push_back(at(0, 2, z));
  bending.occupancy.push_back(at(1, 2, 3));
  bending.occupancy.push_back(at(1, 2, 4));
  for (int y = 0; y < 5; ++y) lying.occupancy.push_back(at(0, y, 0));
  return {standing, sitting, bending, lying};
}

SpaceReflectionVector posture_reflection_vector(const PostureSpec& spec, int blocks, std::uint64_t seed) {
  spec.validate(blocks);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&] {
    const double mag = spec.magnitude_min + (spec.magnitude_max - spec.magnitude_min) * unit(rng);
    const double phase = spec.phase_min + (spec.phase_max - spec.phase_min) * unit(rng);
    return std::polar(mag, phase);
  };

  SpaceReflectionVector out;
  out.eta = ComplexVector::Zero(blocks);
  bool any = false;
  for (int m : spec.occupancy) {
    const bool active = unit(rng) < spec.activation_probability;
    const Complex value = draw();
    if (active) {
      out.eta[m] = value;
      any = true;
    }
  }
  if (!any) {
    std::uniform_int_distribution<std::size_t> pick(0, spec.occupancy.size() - 1);
    out.eta[spec.occupancy[pick(rng)]] = draw();
  }
  return out;
}

void DatasetSpec::validate() const {
  if (samples_per_class < 1) throw std::invalid_argument("samples_per_class must be >= 1");
  if (train_per_class < 0 || test_per_class < 0 || train_per_class + test_per_class != samples_per_class) {
    throw std::invalid_argument("train/test split counts must sum to samples_per_class");
  }
}

DatasetPair generate_dataset(const ConfigurationMatrix& T, const SensingDictionary& dict,
                             const std::vector<PostureSpec>& postures, const DatasetSpec& spec,
                             const RadioParams& params, double d_los) {
  spec.validate();
  if (postures.size() < 2) throw std::invalid_argument("need at least two postures");
  const int M = dict.blocks();
  for (const auto& p : postures) p.validate(M);
  const MeasurementMatrix gamma = measurement_matrix(T, dict);

  const int P = static_cast<int>(postures.size());
  DatasetPair out;
  out.train.classes = out.test.classes = P;
  out.train.split = Split::Train;
  out.test.split = Split::Test;
  for (int j = 0; j < spec.samples_per_class; ++j) {
    for (int c = 0; c < P; ++c) {
      const auto eta = posture_reflection_vector(postures[c], M, derive_seed(spec.seed, {1, std::uint64_t(c), std::uint64_t(j)}));
      const auto y = synthesize_from_measurement_matrix(gamma, eta, params, d_los, spec.noise,
                                                        derive_seed(spec.seed, {2, std::uint64_t(c), std::uint64_t(j)}));
      auto& target = j < spec.train_per_class ? out.train : out.test;
      target.samples.push_back({y.y, c});
    }
  }
  return out;
}

double static_reflected_power(const SensingDictionary& dict, const std::vector<PostureSpec>& postures,
                              const RadioParams& params) {
  if (postures.empty()) throw std::invalid_argument("need at least one posture");
  const ConfigurationMatrix T = fixed_state_configuration(1, dict.groups, dict.states, 0);
  const MeasurementMatrix gamma = measurement_matrix(T, dict);
  const double pt = params.transmit_power;
  double total = 0.0;
  for (const auto& p : postures) {
    double power = 0.0;
    for (int m : p.occupancy) power += std::norm(gamma(0, m));
    total += p.activation_probability * p.mean_square_magnitude() * power;
  }
  return pt * pt * total / static_cast<double>(postures.size());
}

}  // namespace rissense
