// SPDX-License-Identifier: Apache-2.0

#include "rissense/channel.hpp"

#include "rissense/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace rissense {

void RadioParams::validate() const {
  if (!(carrier_frequency > 0.0)) throw std::invalid_argument("carrier_frequency must be positive");
  if (!(transmit_power > 0.0)) throw std::invalid_argument("transmit_power must be positive");
  if (!(multipath_variance >= 0.0) || !(noise_variance >= 0.0)) {
    throw std::invalid_argument("noise variances must be non-negative");
  }
  if (!(tx_gain_los >= 0.0) || !(rx_gain_los >= 0.0) || !(tx_main_lobe_gain >= 0.0) || !(rx_gain >= 0.0)) {
    throw std::invalid_argument("antenna gains must be non-negative");
  }
  if (!(tx_half_beamwidth_deg > 0.0 && tx_half_beamwidth_deg <= 180.0)) {
    throw std::invalid_argument("tx_half_beamwidth_deg must lie in (0, 180]");
  }
}

double tx_gain_toward_element(const SceneGeometry& scene, const RadioParams& params, int n) {
  const Vec3 boresight = -scene.tx_position;
  const Vec3 to_element = element_position(scene, n) - scene.tx_position;
  const double c = boresight.dot(to_element) / (boresight.norm() * to_element.norm());
  const double off_axis = rad2deg(std::acos(std::clamp(c, -1.0, 1.0)));
  return off_axis <= params.tx_half_beamwidth_deg ? params.tx_main_lobe_gain : 0.0;
}

double rx_gain_toward_block(const SceneGeometry& /*scene*/, const RadioParams& params, int /*m*/) {
  return params.rx_gain;
}

Complex direct_los_gain(const RadioParams& params, double d_los) {
  if (!(d_los > 0.0)) throw std::invalid_argument("LoS distance must be positive");
  const double lambda = params.wavelength();
  const double amplitude = lambda / (4.0 * kPi) * std::sqrt(params.tx_gain_los * params.rx_gain_los) / d_los;
  return std::polar(amplitude, -2.0 * kPi * d_los / lambda);
}

double los_distance(const SceneGeometry& scene) { return (scene.tx_position - scene.rx_position).norm(); }

SensingDictionary build_dictionary(const SceneGeometry& scene, const StateTable& table, const RadioParams& params) {
  scene.validate();
  table.validate();
  params.validate();
  const int L = scene.num_groups();
  const int Na = table.size();
  const int M = scene.num_blocks();
  const int N = scene.num_elements();
  const double lambda = params.wavelength();

  std::vector<double> gain_t(N);
  std::vector<int> group(N);
  for (int n = 0; n < N; ++n) {
    gain_t[n] = tx_gain_toward_element(scene, params, n);
    group[n] = element_group(scene, n);
  }

  SensingDictionary dict;
  dict.A = ComplexMatrix::Zero(L * Na, M);
  dict.groups = L;
  dict.states = Na;
  dict.carrier_frequency = params.carrier_frequency;
  dict.scene_hash = scene_fingerprint(scene, table, params);

  std::vector<Complex> r(Na);
  for (int m = 0; m < M; ++m) {
    const double gain_r = rx_gain_toward_block(scene, params, m);
    for (int n = 0; n < N; ++n) {
      if (gain_t[n] == 0.0) continue;
      const PathDistances d = path_distances(scene, n, m);
      const ReflectionAngles ang = reflection_angles(scene, n, m);
      const double path = d.tx_to_element + d.element_via_block;
      const Complex propagation = std::polar(lambda * std::sqrt(gain_t[n] * gain_r) /
                                                 (4.0 * kPi * d.tx_to_element * d.element_via_block),
                                             -2.0 * kPi * path / lambda);
      const int row0 = group[n] * Na;
      for (int i = 0; i < Na; ++i) {
        dict.A(row0 + i, m) += reflection_coefficient(table, ang.incidence, ang.reflection, i) * propagation;
      }
    }
  }
  return dict;
}

std::vector<int> SpaceReflectionVector::support() const {
  std::vector<int> s;
  for (Eigen::Index m = 0; m < eta.size(); ++m) {
    if (eta[m] != Complex(0.0, 0.0)) s.push_back(static_cast<int>(m));
  }
  return s;
}

Complex measurement_offset(const RadioParams& params, double d_los) {
  if (!params.include_los) return {0.0, 0.0};
  return direct_los_gain(params, d_los) * params.transmit_power;
}

MeasurementVector synthesize_from_measurement_matrix(const ComplexMatrix& gamma, const SpaceReflectionVector& eta,
                                                     const RadioParams& params, double d_los, bool noise,
                                                     std::uint64_t seed) {
  if (gamma.cols() != eta.eta.size()) {
    throw std::invalid_argument("space reflection vector length does not match the measurement matrix");
  }
  const double pt = params.transmit_power;
  MeasurementVector out;
  out.seed = seed;
  out.noisy = noise;
  out.y = pt * (gamma * eta.eta);
  out.y.array() += measurement_offset(params, d_los);
  if (noise) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double s_rl = std::sqrt(0.5 * params.multipath_variance);
    const double s_n = std::sqrt(0.5 * params.noise_variance);
    for (Eigen::Index k = 0; k < out.y.size(); ++k) {
      const Complex h_rl(s_rl * gauss(rng), s_rl * gauss(rng));
      const Complex sigma(s_n * gauss(rng), s_n * gauss(rng));
      out.y[k] += h_rl * pt + sigma;
    }
  }
  return out;
}

MeasurementVector synthesize_measurement(const ConfigurationMatrix& T, const SensingDictionary& dict,
                                         const SpaceReflectionVector& eta, const RadioParams& params,
                                         double d_los, bool noise, std::uint64_t seed) {
  if (T.row_length() != dict.A.rows()) {
    throw std::invalid_argument("configuration row length does not match the dictionary");
  }
  if (dict.A.cols() != eta.eta.size()) {
    throw std::invalid_argument("space reflection vector length does not match the dictionary");
  }
  const ComplexMatrix gamma = T.durations().cast<Complex>() * dict.A;
  return synthesize_from_measurement_matrix(gamma, eta, params, d_los, noise, seed);
}

void calibrate_noise(RadioParams& params, double reflected_power, double snr_db) {
  if (!(reflected_power > 0.0)) throw std::invalid_argument("reflected power must be positive");
  const double total = reflected_power / std::pow(10.0, snr_db / 10.0);
  const double pt = params.transmit_power;
  params.multipath_variance = 0.5 * total / (pt * pt);
  params.noise_variance = 0.5 * total;
}

}  // namespace rissense
