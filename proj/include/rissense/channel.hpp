// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rissense/geometry.hpp"
#include "rissense/ris.hpp"
#include "rissense/types.hpp"

#include <cstdint>
#include <vector>

namespace rissense {

/// Link budget and noise parameters. The baseband symbol is fixed to 1.
struct RadioParams {
  double carrier_frequency = 3.198e9;  // Hz
  double transmit_power = 1.0;         // W
  double tx_gain_los = 1.0;
  double rx_gain_los = 1.0;
  double tx_main_lobe_gain = 1.0;      // horn gain toward elements inside the main lobe
  double tx_half_beamwidth_deg = 30.0; // horn boresight points at the RIS center
  double rx_gain = 1.0;                // omni Rx gain toward every block
  double multipath_variance = 0.0;     // eps_rl
  double noise_variance = 0.0;         // eps_n
  bool include_los = true;

  double wavelength() const { return kSpeedOfLight / carrier_frequency; }
  void validate() const;
};

/// Tx gain toward element n: main-lobe gain inside the half-beamwidth cone, zero outside.
double tx_gain_toward_element(const SceneGeometry& scene, const RadioParams& params, int n);
double rx_gain_toward_block(const SceneGeometry& scene, const RadioParams& params, int m);

/// Complex gain of the direct Tx -> Rx path.
Complex direct_los_gain(const RadioParams& params, double d_los);

double los_distance(const SceneGeometry& scene);

/// Per-(group, state) contribution of every space block; row l*N_a + i,
/// column m.
struct SensingDictionary {
  ComplexMatrix A;
  int groups = 0;
  int states = 0;
  double carrier_frequency = 0.0;
  std::uint64_t scene_hash = 0;

  int blocks() const { return static_cast<int>(A.cols()); }
};

SensingDictionary build_dictionary(const SceneGeometry& scene, const StateTable& table, const RadioParams& params);

/// Sparse block reflectivities describing one posture instance.
struct SpaceReflectionVector {
  ComplexVector eta;
  std::vector<int> support() const;
};

struct MeasurementVector {
  ComplexVector y;
  std::uint64_t seed = 0;
  bool noisy = false;
};

/// Constant LoS offset h_d * P_t added to every frame (zero when LoS is disabled).
Complex measurement_offset(const RadioParams& params, double d_los);

MeasurementVector synthesize_measurement(const ConfigurationMatrix& T, const SensingDictionary& dict,
                                         const SpaceReflectionVector& eta, const RadioParams& params,
                                         double d_los, bool noise, std::uint64_t seed);

/// Same as above with a precomputed measurement matrix T*A.
MeasurementVector synthesize_from_measurement_matrix(const ComplexMatrix& gamma, const SpaceReflectionVector& eta,
                                                     const RadioParams& params, double d_los, bool noise,
                                                     std::uint64_t seed);

/// Sets eps_rl and eps_n so that the reflected power over the total noise
/// power equals `snr_db`, split evenly between the multipath and receiver terms.
void calibrate_noise(RadioParams& params, double reflected_power, double snr_db);

}  // namespace rissense
