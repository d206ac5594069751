// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rissense/geometry.hpp"
#include "rissense/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rissense {

struct ElementState {
  double amplitude_ratio = 1.0;  // in (0, 1]
  double phase_shift = 0.0;      // radians in [0, 2pi)
};

/// Discrete reflection states available to every RIS element.
///
/// The angular dependence is a cos^q pattern in the reflection polar angle;
/// q = 0 makes the coefficient angle independent.
struct StateTable {
  std::vector<ElementState> states;
  double pattern_exponent = 0.0;

  int size() const { return static_cast<int>(states.size()); }
  void validate() const;
};

/// Four-state table measured for normal incidence at 3.198 GHz.
StateTable default_state_table();

Complex reflection_coefficient(const StateTable& table, const AnglePair& incidence,
                               const AnglePair& reflection, int state_index);

/// K frames of per-group dwell times, normalized so each group's durations
/// within a frame sum to one. Column index of group l, state i is l*N_a + i.
class ConfigurationMatrix {
 public:
  ConfigurationMatrix() = default;
  ConfigurationMatrix(int frames, int groups, int states, double frame_length = 1.0);
  ConfigurationMatrix(RealMatrix durations, int groups, int states, double frame_length = 1.0);

  int frames() const { return static_cast<int>(durations_.rows()); }
  int groups() const { return groups_; }
  int states() const { return states_; }
  int row_length() const { return groups_ * states_; }
  double frame_length() const { return frame_length_; }

  const RealMatrix& durations() const { return durations_; }
  RealMatrix& durations() { return durations_; }

  RealVector frame(int k) const { return durations_.row(k).transpose(); }
  void set_frame(int k, const RealVector& t);
  double operator()(int k, int l, int i) const { return durations_(k, l * states_ + i); }
  double& operator()(int k, int l, int i) { return durations_(k, l * states_ + i); }

  /// Matrix of all frames except k (the fixed part while optimizing frame k).
  RealMatrix without_frame(int k) const;

 private:
  RealMatrix durations_;
  int groups_ = 0;
  int states_ = 0;
  double frame_length_ = 1.0;
};

struct ConfigurationViolation {
  enum class Kind { NegativeEntry, OffSimplex, NonFinite };
  Kind kind;
  int frame;
  int group;
  int state;     // -1 for row-level violations
  double value;  // offending entry, or 1 - row sum for OffSimplex
};

struct ConfigurationReport {
  std::vector<ConfigurationViolation> violations;
  bool ok() const { return violations.empty(); }
  std::string describe() const;
};

ConfigurationReport validate_configuration(const ConfigurationMatrix& T, double tolerance = 1e-9);

/// Flat-Dirichlet rows, deterministic in `seed`.
ConfigurationMatrix random_configuration(int frames, int groups, int states, std::uint64_t seed);

/// Every frame and group parked on one state for the whole frame.
ConfigurationMatrix fixed_state_configuration(int frames, int groups, int states, int state_index);

}  // namespace rissense
