// SPDX-License-Identifier: Apache-2.0

#include "rissense/ris.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace rissense {

void StateTable::validate() const {
  if (states.size() < 2) throw std::invalid_argument("state table needs at least two states");
  for (const auto& s : states) {
    if (!(s.amplitude_ratio > 0.0 && s.amplitude_ratio <= 1.0)) {
      throw std::invalid_argument("state amplitude_ratio must lie in (0, 1]");
    }
    if (!(s.phase_shift >= 0.0 && s.phase_shift < 2.0 * kPi)) {
      throw std::invalid_argument("state phase_shift must lie in [0, 2pi)");
    }
  }
  if (!(pattern_exponent >= 0.0)) throw std::invalid_argument("pattern_exponent must be >= 0");
}

StateTable default_state_table() {
  return StateTable{{{0.97, kPi / 4.0}, {0.97, 3.0 * kPi / 4.0}, {0.92, 5.0 * kPi / 4.0}, {0.88, 7.0 * kPi / 4.0}},
                    0.0};
}

Complex reflection_coefficient(const StateTable& table, const AnglePair& /*incidence*/,
                               const AnglePair& reflection, int state_index) {
  if (state_index < 0 || state_index >= table.size()) {
    throw std::out_of_range("state index " + std::to_string(state_index) + " outside the state table");
  }
  const auto& s = table.states[state_index];
  double pattern = 1.0;
  if (table.pattern_exponent != 0.0) {
    const double c = std::max(0.0, std::cos(deg2rad(reflection.polar_deg)));
    pattern = std::pow(c, table.pattern_exponent);
  }
  return std::polar(s.amplitude_ratio * pattern, s.phase_shift);
}

ConfigurationMatrix::ConfigurationMatrix(int frames, int groups, int states, double frame_length)
    : ConfigurationMatrix(RealMatrix::Zero(frames, groups * states), groups, states, frame_length) {}

ConfigurationMatrix::ConfigurationMatrix(RealMatrix durations, int groups, int states, double frame_length)
    : durations_(std::move(durations)), groups_(groups), states_(states), frame_length_(frame_length) {
  if (groups < 1 || states < 1) throw std::invalid_argument("configuration needs L >= 1 and N_a >= 1");
  if (durations_.rows() < 1) throw std::invalid_argument("configuration needs K >= 1 frames");
  if (durations_.cols() != groups * states) {
    throw std::invalid_argument("configuration row length must equal L * N_a");
  }
  if (!(frame_length > 0.0)) throw std::invalid_argument("frame length must be positive");
}

void ConfigurationMatrix::set_frame(int k, const RealVector& t) {
  if (k < 0 || k >= frames()) throw std::out_of_range("frame index " + std::to_string(k) + " out of range");
  if (t.size() != row_length()) throw std::invalid_argument("frame vector length must equal L * N_a");
  durations_.row(k) = t.transpose();
}

RealMatrix ConfigurationMatrix::without_frame(int k) const {
  RealMatrix rest(frames() - 1, row_length());
  for (int r = 0, out = 0; r < frames(); ++r) {
    if (r != k) rest.row(out++) = durations_.row(r);
  }
  return rest;
}

std::string ConfigurationReport::describe() const {
  std::ostringstream os;
  for (const auto& v : violations) {
    switch (v.kind) {
      case ConfigurationViolation::Kind::NegativeEntry:
        os << "negative duration " << v.value << " at (frame " << v.frame << ", group " << v.group << ", state "
           << v.state << ")\n";
        break;
      case ConfigurationViolation::Kind::OffSimplex:
        os << "durations of (frame " << v.frame << ", group " << v.group << ") miss unit sum by " << v.value << "\n";
        break;
      case ConfigurationViolation::Kind::NonFinite:
        os << "non-finite duration at (frame " << v.frame << ", group " << v.group << ", state " << v.state << ")\n";
        break;
    }
  }
  return os.str();
}

ConfigurationReport validate_configuration(const ConfigurationMatrix& T, double tolerance) {
  ConfigurationReport report;
  for (int k = 0; k < T.frames(); ++k) {
    for (int l = 0; l < T.groups(); ++l) {
      double sum = 0.0;
      for (int i = 0; i < T.states(); ++i) {
        const double v = T(k, l, i);
        if (!std::isfinite(v)) {
          report.violations.push_back({ConfigurationViolation::Kind::NonFinite, k, l, i, v});
        } else if (v < 0.0) {
          report.violations.push_back({ConfigurationViolation::Kind::NegativeEntry, k, l, i, v});
        }
        sum += v;
      }
      const double deficit = 1.0 - sum;
      if (std::isfinite(sum) && std::abs(deficit) > tolerance) {
        report.violations.push_back({ConfigurationViolation::Kind::OffSimplex, k, l, -1, deficit});
      }
    }
  }
  return report;
}

ConfigurationMatrix random_configuration(int frames, int groups, int states, std::uint64_t seed) {
  if (frames < 1 || groups < 1 || states < 1) throw std::invalid_argument("K, L, N_a must be >= 1");
  ConfigurationMatrix T(frames, groups, states);
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  for (int k = 0; k < frames; ++k) {
    for (int l = 0; l < groups; ++l) {
      double sum = 0.0;
      for (int i = 0; i < states; ++i) {
        T(k, l, i) = expo(rng);
        sum += T(k, l, i);
      }
      for (int i = 0; i < states; ++i) T(k, l, i) /= sum;
    }
  }
  return T;
}

ConfigurationMatrix fixed_state_configuration(int frames, int groups, int states, int state_index) {
  if (state_index < 0 || state_index >= states) throw std::out_of_range("state index outside [0, N_a)");
  ConfigurationMatrix T(frames, groups, states);
  for (int k = 0; k < frames; ++k) {
    for (int l = 0; l < groups; ++l) T(k, l, state_index) = 1.0;
  }
  return T;
}

}  // namespace rissense
