// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rissense/channel.hpp"
#include "rissense/coherence.hpp"
#include "rissense/ris.hpp"
#include "rissense/types.hpp"

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace rissense {

/// Lagrange multipliers of the coherence constraints and the penalty weight.
struct DualState {
  ComplexVector beta;
  double rho = 1.0;
  /// Primal residual ||u - coh|| at the previous dual update (NaN before the first).
  double last_residual = std::numeric_limits<double>::quiet_NaN();
};

struct PenaltySchedule {
  double growth = 2.0;
  double rho_max = 1e6;
  double required_shrink = 0.25;
};

enum class DualInit { Random, Zero };

struct FcaoParams {
  int max_outer_iterations = 200;
  int lagrangian_loops = 10;   // N_AL
  int alternating_loops = 5;   // N_AM
  int prox_steps = 20;
  double prox_initial_step = 0.1;
  int pattern_budget = 200;
  double pattern_initial_step = 0.25;
  double pattern_min_step = 1e-3;
  double rho0 = 1.0;
  double rho_max = 1e6;
  double rho_growth = 2.0;
  /// Improvements of at most this size still update T but count as stagnant.
  double tolerance = 0.0;
  DualInit dual_init = DualInit::Random;
  std::uint64_t seed = 1;

  void validate() const;
  PenaltySchedule schedule() const { return {rho_growth, rho_max, 0.25}; }
};

/// Coherence of Gamma as a function of one frame t_k with the other K-1
/// frames held fixed. The upper triangle of Gamma^H Gamma for the fixed
/// frames is cached so each evaluation costs O(M^2 + L N_a M).
class FrameObjective {
 public:
  FrameObjective(const ComplexMatrix& A, const RealMatrix& others, int groups, int states);

  int groups() const { return groups_; }
  int states() const { return states_; }
  Eigen::Index blocks() const { return A_.cols(); }
  Eigen::Index row_length() const { return A_.rows(); }

  CoherenceVector coherences(const RealVector& t) const;
  double mutual_coherence(const RealVector& t) const;

  /// (rho/2) * sum |coh(t) - kappa|^2
  double smooth_value(const RealVector& t, const CoherenceVector& kappa, double rho) const;
  /// Gradient of smooth_value with respect to the real vector t.
  RealVector smooth_gradient(const RealVector& t, const CoherenceVector& kappa, double rho) const;

 private:
  /// Row g = A^T t of Gamma contributed by this frame, and the inverse column norms.
  ComplexVector frame_row(const RealVector& t, RealVector& inv_norm) const;

  ComplexMatrix A_;
  CoherenceVector pairs_rest_;  // packed upper triangle, pair order
  RealVector diag_rest_;
  int groups_;
  int states_;
};

bool frame_feasible(const RealVector& t, int groups, int states, double tolerance = 1e-9);

/// Augmented Lagrangian value; +inf when t is off the per-group simplexes.
double lagrangian_value(const RealVector& t, const CoherenceVector& u, const DualState& dual,
                        const FrameObjective& objective);

/// Exact minimizer of ||u||_1 + (rho/2)||u - z||^2 with z = coh - beta/rho.
CoherenceVector soft_threshold_update_u(const CoherenceVector& coh, const DualState& dual);

/// Euclidean projection of v onto {w >= 0, sum w = total}.
RealVector project_simplex(const RealVector& v, double total = 1.0);

/// Projects each group's N_a block of a frame vector onto the unit simplex.
RealVector project_group_simplex(const RealVector& t, int groups, int states);

struct ProxControl {
  int steps = 20;
  double initial_step = 0.1;
  int max_halvings = 60;
};

struct ProxResult {
  RealVector t;
  std::vector<double> values;  // smooth objective after each accepted step, values[0] at entry
};

ProxResult prox_grad_update_t(const RealVector& t, const CoherenceVector& u, const DualState& dual,
                              const FrameObjective& objective, const ProxControl& control = {});

DualState update_duals(const CoherenceVector& u, const CoherenceVector& coh, const DualState& state,
                       const PenaltySchedule& schedule = {});

struct LagrangianTrace {
  std::vector<double> residual;  // ||u - coh|| at each dual update
  std::vector<double> rho;
  std::vector<double> mu;        // mutual coherence at the end of each outer loop
};

struct LagrangianResult {
  RealVector t;
  CoherenceVector u;
  double mu = 0.0;  // of the returned t
  LagrangianTrace trace;
};

LagrangianResult augmented_lagrangian_solve(const RealVector& t_init, const FrameObjective& objective,
                                            const FcaoParams& params, std::mt19937_64& rng);

struct PatternSearchResult {
  RealVector t;
  double mu = 0.0;
  int evaluations = 0;
  std::vector<double> accepted;  // mu after each accepted poll, starting with the incumbent
};

/// Coordinate pattern search seeded at the incumbent frame.
PatternSearchResult pattern_search_init(const RealVector& incumbent, const FrameObjective& objective,
                                        const FcaoParams& params, std::mt19937_64& rng);

struct FcaoRecord {
  int iteration = 0;
  int frame = -1;  // -1 marks the initial configuration
  double mu = 0.0;
};

struct FcaoResult {
  ConfigurationMatrix T;
  double mu = 0.0;
  std::vector<FcaoRecord> history;  // history[0] is the initial configuration
};

FcaoResult fcao_optimize(const ConfigurationMatrix& T0, const SensingDictionary& dict, const FcaoParams& params);

}  // namespace rissense
