// SPDX-License-Identifier: Apache-2.0

#include "rissense/fcao.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rissense {

void FcaoParams::validate() const {
  if (max_outer_iterations < 1 || lagrangian_loops < 1 || alternating_loops < 1 || prox_steps < 1 ||
      pattern_budget < 1) {
    throw std::invalid_argument("FCAO iteration counts must be >= 1");
  }
  if (!(rho0 > 0.0)) throw std::invalid_argument("rho0 must be positive");
  if (!(rho_max >= rho0)) throw std::invalid_argument("rho_max must be >= rho0");
  if (!(rho_growth >= 1.0)) throw std::invalid_argument("rho_growth must be >= 1");
  if (!(prox_initial_step > 0.0) || !(pattern_initial_step > 0.0) || !(pattern_min_step > 0.0)) {
    throw std::invalid_argument("FCAO step sizes must be positive");
  }
  if (!(tolerance >= 0.0)) throw std::invalid_argument("FCAO tolerance must be >= 0");
}

FrameObjective::FrameObjective(const ComplexMatrix& A, const RealMatrix& others, int groups, int states)
    : A_(A), groups_(groups), states_(states) {
  if (A.rows() != static_cast<Eigen::Index>(groups) * states) {
    throw std::invalid_argument("dictionary rows must equal L * N_a");
  }
  if (others.rows() > 0 && others.cols() != A.rows()) {
    throw std::invalid_argument("fixed frames do not match the dictionary");
  }
  const Eigen::Index M = A.cols();
  pairs_rest_ = CoherenceVector::Zero(pair_count(M));
  diag_rest_ = RealVector::Zero(M);
  if (others.rows() == 0) return;
  const ComplexMatrix rest = others.cast<Complex>() * A;
  const ComplexMatrix G = rest.adjoint() * rest;
  Eigen::Index p = 0;
  for (Eigen::Index a = 0; a < M; ++a) {
    diag_rest_[a] = G(a, a).real();
    for (Eigen::Index b = a + 1; b < M; ++b) pairs_rest_[p++] = G(a, b);
  }
}

ComplexVector FrameObjective::frame_row(const RealVector& t, RealVector& inv_norm) const {
  if (t.size() != A_.rows()) throw std::invalid_argument("frame vector length must equal L * N_a");
  const ComplexVector g = A_.transpose() * t.cast<Complex>();
  inv_norm.resize(g.size());
  for (Eigen::Index m = 0; m < g.size(); ++m) {
    const double sq = diag_rest_[m] + std::norm(g[m]);
    if (!(sq > 0.0)) throw DegenerateColumnError(static_cast<int>(m));
    inv_norm[m] = 1.0 / std::sqrt(sq);
  }
  return g;
}

CoherenceVector FrameObjective::coherences(const RealVector& t) const {
  RealVector inv_norm;
  const ComplexVector g = frame_row(t, inv_norm);
  const Eigen::Index M = g.size();
  CoherenceVector u(pairs_rest_.size());
  Eigen::Index p = 0;
  for (Eigen::Index a = 0; a < M; ++a) {
    const Complex ga = std::conj(g[a]);
    for (Eigen::Index b = a + 1; b < M; ++b, ++p) u[p] = (pairs_rest_[p] + ga * g[b]) * (inv_norm[a] * inv_norm[b]);
  }
  return u;
}

double FrameObjective::mutual_coherence(const RealVector& t) const {
  return average_mutual_coherence(coherences(t), blocks());
}

double FrameObjective::smooth_value(const RealVector& t, const CoherenceVector& kappa, double rho) const {
  return 0.5 * rho * (coherences(t) - kappa).squaredNorm();
}

RealVector FrameObjective::smooth_gradient(const RealVector& t, const CoherenceVector& kappa, double rho) const {
  RealVector inv_norm;
  const ComplexVector g = frame_row(t, inv_norm);
  const Eigen::Index M = g.size();
  // df = sum_m Re(X_m * dg_m) with dg_m = sum_j A_jm dt_j.
  ComplexVector X = ComplexVector::Zero(M);
  Eigen::Index p = 0;
  for (Eigen::Index a = 0; a < M; ++a) {
    for (Eigen::Index b = a + 1; b < M; ++b, ++p) {
      const double scale = inv_norm[a] * inv_norm[b];
      const Complex c = (pairs_rest_[p] + std::conj(g[a]) * g[b]) * scale;
      const Complex e = c - kappa[p];
      const double r = (std::conj(e) * c).real();
      X[a] += e * std::conj(g[b]) * scale - r * std::conj(g[a]) * (inv_norm[a] * inv_norm[a]);
      X[b] += std::conj(e) * std::conj(g[a]) * scale - r * std::conj(g[b]) * (inv_norm[b] * inv_norm[b]);
    }
  }
  return rho * (A_ * X).real();
}

bool frame_feasible(const RealVector& t, int groups, int states, double tolerance) {
  if (t.size() != static_cast<Eigen::Index>(groups) * states) return false;
  for (int l = 0; l < groups; ++l) {
    const auto seg = t.segment(static_cast<Eigen::Index>(l) * states, states);
    if (!seg.allFinite() || seg.minCoeff() < 0.0) return false;
    if (std::abs(seg.sum() - 1.0) > tolerance) return false;
  }
  return true;
}

double lagrangian_value(const RealVector& t, const CoherenceVector& u, const DualState& dual,
                        const FrameObjective& objective) {
  if (!frame_feasible(t, objective.groups(), objective.states())) return std::numeric_limits<double>::infinity();
  const CoherenceVector coh = objective.coherences(t);
  if (u.size() != coh.size() || dual.beta.size() != coh.size()) {
    throw std::invalid_argument("coherence and multiplier vectors must have M(M-1)/2 entries");
  }
  const CoherenceVector diff = u - coh;
  double value = u.cwiseAbs().sum();
  value += (dual.beta.conjugate().array() * diff.array()).real().sum();
  value += 0.5 * dual.rho * diff.squaredNorm();
  return value;
}

CoherenceVector soft_threshold_update_u(const CoherenceVector& coh, const DualState& dual) {
  if (!(dual.rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (dual.beta.size() != coh.size()) throw std::invalid_argument("multiplier length mismatch");
  const double threshold = 1.0 / dual.rho;
  CoherenceVector u(coh.size());
  for (Eigen::Index p = 0; p < coh.size(); ++p) {
    const Complex z = coh[p] - dual.beta[p] / dual.rho;
    const double mag = std::abs(z);
    u[p] = mag > threshold ? z * (1.0 - threshold / mag) : Complex(0.0, 0.0);
  }
  return u;
}

RealVector project_simplex(const RealVector& v, double total) {
  if (!(total > 0.0)) throw std::invalid_argument("simplex total must be positive");
  const Eigen::Index n = v.size();
  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - total) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }
  RealVector w = (v.array() - theta).max(0.0);
  // Remove the rounding drift of the threshold so the sum is exact to machine precision.
  const double s = w.sum();
  if (s > 0.0) w *= total / s;
  return w;
}

RealVector project_group_simplex(const RealVector& t, int groups, int states) {
  if (t.size() != static_cast<Eigen::Index>(groups) * states) {
    throw std::invalid_argument("frame vector length must equal L * N_a");
  }
  RealVector out(t.size());
  for (int l = 0; l < groups; ++l) {
    const Eigen::Index off = static_cast<Eigen::Index>(l) * states;
    out.segment(off, states) = project_simplex(t.segment(off, states));
  }
  return out;
}

ProxResult prox_grad_update_t(const RealVector& t, const CoherenceVector& u, const DualState& dual,
                              const FrameObjective& objective, const ProxControl& control) {
  const CoherenceVector kappa = u + dual.beta / dual.rho;
  ProxResult out;
  out.t = t;
  double f = objective.smooth_value(t, kappa, dual.rho);
  out.values.push_back(f);
  double step = control.initial_step;
  for (int s = 0; s < control.steps; ++s) {
    const RealVector grad = objective.smooth_gradient(out.t, kappa, dual.rho);
    bool accepted = false;
    for (int h = 0; h <= control.max_halvings; ++h, step *= 0.5) {
      const RealVector cand = project_group_simplex(out.t - step * grad, objective.groups(), objective.states());
      const double fc = objective.smooth_value(cand, kappa, dual.rho);
      if (fc < f) {
        out.t = cand;
        f = fc;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    out.values.push_back(f);
    step = std::min(2.0 * step, control.initial_step);
  }
  return out;
}

DualState update_duals(const CoherenceVector& u, const CoherenceVector& coh, const DualState& state,
                       const PenaltySchedule& schedule) {
  if (u.size() != coh.size() || state.beta.size() != coh.size()) {
    throw std::invalid_argument("coherence and multiplier vectors must have equal length");
  }
  DualState next = state;
  const CoherenceVector diff = u - coh;
  next.beta = state.beta + state.rho * diff;
  const double residual = diff.norm();
  if (!std::isnan(state.last_residual) && residual > schedule.required_shrink * state.last_residual) {
    next.rho = std::min(schedule.rho_max, schedule.growth * state.rho);
  }
  next.last_residual = residual;
  return next;
}

LagrangianResult augmented_lagrangian_solve(const RealVector& t_init, const FrameObjective& objective,
                                            const FcaoParams& params, std::mt19937_64& rng) {
  if (!frame_feasible(t_init, objective.groups(), objective.states())) {
    throw std::invalid_argument("augmented Lagrangian needs a feasible starting frame");
  }
  const Eigen::Index M = objective.blocks();
  const PenaltySchedule schedule = params.schedule();
  const ProxControl control{params.prox_steps, params.prox_initial_step};

  RealVector t = t_init;
  CoherenceVector coh = objective.coherences(t);
  CoherenceVector u = coh;

  LagrangianResult best;
  best.t = t;
  best.mu = average_mutual_coherence(coh, M);

  DualState dual;
  dual.rho = params.rho0;
  dual.beta = ComplexVector::Zero(coh.size());
  if (params.dual_init == DualInit::Random) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Eigen::Index p = 0; p < dual.beta.size(); ++p) dual.beta[p] = unit(rng);
  }

  for (int a = 0; a < params.lagrangian_loops; ++a) {
    double mu = best.mu;
    for (int b = 0; b < params.alternating_loops; ++b) {
      u = soft_threshold_update_u(coh, dual);
      t = prox_grad_update_t(t, u, dual, objective, control).t;
      coh = objective.coherences(t);
      mu = average_mutual_coherence(coh, M);
      if (mu < best.mu) {
        best.mu = mu;
        best.t = t;
      }
    }
    dual = update_duals(u, coh, dual, schedule);
    best.trace.residual.push_back(dual.last_residual);
    best.trace.rho.push_back(dual.rho);
    best.trace.mu.push_back(mu);
  }
  best.u = u;
  return best;
}

PatternSearchResult pattern_search_init(const RealVector& incumbent, const FrameObjective& objective,
                                        const FcaoParams& params, std::mt19937_64& rng) {
  const int L = objective.groups();
  const int Na = objective.states();
  PatternSearchResult out;
  out.t = incumbent;
  out.mu = objective.mutual_coherence(incumbent);
  out.evaluations = 1;
  out.accepted.push_back(out.mu);

  std::vector<Eigen::Index> order(incumbent.size());
  std::iota(order.begin(), order.end(), 0);
  double step = params.pattern_initial_step;
  while (step >= params.pattern_min_step && out.evaluations < params.pattern_budget) {
    std::shuffle(order.begin(), order.end(), rng);
    bool improved = false;
    for (Eigen::Index j : order) {
      for (double sign : {1.0, -1.0}) {
        if (out.evaluations >= params.pattern_budget) break;
        RealVector cand = out.t;
        cand[j] += sign * step;
        cand = project_group_simplex(cand, L, Na);
        if (cand == out.t) continue;
        const double mu = objective.mutual_coherence(cand);
        ++out.evaluations;
        if (mu < out.mu) {
          out.t = std::move(cand);
          out.mu = mu;
          out.accepted.push_back(mu);
          improved = true;
          break;
        }
      }
      if (out.evaluations >= params.pattern_budget) break;
    }
    if (!improved) step *= 0.5;
  }
  return out;
}

FcaoResult fcao_optimize(const ConfigurationMatrix& T0, const SensingDictionary& dict, const FcaoParams& params) {
  params.validate();
  const auto report = validate_configuration(T0);
  if (!report.ok()) throw std::invalid_argument("initial configuration is infeasible:\n" + report.describe());
  if (T0.row_length() != dict.A.rows()) throw std::invalid_argument("configuration does not match the dictionary");

  std::mt19937_64 rng(params.seed);
  FcaoResult result;
  result.T = T0;
  result.mu = average_mutual_coherence(measurement_matrix(T0, dict));
  result.history.push_back({0, -1, result.mu});

  const int K = T0.frames();
  int k = 0;
  int stagnant = 0;
  for (int i = 1; i <= params.max_outer_iterations; ++i) {
    const FrameObjective objective(dict.A, result.T.without_frame(k), T0.groups(), T0.states());
    const PatternSearchResult seed = pattern_search_init(result.T.frame(k), objective, params, rng);
    const LagrangianResult refined = augmented_lagrangian_solve(seed.t, objective, params, rng);
    // Compare against the incumbent as evaluated by this objective so rounding
    // differences between evaluation paths cannot count as progress.
    const double incumbent_mu = seed.accepted.front();
    if (refined.mu < incumbent_mu && refined.mu < result.mu) {
      stagnant = (result.mu - refined.mu) <= params.tolerance ? stagnant + 1 : 0;
      result.T.set_frame(k, refined.t);
      result.mu = refined.mu;
    } else {
      ++stagnant;
    }
    result.history.push_back({i, k, result.mu});
    if (stagnant >= K) break;
    k = (k + 1) % K;
  }
  return result;
}

}  // namespace rissense
