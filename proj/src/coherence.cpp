// SPDX-License-Identifier: Apache-2.0

#include "rissense/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rissense {

DegenerateColumnError::DegenerateColumnError(int column)
    : std::domain_error("measurement matrix column " + std::to_string(column) + " is zero"), column_(column) {}

MeasurementMatrix measurement_matrix(const RealMatrix& durations, const ComplexMatrix& A) {
  if (durations.cols() != A.rows()) {
    throw std::invalid_argument("inner dimensions of T (" + std::to_string(durations.cols()) + ") and A (" +
                                std::to_string(A.rows()) + ") disagree");
  }
  return durations.cast<Complex>() * A;
}

MeasurementMatrix measurement_matrix(const ConfigurationMatrix& T, const SensingDictionary& dict) {
  return measurement_matrix(T.durations(), dict.A);
}

CoherenceVector coherences_from_gram(const ComplexMatrix& gram) {
  const Eigen::Index M = gram.cols();
  RealVector inv_norm(M);
  for (Eigen::Index m = 0; m < M; ++m) {
    const double sq = gram(m, m).real();
    if (!(sq > 0.0)) throw DegenerateColumnError(static_cast<int>(m));
    inv_norm[m] = 1.0 / std::sqrt(sq);
  }
  CoherenceVector u(pair_count(M));
  Eigen::Index p = 0;
  for (Eigen::Index m = 0; m < M; ++m) {
    for (Eigen::Index m2 = m + 1; m2 < M; ++m2) u[p++] = gram(m, m2) * (inv_norm[m] * inv_norm[m2]);
  }
  return u;
}

CoherenceVector column_coherences(const MeasurementMatrix& gamma) {
  return coherences_from_gram(gamma.adjoint() * gamma);
}

double average_mutual_coherence(const CoherenceVector& u, Eigen::Index M) {
  if (M < 2) return 0.0;
  double sum = 0.0;
  for (Eigen::Index p = 0; p < u.size(); ++p) sum += std::sqrt(std::norm(u[p]));
  return 2.0 * sum / (static_cast<double>(M) * static_cast<double>(M - 1));
}

double average_mutual_coherence(const MeasurementMatrix& gamma) {
  return average_mutual_coherence(column_coherences(gamma), gamma.cols());
}

OmpResult omp_recover(const MeasurementMatrix& gamma, const ComplexVector& y_reflected, int sparsity) {
  const Eigen::Index K = gamma.rows();
  const Eigen::Index M = gamma.cols();
  if (sparsity < 0 || sparsity > K) {
    throw std::invalid_argument("sparsity " + std::to_string(sparsity) + " exceeds the " + std::to_string(K) +
                                " available measurements");
  }
  if (y_reflected.size() != K) throw std::invalid_argument("measurement length does not match the matrix");
  const RealVector norms = gamma.colwise().norm().transpose();
  if (norms.maxCoeff() == 0.0) throw std::invalid_argument("measurement matrix is zero");

  OmpResult out;
  out.estimate.eta = ComplexVector::Zero(M);
  ComplexVector residual = y_reflected;
  const double y_norm = y_reflected.norm();
  std::vector<char> used(M, 0);
  ComplexVector coeffs;

  for (int step = 0; step < sparsity; ++step) {
    if (residual.norm() <= 1e-14 * std::max(1.0, y_norm)) break;
    const ComplexVector corr = gamma.adjoint() * residual;
    Eigen::Index best = -1;
    double best_score = 0.0;
    for (Eigen::Index m = 0; m < M; ++m) {
      if (used[m] || norms[m] == 0.0) continue;
      const double score = std::abs(corr[m]) / norms[m];
      if (score > best_score) {
        best_score = score;
        best = m;
      }
    }
    if (best < 0) break;
    used[best] = 1;
    out.support.push_back(static_cast<int>(best));

    ComplexMatrix sub(K, static_cast<Eigen::Index>(out.support.size()));
    for (std::size_t j = 0; j < out.support.size(); ++j) sub.col(j) = gamma.col(out.support[j]);
    coeffs = sub.colPivHouseholderQr().solve(y_reflected);
    residual = y_reflected - sub * coeffs;
  }
  for (std::size_t j = 0; j < out.support.size(); ++j) out.estimate.eta[out.support[j]] = coeffs[j];
  out.residual_norm = residual.norm();
  return out;
}

}  // namespace rissense
