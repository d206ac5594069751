// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rissense/channel.hpp"
#include "rissense/ris.hpp"
#include "rissense/types.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rissense {

/// Gamma = T * A, K x M.
using MeasurementMatrix = ComplexMatrix;

/// Normalized Hermitian inner products of column pairs, ordered
/// (0,1), (0,2), ..., (0,M-1), (1,2), ..., (M-2,M-1).
using CoherenceVector = ComplexVector;

class DegenerateColumnError : public std::domain_error {
 public:
  explicit DegenerateColumnError(int column);
  int column() const { return column_; }

 private:
  int column_;
};

inline Eigen::Index pair_count(Eigen::Index M) { return M * (M - 1) / 2; }

/// Position of the unordered pair (m, m'), m < m', in a CoherenceVector.
inline Eigen::Index pair_index(Eigen::Index m, Eigen::Index m2, Eigen::Index M) {
  return m * (2 * M - m - 1) / 2 + (m2 - m - 1);
}

MeasurementMatrix measurement_matrix(const ConfigurationMatrix& T, const SensingDictionary& dict);
MeasurementMatrix measurement_matrix(const RealMatrix& durations, const ComplexMatrix& A);

CoherenceVector column_coherences(const MeasurementMatrix& gamma);

/// Same as column_coherences, computed from the Gram matrix Gamma^H Gamma.
CoherenceVector coherences_from_gram(const ComplexMatrix& gram);

/// Mean |u| over ordered pairs m != m'; lies in [0, 1].
double average_mutual_coherence(const MeasurementMatrix& gamma);
double average_mutual_coherence(const CoherenceVector& u, Eigen::Index M);

struct OmpResult {
  SpaceReflectionVector estimate;
  std::vector<int> support;  // selection order
  double residual_norm = 0.0;
};

/// Orthogonal matching pursuit with a least-squares refit after each pick.
/// Stops early once the residual vanishes.
OmpResult omp_recover(const MeasurementMatrix& gamma, const ComplexVector& y_reflected, int sparsity);

}  // namespace rissense
