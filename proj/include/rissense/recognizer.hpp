// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rissense/types.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rissense {

/// chi(i, i') is the cost of deciding i' when the truth is i.
struct CostModel {
  RealMatrix chi;
  RealVector priors;

  int classes() const { return static_cast<int>(chi.rows()); }
  void validate() const;
  static CostModel zero_one(int classes);
};

enum class Activation { Relu, Tanh, Sigmoid };
enum class InitMode { UniformUnit, ScaledSymmetric };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);
std::string to_string(InitMode m);
InitMode init_mode_from_string(const std::string& s);

class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RealVector softmax(const RealVector& logits);

/// Fully connected network mapping a K-frame measurement to posture
/// probabilities. The input is (Re y_1, Im y_1, ..., Re y_K, Im y_K),
/// standardized with stored per-feature statistics; the output layer is a
/// softmax. Parameters flatten layer by layer as row-major weights then biases.
class DecisionNetwork {
 public:
  DecisionNetwork() = default;
  DecisionNetwork(std::vector<int> layer_sizes, Activation activation);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  Activation activation() const { return activation_; }
  int input_size() const { return sizes_.front(); }
  int classes() const { return sizes_.back(); }
  int frames() const { return sizes_.front() / 2; }

  Eigen::Index parameter_count() const;
  RealVector parameters() const;
  void set_parameters(const RealVector& theta);

  const RealVector& feature_mean() const { return mean_; }
  const RealVector& feature_scale() const { return scale_; }
  void set_standardization(RealVector mean, RealVector scale);

  RealVector features(const ComplexVector& y) const;
  RealVector logits_from_features(const RealVector& x) const;
  RealVector forward(const ComplexVector& y) const;

  /// Gradient of sum_i' chi(label, i') p_i' with respect to parameters(); the loss is written to `loss`.
  RealVector gradient(const ComplexVector& y, int label, const RealMatrix& chi, double* loss = nullptr) const;

  /// In-place theta <- theta - rate * dE/dtheta for one sample.
  void sgd_step(const ComplexVector& y, int label, const RealMatrix& chi, double learning_rate);

 private:
  double backward(const ComplexVector& y, int label, const RealMatrix& chi, std::vector<RealMatrix>& gW,
                  std::vector<RealVector>& gb) const;
  RealVector activate(const RealVector& z) const;
  RealVector activate_derivative(const RealVector& z, const RealVector& a) const;

  std::vector<int> sizes_;
  Activation activation_ = Activation::Relu;
  std::vector<RealMatrix> weights_;  // out x in
  std::vector<RealVector> biases_;
  RealVector mean_;
  RealVector scale_;
};

RealVector forward(const DecisionNetwork& net, const ComplexVector& y);
double sample_loss(const RealVector& probs, int label, const CostModel& cost);
RealVector backprop_gradient(const DecisionNetwork& net, const ComplexVector& y, int label, const CostModel& cost);

struct LabeledSample {
  ComplexVector y;
  int label = 0;  // 0-based posture index
};

enum class Split { Train, Test };

struct LabeledDataset {
  std::vector<LabeledSample> samples;
  int classes = 0;
  Split split = Split::Train;

  std::size_t size() const { return samples.size(); }
  std::vector<int> class_counts() const;
};

struct TrainOptions {
  std::vector<int> hidden{64, 64};
  Activation activation = Activation::Relu;
  InitMode init = InitMode::UniformUnit;
  bool standardize = true;
  double learning_rate = 0.01;
  int max_epochs = 500;
  /// Consecutive non-improving epochs tolerated before stopping; 1 stops at the first.
  int patience = 1;
  bool shuffle = false;
  std::uint64_t seed = 1;
};

struct TrainResult {
  DecisionNetwork net;
  /// Psi after each evaluated epoch; entry 0 is the initial network.
  std::vector<double> epoch_loss;
  /// Psi of every accepted parameter vector, strictly decreasing.
  std::vector<double> accepted_loss;
  int epochs_run = 0;
  bool stopped_by_rule = false;
};

TrainResult train(const LabeledDataset& data, const CostModel& cost, const TrainOptions& options);

/// Empirical average false-recognition cost plus argmax decisions.
struct EvaluationReport {
  double psi = 0.0;
  double accuracy = 0.0;
  double mean_true_probability = 0.0;
  Eigen::MatrixXi confusion;    // rows: truth, cols: decision
  RealVector per_class_accuracy;  // NaN for classes absent from the data
  std::size_t samples = 0;
};

/// Ties in the argmax go to the lower class index.
EvaluationReport evaluate(const DecisionNetwork& net, const LabeledDataset& data, const CostModel& cost);

int argmax_decision(const RealVector& probs);

}  // namespace rissense
