// SPDX-License-Identifier: Apache-2.0

#include "rissense/recognizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace rissense {

void CostModel::validate() const {
  if (chi.rows() < 2 || chi.rows() != chi.cols()) throw std::invalid_argument("cost matrix must be square, N_P >= 2");
  if (!chi.allFinite() || chi.minCoeff() < 0.0) throw std::invalid_argument("costs must be finite and non-negative");
  if (priors.size() != chi.rows()) throw std::invalid_argument("priors must have one entry per posture");
  if (priors.minCoeff() < 0.0 || std::abs(priors.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("priors must be non-negative and sum to one");
  }
}

CostModel CostModel::zero_one(int classes) {
  CostModel c;
  c.chi = RealMatrix::Ones(classes, classes) - RealMatrix::Identity(classes, classes);
  c.priors = RealVector::Constant(classes, 1.0 / classes);
  return c;
}

std::string to_string(Activation a) {
  switch (a) {
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
    case Activation::Sigmoid: return "sigmoid";
  }
  return "relu";
}

Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::Relu;
  if (s == "tanh") return Activation::Tanh;
  if (s == "sigmoid") return Activation::Sigmoid;
  throw std::invalid_argument("unknown activation '" + s + "'");
}

std::string to_string(InitMode m) { return m == InitMode::UniformUnit ? "uniform" : "scaled"; }

InitMode init_mode_from_string(const std::string& s) {
  if (s == "uniform") return InitMode::UniformUnit;
  if (s == "scaled") return InitMode::ScaledSymmetric;
  throw std::invalid_argument("unknown init mode '" + s + "'");
}

RealVector softmax(const RealVector& logits) {
  const double top = logits.maxCoeff();
  RealVector e = (logits.array() - top).exp();
  return e / e.sum();
}

DecisionNetwork::DecisionNetwork(std::vector<int> layer_sizes, Activation activation)
    : sizes_(std::move(layer_sizes)), activation_(activation) {
  if (sizes_.size() < 2) throw std::invalid_argument("network needs an input and an output layer");
  for (int s : sizes_) {
    if (s < 1) throw std::invalid_argument("layer sizes must be positive");
  }
  if (sizes_.front() % 2 != 0) throw std::invalid_argument("input size must be 2K (Re/Im pairs)");
  if (sizes_.back() < 2) throw std::invalid_argument("network needs at least two output classes");
  for (std::size_t l = 1; l < sizes_.size(); ++l) {
    weights_.push_back(RealMatrix::Zero(sizes_[l], sizes_[l - 1]));
    biases_.push_back(RealVector::Zero(sizes_[l]));
  }
  mean_ = RealVector::Zero(sizes_.front());
  scale_ = RealVector::Ones(sizes_.front());
}

Eigen::Index DecisionNetwork::parameter_count() const {
  Eigen::Index n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) n += weights_[l].size() + biases_[l].size();
  return n;
}

RealVector DecisionNetwork::parameters() const {
  RealVector theta(parameter_count());
  Eigen::Index off = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const auto& W = weights_[l];
    for (Eigen::Index r = 0; r < W.rows(); ++r) {
      for (Eigen::Index c = 0; c < W.cols(); ++c) theta[off++] = W(r, c);
    }
    theta.segment(off, biases_[l].size()) = biases_[l];
    off += biases_[l].size();
  }
  return theta;
}

void DecisionNetwork::set_parameters(const RealVector& theta) {
  if (theta.size() != parameter_count()) throw std::invalid_argument("parameter vector has the wrong length");
  Eigen::Index off = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    auto& W = weights_[l];
    for (Eigen::Index r = 0; r < W.rows(); ++r) {
      for (Eigen::Index c = 0; c < W.cols(); ++c) W(r, c) = theta[off++];
    }
    biases_[l] = theta.segment(off, biases_[l].size());
    off += biases_[l].size();
  }
}

void DecisionNetwork::set_standardization(RealVector mean, RealVector scale) {
  if (mean.size() != input_size() || scale.size() != input_size()) {
    throw std::invalid_argument("standardization statistics must match the input size");
  }
  if ((scale.array() <= 0.0).any()) throw std::invalid_argument("feature scales must be positive");
  mean_ = std::move(mean);
  scale_ = std::move(scale);
}

RealVector DecisionNetwork::features(const ComplexVector& y) const {
  if (2 * y.size() != input_size()) {
    throw std::invalid_argument("measurement has " + std::to_string(y.size()) + " frames, network expects " +
                                std::to_string(frames()));
  }
  RealVector x(2 * y.size());
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    x[2 * k] = y[k].real();
    x[2 * k + 1] = y[k].imag();
  }
  return (x - mean_).cwiseQuotient(scale_);
}

RealVector DecisionNetwork::activate(const RealVector& z) const {
  switch (activation_) {
    case Activation::Relu: return z.cwiseMax(0.0);
    case Activation::Tanh: return z.array().tanh();
    case Activation::Sigmoid: return (1.0 + (-z.array()).exp()).inverse();
  }
  return z;
}

RealVector DecisionNetwork::activate_derivative(const RealVector& z, const RealVector& a) const {
  switch (activation_) {
    case Activation::Relu: return (z.array() > 0.0).cast<double>();
    case Activation::Tanh: return 1.0 - a.array().square();
    case Activation::Sigmoid: return a.array() * (1.0 - a.array());
  }
  return RealVector::Ones(z.size());
}

RealVector DecisionNetwork::logits_from_features(const RealVector& x) const {
  RealVector a = x;
  for (std::size_t l = 0; l + 1 < weights_.size(); ++l) a = activate(weights_[l] * a + biases_[l]);
  return weights_.back() * a + biases_.back();
}

RealVector DecisionNetwork::forward(const ComplexVector& y) const { return softmax(logits_from_features(features(y))); }

double DecisionNetwork::backward(const ComplexVector& y, int label, const RealMatrix& chi, std::vector<RealMatrix>& gW,
                                 std::vector<RealVector>& gb) const {
  if (label < 0 || label >= classes()) throw std::out_of_range("label outside [0, N_P)");
  const std::size_t layers = weights_.size();
  std::vector<RealVector> pre(layers), post(layers + 1);
  post[0] = features(y);
  for (std::size_t l = 0; l < layers; ++l) {
    pre[l] = weights_[l] * post[l] + biases_[l];
    post[l + 1] = (l + 1 < layers) ? activate(pre[l]) : softmax(pre[l]);
  }
  const RealVector& p = post[layers];
  const RealVector cost_row = chi.row(label).transpose();
  const double E = cost_row.dot(p);

  // dE/dz_i = p_i (chi(label, i) - E) at the softmax input.
  RealVector delta = p.cwiseProduct(cost_row - RealVector::Constant(p.size(), E));
  gW.resize(layers);
  gb.resize(layers);
  for (std::size_t l = layers; l-- > 0;) {
    gW[l].noalias() = delta * post[l].transpose();
    gb[l] = delta;
    if (l > 0) delta = (weights_[l].transpose() * delta).cwiseProduct(activate_derivative(pre[l - 1], post[l]));
  }
  return E;
}

RealVector DecisionNetwork::gradient(const ComplexVector& y, int label, const RealMatrix& chi, double* loss) const {
  std::vector<RealMatrix> gW;
  std::vector<RealVector> gb;
  const double E = backward(y, label, chi, gW, gb);
  if (loss) *loss = E;
  RealVector g(parameter_count());
  Eigen::Index off = 0;
  for (std::size_t l = 0; l < gW.size(); ++l) {
    for (Eigen::Index r = 0; r < gW[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < gW[l].cols(); ++c) g[off++] = gW[l](r, c);
    }
    g.segment(off, gb[l].size()) = gb[l];
    off += gb[l].size();
  }
  return g;
}

void DecisionNetwork::sgd_step(const ComplexVector& y, int label, const RealMatrix& chi, double learning_rate) {
  std::vector<RealMatrix> gW;
  std::vector<RealVector> gb;
  backward(y, label, chi, gW, gb);
  for (std::size_t l = 0; l < gW.size(); ++l) {
    weights_[l] -= learning_rate * gW[l];
    biases_[l] -= learning_rate * gb[l];
  }
}

RealVector forward(const DecisionNetwork& net, const ComplexVector& y) { return net.forward(y); }

double sample_loss(const RealVector& probs, int label, const CostModel& cost) {
  if (label < 0 || label >= cost.classes()) throw std::out_of_range("label outside [0, N_P)");
  if (probs.size() != cost.classes()) throw std::invalid_argument("probability vector length mismatch");
  return cost.chi.row(label).dot(probs);
}

RealVector backprop_gradient(const DecisionNetwork& net, const ComplexVector& y, int label, const CostModel& cost) {
  return net.gradient(y, label, cost.chi);
}

std::vector<int> LabeledDataset::class_counts() const {
  std::vector<int> counts(classes, 0);
  for (const auto& s : samples) {
    if (s.label >= 0 && s.label < classes) ++counts[s.label];
  }
  return counts;
}

namespace {

double dataset_loss(const DecisionNetwork& net, const LabeledDataset& data, const CostModel& cost) {
  double psi = 0.0;
  for (const auto& s : data.samples) psi += sample_loss(net.forward(s.y), s.label, cost);
  return psi;
}

void initialize(DecisionNetwork& net, InitMode mode, std::mt19937_64& rng) {
  RealVector theta(net.parameter_count());
  if (mode == InitMode::UniformUnit) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Eigen::Index j = 0; j < theta.size(); ++j) theta[j] = unit(rng);
  } else {
    const auto& sizes = net.layer_sizes();
    Eigen::Index off = 0;
    for (std::size_t l = 1; l < sizes.size(); ++l) {
      const double limit = std::sqrt(6.0 / (sizes[l - 1] + sizes[l]));
      std::uniform_real_distribution<double> sym(-limit, limit);
      const Eigen::Index nw = static_cast<Eigen::Index>(sizes[l]) * sizes[l - 1];
      for (Eigen::Index j = 0; j < nw; ++j) theta[off++] = sym(rng);
      for (int j = 0; j < sizes[l]; ++j) theta[off++] = 0.0;
    }
  }
  net.set_parameters(theta);
}

}  // namespace

TrainResult train(const LabeledDataset& data, const CostModel& cost, const TrainOptions& options) {
  if (data.samples.empty()) throw std::invalid_argument("training set is empty");
  if (!(options.learning_rate > 0.0 && options.learning_rate < 1.0)) {
    throw std::invalid_argument("learning rate must lie in (0, 1)");
  }
  if (options.max_epochs < 1 || options.patience < 1) throw std::invalid_argument("max_epochs and patience must be >= 1");
  cost.validate();
  if (data.classes != cost.classes()) throw std::invalid_argument("dataset and cost model disagree on N_P");

  const int K = static_cast<int>(data.samples.front().y.size());
  std::vector<int> sizes{2 * K};
  sizes.insert(sizes.end(), options.hidden.begin(), options.hidden.end());
  sizes.push_back(cost.classes());
  DecisionNetwork net(sizes, options.activation);

  if (options.standardize) {
    const double n = static_cast<double>(data.size());
    RealVector mean = RealVector::Zero(2 * K);
    RealVector sq = RealVector::Zero(2 * K);
    DecisionNetwork identity = net;  // zero mean, unit scale
    for (const auto& s : data.samples) {
      const RealVector x = identity.features(s.y);
      mean += x;
      sq += x.cwiseAbs2();
    }
    mean /= n;
    RealVector scale = (sq / n - mean.cwiseAbs2()).cwiseMax(0.0).cwiseSqrt();
    for (Eigen::Index j = 0; j < scale.size(); ++j) {
      if (!(scale[j] > 1e-300)) scale[j] = 1.0;
    }
    net.set_standardization(mean, scale);
  }

  std::mt19937_64 rng(options.seed);
  initialize(net, options.init, rng);

  TrainResult result;
  double best_psi = dataset_loss(net, data, cost);
  if (!std::isfinite(best_psi)) throw NumericFailure("initial training loss is not finite");
  result.epoch_loss.push_back(best_psi);
  result.accepted_loss.push_back(best_psi);
  DecisionNetwork best = net;

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  int bad_epochs = 0;
  for (int epoch = 1; epoch <= options.max_epochs; ++epoch) {
    if (options.shuffle) std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t j : order) {
      const auto& s = data.samples[j];
      net.sgd_step(s.y, s.label, cost.chi, options.learning_rate);
    }
    const double psi = dataset_loss(net, data, cost);
    if (!std::isfinite(psi)) throw NumericFailure("training loss diverged; lower the learning rate");
    result.epoch_loss.push_back(psi);
    result.epochs_run = epoch;
    if (psi < best_psi) {
      best_psi = psi;
      best = net;
      result.accepted_loss.push_back(psi);
      bad_epochs = 0;
    } else if (++bad_epochs >= options.patience) {
      result.stopped_by_rule = true;
      break;
    }
  }
  result.net = best;
  return result;
}

int argmax_decision(const RealVector& probs) {
  int best = 0;
  for (Eigen::Index i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[best]) best = static_cast<int>(i);
  }
  return best;
}

EvaluationReport evaluate(const DecisionNetwork& net, const LabeledDataset& data, const CostModel& cost) {
  if (data.samples.empty()) throw std::invalid_argument("evaluation set is empty");
  const int P = cost.classes();
  EvaluationReport r;
  r.confusion = Eigen::MatrixXi::Zero(P, P);
  r.samples = data.size();
  double psi = 0.0;
  double true_prob = 0.0;
  for (const auto& s : data.samples) {
    if (s.label < 0 || s.label >= P) throw std::out_of_range("label outside [0, N_P)");
    const RealVector p = net.forward(s.y);
    for (int i = 0; i < P; ++i) {
      if (i != s.label) psi += cost.chi(s.label, i) * p[i];
    }
    true_prob += p[s.label];
    ++r.confusion(s.label, argmax_decision(p));
  }
  const double n = static_cast<double>(r.samples);
  r.psi = psi / n;
  r.mean_true_probability = true_prob / n;
  r.accuracy = r.confusion.trace() / n;
  r.per_class_accuracy.resize(P);
  for (int i = 0; i < P; ++i) {
    const int row = r.confusion.row(i).sum();
    r.per_class_accuracy[i] = row > 0 ? static_cast<double>(r.confusion(i, i)) / row
                                      : std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

}  // namespace rissense
