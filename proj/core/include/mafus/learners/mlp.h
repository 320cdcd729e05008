/*
 * Copyright 2026 The MAFUS Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MAFUS_LEARNERS_MLP_H_
#define MAFUS_LEARNERS_MLP_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mafus/common.h"
#include "mafus/learners/config.h"
#include "mafus/learners/model.h"

namespace mafus::learners {

enum class Activation { kTanh, kRelu };
enum class MlpSolver { kSgd, kAdam, kLbfgs };

// Fully connected net: dims -> hidden[0] -> hidden[1] -> hidden[2] -> 1, with a
// sigmoid output trained on binary cross-entropy plus alpha/(2m) * ||W||^2.
//
// Parameters are one flat vector: for each layer the weight matrix
// (out x in, row-major) followed by its bias.
class MlpNetwork {
 public:
  MlpNetwork(std::size_t dims, std::vector<std::size_t> hidden, Activation activation);

  std::size_t dims() const { return sizes_.front(); }
  const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
  Activation activation() const { return activation_; }
  std::size_t parameter_count() const { return params_.size(); }
  std::span<const double> parameters() const { return params_; }
  std::span<double> mutable_parameters() { return params_; }

  // Glorot-uniform initialization.
  void initialize(std::uint64_t seed);

  double predict_proba(std::span<const double> x) const;
  void predict_proba_batch(const Matrix& x, std::span<double> out) const;

  // Weighted mean cross-entropy plus the L2 term, with m = rows of x. Fills
  // `grad` (same layout as the parameters) when non-null.
  double loss_and_gradient(const Matrix& x, std::span<const int> labels,
                           std::span<const double> weights, double alpha,
                           std::vector<double>* grad) const;

 private:
  std::vector<std::size_t> sizes_;
  Activation activation_;
  std::vector<double> params_;
  std::vector<std::size_t> offsets_;  // start of each layer's weights
};

struct MlpParams {
  std::vector<std::size_t> hidden{128, 128, 128};
  Activation activation = Activation::kRelu;
  MlpSolver solver = MlpSolver::kAdam;
  double alpha = 1e-4;
  bool adaptive_learning_rate = false;
  double learning_rate_init = 1e-3;
  std::size_t max_iter = 500;
  std::size_t batch_size = 32;
  double tol = 1e-6;
  std::size_t n_iter_no_change = 10;
  std::uint64_t seed = 1;
  ClassWeighting class_weighting = ClassWeighting::kNone;

  // hidden_layer_sizes is an integer width shared by all three layers, or a
  // text list such as "256,128,64".
  static MlpParams from_config(const ModelConfig& config);
};

class MlpModel final : public Classifier {
 public:
  explicit MlpModel(MlpNetwork network) : network_(std::move(network)) {}

  double score(std::span<const double> x) const override { return network_.predict_proba(x); }
  void score_batch(const Matrix& x, std::span<double> out) const override {
    network_.predict_proba_batch(x, out);
  }
  double threshold() const override { return 0.5; }
  std::string kind() const override { return "mlp"; }
  std::string parameters_json() const override;
  static MlpModel from_parameters(std::string_view text);

  const MlpNetwork& network() const { return network_; }
  const std::vector<double>& loss_curve() const { return loss_curve_; }
  void set_loss_curve(std::vector<double> curve) { loss_curve_ = std::move(curve); }

 private:
  MlpNetwork network_;
  std::vector<double> loss_curve_;
};

MlpModel fit_mlp(const MlpParams& params, const Matrix& x, std::span<const int> labels);

}  // namespace mafus::learners

#endif  // MAFUS_LEARNERS_MLP_H_
