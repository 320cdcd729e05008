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

#ifndef MAFUS_LEARNERS_BOOSTING_H_
#define MAFUS_LEARNERS_BOOSTING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "mafus/common.h"
#include "mafus/learners/config.h"
#include "mafus/learners/model.h"
#include "mafus/learners/tree.h"

namespace mafus::learners {

// Second-order gradient boosting on the logistic loss. Split gain is
//   1/2 [T(G_L)^2/(H_L+lambda) + T(G_R)^2/(H_R+lambda) - T(G)^2/(H+lambda)] - gamma
// with T the L1 soft threshold at reg_alpha; leaf weight is
// -learning_rate * T(G)/(H+lambda).
struct BoostingParams {
  GrowthPolicy policy = GrowthPolicy::kDepthWise;
  std::size_t n_estimators = 100;
  double learning_rate = 0.3;
  int max_depth = 6;          // <= 0 means unlimited
  std::size_t num_leaves = 0;  // leaf-wise cap; 0 means unlimited
  double gamma = 0.0;
  double reg_alpha = 0.0;
  double reg_lambda = 1.0;
  double min_child_weight = 1.0;
  double colsample_bytree = 1.0;
  double base_margin = 0.0;
  std::uint64_t seed = 1;
  ClassWeighting class_weighting = ClassWeighting::kNone;

  // xgb: depth-wise, defaults lr 0.3, depth 6, lambda 1.
  // lgbm: leaf-wise, defaults lr 0.1, 31 leaves, unlimited depth, lambda 0.
  static BoostingParams from_config(const ModelConfig& config);
};

class BoostedTrees final : public Classifier {
 public:
  BoostedTrees(std::vector<DecisionTree> trees, double base_margin, std::string kind)
      : trees_(std::move(trees)), base_margin_(base_margin), kind_(std::move(kind)) {}

  // Sum of leaf values plus the base margin (log-odds).
  double margin(std::span<const double> x) const;
  double score(std::span<const double> x) const override;
  double threshold() const override { return 0.5; }
  std::string kind() const override { return kind_; }
  std::string parameters_json() const override;
  static BoostedTrees from_parameters(std::string_view text, std::string kind);

  const std::vector<DecisionTree>& trees() const { return trees_; }
  double base_margin() const { return base_margin_; }
  // Weighted mean logistic loss on the training set after each round; entry 0
  // is the loss before the first tree.
  const std::vector<double>& loss_history() const { return loss_history_; }
  void set_loss_history(std::vector<double> history) { loss_history_ = std::move(history); }

 private:
  std::vector<DecisionTree> trees_;
  double base_margin_;
  std::string kind_;
  std::vector<double> loss_history_;
};

BoostedTrees fit_boosting(const BoostingParams& params, const Matrix& x,
                          std::span<const int> labels);

// Builds one regression tree on gradients/hessians restricted to `features`.
DecisionTree build_gradient_tree(const Matrix& x, std::span<const double> grad,
                                 std::span<const double> hess,
                                 std::span<const std::size_t> features,
                                 const BoostingParams& params);

double sigmoid(double z);

}  // namespace mafus::learners

#endif  // MAFUS_LEARNERS_BOOSTING_H_
