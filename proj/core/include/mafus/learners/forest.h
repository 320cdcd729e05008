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

#ifndef MAFUS_LEARNERS_FOREST_H_
#define MAFUS_LEARNERS_FOREST_H_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "mafus/common.h"
#include "mafus/learners/config.h"
#include "mafus/learners/model.h"
#include "mafus/learners/tree.h"

namespace mafus::learners {

enum class SplitCriterion { kGini, kEntropy };

struct ClassificationTreeParams {
  SplitCriterion criterion = SplitCriterion::kGini;
  std::optional<int> max_depth;  // unlimited when empty
  // Features drawn per split; 0 means all.
  std::size_t max_features = 0;
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
};

// Grows one depth-wise tree on weighted samples. Leaf value is the weighted
// fraction of class 1. Samples with zero weight are ignored.
DecisionTree build_classification_tree(const Matrix& x, std::span<const int> labels,
                                       std::span<const double> weights,
                                       const ClassificationTreeParams& params,
                                       std::mt19937_64& rng);

struct ForestParams {
  std::size_t n_estimators = 100;
  ClassificationTreeParams tree;
  bool bootstrap = true;
  std::uint64_t seed = 1;
  ClassWeighting class_weighting = ClassWeighting::kNone;

  // max_features: auto and sqrt -> floor(sqrt(d)), log2 -> floor(log2(d)),
  // None -> d; never below 1.
  static ForestParams from_config(const ModelConfig& config, std::size_t dims);
};

// Majority vote of depth-wise trees; score is the fraction voting class 1.
class RandomForest final : public Classifier {
 public:
  explicit RandomForest(std::vector<DecisionTree> trees) : trees_(std::move(trees)) {}

  double score(std::span<const double> x) const override;
  double threshold() const override { return 0.5; }
  std::string kind() const override { return "rf"; }
  std::string parameters_json() const override;
  static RandomForest from_parameters(std::string_view text);

  const std::vector<DecisionTree>& trees() const { return trees_; }

  // A leaf votes 1 when its class-1 fraction is at least one half.
  static int leaf_vote(double leaf_value) { return leaf_value >= 0.5 ? 1 : 0; }

 private:
  std::vector<DecisionTree> trees_;
};

RandomForest fit_forest(const ForestParams& params, const Matrix& x, std::span<const int> labels);

}  // namespace mafus::learners

#endif  // MAFUS_LEARNERS_FOREST_H_
