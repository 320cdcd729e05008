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

#include "mafus/learners/forest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace mafus::learners {

namespace {

double impurity(double w0, double w1, SplitCriterion criterion) {
  const double total = w0 + w1;
  if (total <= 0.0) return 0.0;
  const double p0 = w0 / total;
  const double p1 = w1 / total;
  if (criterion == SplitCriterion::kGini) return 1.0 - p0 * p0 - p1 * p1;
  double h = 0.0;
  if (p0 > 0.0) h -= p0 * std::log2(p0);
  if (p1 > 0.0) h -= p1 * std::log2(p1);
  return h;
}

struct Candidate {
  bool valid = false;
  int feature = -1;
  double threshold = 0.0;
  double decrease = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const int> labels, std::span<const double> weights,
              const ClassificationTreeParams& params, std::mt19937_64& rng)
      : x_(x), labels_(labels), weights_(weights), params_(params), rng_(rng) {}

  DecisionTree build() {
    std::vector<std::size_t> samples;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (weights_[i] > 0.0) samples.push_back(i);
    }
    grow(samples, 0);
    return DecisionTree(std::move(nodes_));
  }

 private:
  int grow(std::vector<std::size_t>& samples, int depth) {
    double w0 = 0.0;
    double w1 = 0.0;
    for (std::size_t i : samples) (labels_[i] == 1 ? w1 : w0) += weights_[i];
    const int id = static_cast<int>(nodes_.size());
    TreeNode node;
    node.depth = depth;
    node.cover = w0 + w1;
    node.value = node.cover > 0.0 ? w1 / node.cover : 0.0;
    nodes_.push_back(node);

    const bool depth_ok = !params_.max_depth || depth < *params_.max_depth;
    const bool pure = w0 == 0.0 || w1 == 0.0;
    if (!depth_ok || pure || samples.size() < params_.min_samples_split ||
        samples.size() < 2 * params_.min_samples_leaf) {
      return id;
    }
    const Candidate best = find_split(samples, w0, w1);
    if (!best.valid) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i : samples) {
      (x_(i, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right).push_back(i);
    }
    samples.clear();
    samples.shrink_to_fit();
    nodes_[id].feature = best.feature;
    nodes_[id].threshold = best.threshold;
    nodes_[id].gain = best.decrease;
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  Candidate find_split(const std::vector<std::size_t>& samples, double w0, double w1) {
    const std::size_t d = x_.cols();
    std::vector<std::size_t> features(d);
    std::iota(features.begin(), features.end(), 0);
    std::shuffle(features.begin(), features.end(), rng_);
    const std::size_t k = params_.max_features == 0 ? d : std::min(d, params_.max_features);

    const double parent = impurity(w0, w1, params_.criterion);
    const double total = w0 + w1;
    Candidate best;
    std::vector<std::pair<double, std::size_t>> sorted(samples.size());
    for (std::size_t f = 0; f < d; ++f) {
      // Keep drawing past k features until some valid split turns up.
      if (f >= k && best.valid) break;
      const std::size_t feature = features[f];
      for (std::size_t s = 0; s < samples.size(); ++s) {
        sorted[s] = {x_(samples[s], feature), samples[s]};
      }
      std::sort(sorted.begin(), sorted.end());
      double l0 = 0.0;
      double l1 = 0.0;
      for (std::size_t s = 0; s + 1 < sorted.size(); ++s) {
        const std::size_t i = sorted[s].second;
        (labels_[i] == 1 ? l1 : l0) += weights_[i];
        if (sorted[s].first == sorted[s + 1].first) continue;
        const std::size_t n_left = s + 1;
        const std::size_t n_right = sorted.size() - n_left;
        if (n_left < params_.min_samples_leaf || n_right < params_.min_samples_leaf) continue;
        const double wl = l0 + l1;
        const double wr = total - wl;
        const double child = (wl * impurity(l0, l1, params_.criterion) +
                              wr * impurity(w0 - l0, w1 - l1, params_.criterion)) /
                             total;
        const double decrease = total * (parent - child);
        if (!best.valid || decrease > best.decrease) {
          double threshold = 0.5 * (sorted[s].first + sorted[s + 1].first);
          if (threshold >= sorted[s + 1].first) threshold = sorted[s].first;
          best = {true, static_cast<int>(feature), threshold, decrease};
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  std::span<const int> labels_;
  std::span<const double> weights_;
  const ClassificationTreeParams& params_;
  std::mt19937_64& rng_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

DecisionTree build_classification_tree(const Matrix& x, std::span<const int> labels,
                                       std::span<const double> weights,
                                       const ClassificationTreeParams& params,
                                       std::mt19937_64& rng) {
  return TreeBuilder(x, labels, weights, params, rng).build();
}

ForestParams ForestParams::from_config(const ModelConfig& config, std::size_t dims) {
  ForestParams p;
  p.n_estimators = static_cast<std::size_t>(config.integer("n_estimators", 100));
  p.seed = config.seed;
  p.class_weighting = config.class_weighting;
  p.bootstrap = config.text("bootstrap", "true") != "false";
  p.tree.criterion =
      config.text("criterion", "gini") == "entropy" ? SplitCriterion::kEntropy : SplitCriterion::kGini;
  if (!config.is_none("max_depth")) p.tree.max_depth = static_cast<int>(config.integer("max_depth", 0));
  p.tree.min_samples_split = static_cast<std::size_t>(config.integer("min_samples_split", 2));
  p.tree.min_samples_leaf = static_cast<std::size_t>(config.integer("min_samples_leaf", 1));
  const std::string mf = config.text("max_features", "sqrt");
  const double d = static_cast<double>(dims);
  if (config.is_none("max_features") && config.params.contains("max_features")) {
    p.tree.max_features = dims;
  } else if (mf == "log2") {
    p.tree.max_features = static_cast<std::size_t>(std::floor(std::log2(d)));
  } else {
    p.tree.max_features = static_cast<std::size_t>(std::floor(std::sqrt(d)));
  }
  p.tree.max_features = std::max<std::size_t>(1, p.tree.max_features);
  return p;
}

double RandomForest::score(std::span<const double> x) const {
  if (trees_.empty()) return 0.5;
  std::size_t votes = 0;
  for (const auto& tree : trees_) votes += static_cast<std::size_t>(leaf_vote(tree.evaluate(x)));
  return static_cast<double>(votes) / static_cast<double>(trees_.size());
}

std::string RandomForest::parameters_json() const {
  nlohmann::json doc;
  doc["trees"] = nlohmann::json::array();
  for (const auto& t : trees_) doc["trees"].push_back(nlohmann::json::parse(t.to_json()));
  return doc.dump();
}

RandomForest RandomForest::from_parameters(std::string_view text) {
  const auto doc = nlohmann::json::parse(text);
  std::vector<DecisionTree> trees;
  for (const auto& t : doc.at("trees")) trees.push_back(DecisionTree::from_json(t.dump()));
  return RandomForest(std::move(trees));
}

RandomForest fit_forest(const ForestParams& params, const Matrix& x, std::span<const int> labels) {
  const std::size_t n = labels.size();
  const auto class_w = class_weights(labels, params.class_weighting);
  std::vector<DecisionTree> trees;
  trees.reserve(params.n_estimators);
  std::vector<double> weights(n);
  for (std::size_t t = 0; t < params.n_estimators; ++t) {
    std::mt19937_64 rng(derive_seed(params.seed, "rf-tree", t));
    if (params.bootstrap) {
      std::fill(weights.begin(), weights.end(), 0.0);
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (std::size_t i = 0; i < n; ++i) weights[pick(rng)] += 1.0;
      for (std::size_t i = 0; i < n; ++i) weights[i] *= class_w[i];
    } else {
      weights = class_w;
    }
    trees.push_back(build_classification_tree(x, labels, weights, params.tree, rng));
  }
  return RandomForest(std::move(trees));
}

}  // namespace mafus::learners
