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

#include "mafus/learners/boosting.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "json.hpp"

namespace mafus::learners {

namespace {

double soft_threshold(double g, double alpha) {
  if (g > alpha) return g - alpha;
  if (g < -alpha) return g + alpha;
  return 0.0;
}

struct SplitChoice {
  bool valid = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

struct PendingLeaf {
  int node = 0;
  std::vector<std::size_t> samples;
  SplitChoice split;
};

class GradientTreeBuilder {
 public:
  GradientTreeBuilder(const Matrix& x, std::span<const double> grad, std::span<const double> hess,
                      std::span<const std::size_t> features, const BoostingParams& params)
      : x_(x), grad_(grad), hess_(hess), features_(features), params_(params) {}

  DecisionTree build() {
    std::vector<std::size_t> all(grad_.size());
    std::iota(all.begin(), all.end(), 0);
    PendingLeaf root{make_node(all, 0), std::move(all), {}};
    if (params_.policy == GrowthPolicy::kDepthWise) {
      grow_depth_wise(root);
    } else {
      grow_leaf_wise(std::move(root));
    }
    return DecisionTree(std::move(nodes_));
  }

 private:
  double score_term(double g, double h) const {
    const double t = soft_threshold(g, params_.reg_alpha);
    return t * t / (h + params_.reg_lambda);
  }

  int make_node(const std::vector<std::size_t>& samples, int depth) {
    double g = 0.0;
    double h = 0.0;
    for (std::size_t i : samples) {
      g += grad_[i];
      h += hess_[i];
    }
    TreeNode node;
    node.depth = depth;
    node.cover = h;
    node.value = -params_.learning_rate * soft_threshold(g, params_.reg_alpha) /
                 (h + params_.reg_lambda);
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size()) - 1;
  }

  bool depth_allows(int depth) const { return params_.max_depth <= 0 || depth < params_.max_depth; }

  SplitChoice find_split(const std::vector<std::size_t>& samples) const {
    double g_total = 0.0;
    double h_total = 0.0;
    for (std::size_t i : samples) {
      g_total += grad_[i];
      h_total += hess_[i];
    }
    const double parent = score_term(g_total, h_total);
    SplitChoice best;
    std::vector<std::pair<double, std::size_t>> sorted(samples.size());
    for (std::size_t feature : features_) {
      for (std::size_t s = 0; s < samples.size(); ++s) {
        sorted[s] = {x_(samples[s], feature), samples[s]};
      }
      std::sort(sorted.begin(), sorted.end());
      double gl = 0.0;
      double hl = 0.0;
      for (std::size_t s = 0; s + 1 < sorted.size(); ++s) {
        gl += grad_[sorted[s].second];
        hl += hess_[sorted[s].second];
        if (sorted[s].first == sorted[s + 1].first) continue;
        const double hr = h_total - hl;
        if (hl < params_.min_child_weight || hr < params_.min_child_weight) continue;
        const double gain =
            0.5 * (score_term(gl, hl) + score_term(g_total - gl, hr) - parent) - params_.gamma;
        if (gain > 0.0 && (!best.valid || gain > best.gain)) {
          double threshold = 0.5 * (sorted[s].first + sorted[s + 1].first);
          if (threshold >= sorted[s + 1].first) threshold = sorted[s].first;
          best = {true, static_cast<int>(feature), threshold, gain};
        }
      }
    }
    return best;
  }

  // Turns a leaf into an internal node; returns the two child leaves.
  std::pair<PendingLeaf, PendingLeaf> split_leaf(PendingLeaf& leaf) {
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    const auto f = static_cast<std::size_t>(leaf.split.feature);
    for (std::size_t i : leaf.samples) {
      (x_(i, f) <= leaf.split.threshold ? left : right).push_back(i);
    }
    const int depth = nodes_[leaf.node].depth + 1;
    const int l = make_node(left, depth);
    const int r = make_node(right, depth);
    TreeNode& parent = nodes_[leaf.node];
    parent.feature = leaf.split.feature;
    parent.threshold = leaf.split.threshold;
    parent.gain = leaf.split.gain;
    parent.left = l;
    parent.right = r;
    leaf.samples.clear();
    return {PendingLeaf{l, std::move(left), {}}, PendingLeaf{r, std::move(right), {}}};
  }

  void grow_depth_wise(PendingLeaf& leaf) {
    if (!depth_allows(nodes_[leaf.node].depth)) return;
    leaf.split = find_split(leaf.samples);
    if (!leaf.split.valid) return;
    auto [left, right] = split_leaf(leaf);
    grow_depth_wise(left);
    grow_depth_wise(right);
  }

  void grow_leaf_wise(PendingLeaf root) {
    std::vector<PendingLeaf> open;
    auto consider = [&](PendingLeaf leaf) {
      if (depth_allows(nodes_[leaf.node].depth)) leaf.split = find_split(leaf.samples);
      open.push_back(std::move(leaf));
    };
    consider(std::move(root));
    std::size_t leaves = 1;
    const std::size_t cap = params_.num_leaves == 0 ? std::numeric_limits<std::size_t>::max()
                                                     : params_.num_leaves;
    while (leaves < cap) {
      // Best gain first; ties go to the earliest created node.
      auto best = open.end();
      for (auto it = open.begin(); it != open.end(); ++it) {
        if (!it->split.valid) continue;
        if (best == open.end() || it->split.gain > best->split.gain) best = it;
      }
      if (best == open.end()) break;
      PendingLeaf chosen = std::move(*best);
      open.erase(best);
      auto [left, right] = split_leaf(chosen);
      consider(std::move(left));
      consider(std::move(right));
      ++leaves;
    }
  }

  const Matrix& x_;
  std::span<const double> grad_;
  std::span<const double> hess_;
  std::span<const std::size_t> features_;
  const BoostingParams& params_;
  std::vector<TreeNode> nodes_;
};

double logistic_loss(double margin, int label) {
  // log(1 + exp(-m)) for y=1, log(1 + exp(m)) for y=0, computed stably.
  const double z = label == 1 ? -margin : margin;
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

BoostingParams BoostingParams::from_config(const ModelConfig& config) {
  BoostingParams p;
  p.seed = config.seed;
  p.class_weighting = config.class_weighting;
  if (config.algorithm == Algorithm::kLgbm) {
    p.policy = GrowthPolicy::kLeafWise;
    p.learning_rate = config.real("learning_rate", 0.1);
    p.num_leaves = static_cast<std::size_t>(config.integer("num_leaves", 31));
    p.max_depth = static_cast<int>(config.integer("max_depth", -1));
    p.reg_lambda = config.real("reg_lambda", 0.0);
  } else {
    p.policy = GrowthPolicy::kDepthWise;
    p.learning_rate = config.real("learning_rate", 0.3);
    p.max_depth = static_cast<int>(config.integer("max_depth", 6));
    p.reg_lambda = config.real("reg_lambda", 1.0);
  }
  p.n_estimators = static_cast<std::size_t>(config.integer("n_estimators", 100));
  p.gamma = config.real("gamma", 0.0);
  p.reg_alpha = config.real("reg_alpha", 0.0);
  p.min_child_weight = config.real("min_child_weight", 1.0);
  p.colsample_bytree = config.real("colsample_bytree", 1.0);
  return p;
}

double BoostedTrees::margin(std::span<const double> x) const {
  double m = base_margin_;
  for (const auto& t : trees_) m += t.evaluate(x);
  return m;
}

double BoostedTrees::score(std::span<const double> x) const { return sigmoid(margin(x)); }

std::string BoostedTrees::parameters_json() const {
  nlohmann::json doc;
  doc["base_margin"] = base_margin_;
  doc["trees"] = nlohmann::json::array();
  for (const auto& t : trees_) doc["trees"].push_back(nlohmann::json::parse(t.to_json()));
  return doc.dump();
}

BoostedTrees BoostedTrees::from_parameters(std::string_view text, std::string kind) {
  const auto doc = nlohmann::json::parse(text);
  std::vector<DecisionTree> trees;
  for (const auto& t : doc.at("trees")) trees.push_back(DecisionTree::from_json(t.dump()));
  return BoostedTrees(std::move(trees), doc.at("base_margin").get<double>(), std::move(kind));
}

DecisionTree build_gradient_tree(const Matrix& x, std::span<const double> grad,
                                 std::span<const double> hess,
                                 std::span<const std::size_t> features,
                                 const BoostingParams& params) {
  return GradientTreeBuilder(x, grad, hess, features, params).build();
}

BoostedTrees fit_boosting(const BoostingParams& params, const Matrix& x,
                          std::span<const int> labels) {
  const std::size_t n = labels.size();
  const std::size_t d = x.cols();
  const auto weights = class_weights(labels, params.class_weighting);
  const double weight_sum = std::accumulate(weights.begin(), weights.end(), 0.0);

  std::vector<double> margin(n, params.base_margin);
  std::vector<double> grad(n);
  std::vector<double> hess(n);
  auto loss = [&] {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += weights[i] * logistic_loss(margin[i], labels[i]);
    return total / weight_sum;
  };

  const auto n_cols = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(params.colsample_bytree * static_cast<double>(d))), 1, d);
  std::vector<DecisionTree> trees;
  std::vector<double> history{loss()};
  std::vector<std::size_t> columns(d);
  for (std::size_t round = 0; round < params.n_estimators; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(margin[i]);
      grad[i] = weights[i] * (p - labels[i]);
      hess[i] = weights[i] * p * (1.0 - p);
    }
    std::iota(columns.begin(), columns.end(), 0);
    if (n_cols < d) {
      std::mt19937_64 rng(derive_seed(params.seed, "colsample", round));
      std::shuffle(columns.begin(), columns.end(), rng);
      std::sort(columns.begin(), columns.begin() + static_cast<std::ptrdiff_t>(n_cols));
    }
    DecisionTree tree = build_gradient_tree(
        x, grad, hess, std::span<const std::size_t>(columns.data(), n_cols), params);
    for (std::size_t i = 0; i < n; ++i) margin[i] += tree.evaluate(x.row(i));
    trees.push_back(std::move(tree));
    history.push_back(loss());
  }
  BoostedTrees model(std::move(trees), params.base_margin,
                     params.policy == GrowthPolicy::kLeafWise ? "lgbm" : "xgb");
  model.set_loss_history(std::move(history));
  return model;
}

}  // namespace mafus::learners
