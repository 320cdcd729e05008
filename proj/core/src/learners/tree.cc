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

#include "mafus/learners/tree.h"

#include <algorithm>

#include "json.hpp"
#include "mafus/common.h"

namespace mafus::learners {

int DecisionTree::leaf_index(std::span<const double> x) const {
  int i = 0;
  while (!nodes_[i].is_leaf()) {
    const TreeNode& n = nodes_[i];
    i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return i;
}

std::size_t DecisionTree::internal_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return !n.is_leaf(); }));
}

int DecisionTree::max_depth() const {
  int depth = 0;
  for (const auto& n : nodes_) depth = std::max(depth, n.depth);
  return depth;
}

std::vector<std::size_t> DecisionTree::split_counts(std::size_t dims) const {
  std::vector<std::size_t> counts(dims, 0);
  for (const auto& n : nodes_) {
    if (!n.is_leaf()) ++counts.at(static_cast<std::size_t>(n.feature));
  }
  return counts;
}

std::vector<double> DecisionTree::split_gains(std::size_t dims) const {
  std::vector<double> gains(dims, 0.0);
  for (const auto& n : nodes_) {
    if (!n.is_leaf()) gains.at(static_cast<std::size_t>(n.feature)) += n.gain;
  }
  return gains;
}

std::string DecisionTree::to_json() const {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& n : nodes_) {
    doc.push_back({n.feature, n.threshold, n.left, n.right, n.value, n.cover, n.gain, n.depth});
  }
  return doc.dump();
}

DecisionTree DecisionTree::from_json(std::string_view text) {
  const auto doc = nlohmann::json::parse(text);
  std::vector<TreeNode> nodes;
  for (const auto& e : doc) {
    TreeNode n;
    n.feature = e.at(0).get<int>();
    n.threshold = e.at(1).get<double>();
    n.left = e.at(2).get<int>();
    n.right = e.at(3).get<int>();
    n.value = e.at(4).get<double>();
    n.cover = e.at(5).get<double>();
    n.gain = e.at(6).get<double>();
    n.depth = e.at(7).get<int>();
    nodes.push_back(n);
  }
  for (const auto& n : nodes) {
    if (!n.is_leaf() && (n.left <= 0 || n.right <= 0 ||
                         static_cast<std::size_t>(std::max(n.left, n.right)) >= nodes.size())) {
      throw Error(ErrorCode::kParse, "tree node references a missing child");
    }
  }
  if (nodes.empty()) throw Error(ErrorCode::kParse, "tree has no nodes");
  return DecisionTree(std::move(nodes));
}

}  // namespace mafus::learners
