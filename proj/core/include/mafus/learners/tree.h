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

#ifndef MAFUS_LEARNERS_TREE_H_
#define MAFUS_LEARNERS_TREE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mafus::learners {

struct TreeNode {
  // Internal nodes: x[feature] <= threshold goes left. Leaves have feature -1.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output
  double cover = 0.0;  // training weight (or hessian) reaching the node
  double gain = 0.0;   // split gain, 0 for leaves
  int depth = 0;

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

enum class GrowthPolicy { kDepthWise, kLeafWise };

// Binary decision tree shared by the forest and both boosters. Node 0 is the
// root.
class DecisionTree {
 public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::vector<TreeNode>& mutable_nodes() { return nodes_; }

  int leaf_index(std::span<const double> x) const;
  double evaluate(std::span<const double> x) const { return nodes_[leaf_index(x)].value; }

  std::size_t internal_count() const;
  std::size_t leaf_count() const { return nodes_.size() - internal_count(); }
  int max_depth() const;

  // Number of internal nodes splitting on each feature, indexed 0..dims-1.
  std::vector<std::size_t> split_counts(std::size_t dims) const;
  // Summed split gain per feature.
  std::vector<double> split_gains(std::size_t dims) const;

  // JSON array text of the nodes.
  std::string to_json() const;
  static DecisionTree from_json(std::string_view text);

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

}  // namespace mafus::learners

#endif  // MAFUS_LEARNERS_TREE_H_
