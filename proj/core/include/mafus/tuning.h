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

#ifndef MAFUS_TUNING_H_
#define MAFUS_TUNING_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mafus/data.h"
#include "mafus/learners/config.h"
#include "mafus/metrics.h"

namespace mafus::tuning {

using learners::Algorithm;
using learners::Hyperparameters;
using learners::ModelConfig;
using learners::ParamValue;

struct GridAxis {
  std::string name;
  std::string type;  // "Integer", "Float" or "String"; informational
  std::vector<ParamValue> values;
};

// Cartesian product of named axes. Points are numbered like an odometer: the
// last axis varies fastest.
struct HyperGrid {
  Algorithm algorithm = Algorithm::kSvm;
  std::vector<GridAxis> axes;

  std::size_t size() const;
  Hyperparameters point(std::size_t index) const;

  // Table-1 grids, with MLP widths fixed to {128, 256, 512} and the
  // max_depth / colsample_bytree ranges expanded.
  static HyperGrid full_default(Algorithm algorithm);
  static HyperGrid from_json(std::string_view text);
  static HyperGrid load(const std::filesystem::path& path);
  std::string to_json() const;
};

struct FoldAssignment {
  std::size_t k = 0;
  std::vector<std::size_t> fold;  // fold index per sample
  std::uint64_t seed = 0;

  std::vector<std::size_t> train_indices(std::size_t f) const;
  std::vector<std::size_t> test_indices(std::size_t f) const;
  friend bool operator==(const FoldAssignment&, const FoldAssignment&) = default;
};

// Shuffles each class with `seed` and deals it round-robin over k folds,
// continuing where the previous class stopped so fold sizes differ by <= 1.
FoldAssignment stratified_kfold(std::span<const int> labels, std::size_t k, std::uint64_t seed);

struct CVResult {
  ModelConfig config;
  std::size_t index = 0;  // enumeration order in the grid
  std::vector<metrics::EvalReport> folds;
  double mean_f1 = 0.0;  // mean class-1 F1 over folds
  std::size_t rank = 0;  // 1 = best
  std::optional<std::string> failure;
};

struct SearchOptions {
  // 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;
};

struct SearchResult {
  ModelConfig best;
  std::vector<CVResult> all;  // sorted by (-mean_f1, index)
  FoldAssignment folds;
};

// Seed used for the fit of grid point `index`: master seed + index, where a
// `seed` axis value replaces the master seed.
ModelConfig config_for_point(const HyperGrid& grid, std::size_t index, std::uint64_t master_seed);

SearchResult grid_search(const HyperGrid& grid, const data::Cohort& train, std::size_t k,
                         std::uint64_t seed, const SearchOptions& options = {});

std::string to_json(const SearchResult& result);

}  // namespace mafus::tuning

#endif  // MAFUS_TUNING_H_
