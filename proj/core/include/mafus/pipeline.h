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

#ifndef MAFUS_PIPELINE_H_
#define MAFUS_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mafus/common.h"
#include "mafus/explain.h"
#include "mafus/learners/config.h"
#include "mafus/metrics.h"
#include "mafus/relevance.h"
#include "mafus/synth.h"
#include "mafus/tuning.h"

namespace mafus::pipeline {

// Stage names, in execution order.
inline constexpr std::string_view kStages[] = {"load",   "clean", "standardize", "select", "split",
                                               "tune",   "fit",   "evaluate",    "explain", "emit"};

// An error raised inside a named stage. The message is prefixed with the
// stage; code() keeps the underlying category.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct GridSource {
  std::string origin;  // file path, "full", or "inline"
  tuning::HyperGrid grid;
};

struct PipelineConfig {
  std::optional<std::filesystem::path> input;  // CSV; synthetic when unset
  synth::SynthSpec synthetic;
  bool synthetic_seed_set = false;  // otherwise the master seed is used
  std::optional<std::filesystem::path> schema;
  std::uint64_t seed = 1;
  double split_ratio = 0.8;
  bool stratified_split = false;
  // Standardize (and score relevance on) the full cohort before splitting.
  bool paper_faithful = false;
  double relevance_threshold = 105.0;
  std::vector<std::string> forced_features = {"Gender"};
  relevance::ImportanceType importance = relevance::ImportanceType::kSplitCount;
  std::vector<GridSource> grids;  // one per algorithm, in run order
  std::size_t cv_folds = 5;
  std::size_t background_size = explain::kDefaultBackgroundSize;
  std::size_t exact_cap = explain::kExactFeatureCap;
  std::size_t permutations = 2000;
  std::size_t threads = 0;
  std::filesystem::path output = "mafus_out";
  bool emit_plots = true;

  // All five default grids, synthetic input.
  static PipelineConfig defaults();
  // Relative paths resolve against `base_dir`. Grid files are read here so a
  // bad path fails at configuration time.
  static PipelineConfig from_json(std::string_view text, const std::filesystem::path& base_dir = {});
  static PipelineConfig load(const std::filesystem::path& path);
  std::string to_json() const;
  void validate() const;
};

struct ModelEntry {
  learners::Algorithm algorithm = learners::Algorithm::kSvm;
  learners::ModelConfig best;
  double cv_f1 = 0.0;
  metrics::EvalReport test;
};

struct ComparisonReport {
  std::vector<ModelEntry> entries;
  std::size_t chosen = 0;
  std::string rationale;
};

// Index of the entry with the fewest class-1 errors (FN + FP), ties broken by
// higher class-1 F1, then higher AUC, then earlier position.
std::size_t choose_model(std::span<const ModelEntry> entries);
std::string to_json(const ComparisonReport& report);

struct PipelineResult {
  ComparisonReport comparison;
  explain::PartitionAB partition;
  relevance::RelevanceReport relevance;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::filesystem::path output;
};

// Runs every stage and writes the output tree. Output is assembled in a
// sibling "<output>.tmp" directory and renamed into place on success; on
// failure it is removed and a StageError is thrown.
PipelineResult run_pipeline(const PipelineConfig& config);

// Builds the plots/ directory of a run from its stored artifacts.
void emit_plots(const std::filesystem::path& run_dir);

}  // namespace mafus::pipeline

#endif  // MAFUS_PIPELINE_H_
