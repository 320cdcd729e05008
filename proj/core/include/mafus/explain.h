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

#ifndef MAFUS_EXPLAIN_H_
#define MAFUS_EXPLAIN_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mafus/common.h"
#include "mafus/data.h"
#include "mafus/learners/model.h"

namespace mafus::explain {

using learners::TrainedModel;

// Reference rows that stand in for absent features.
struct BackgroundSet {
  Matrix rows;

  std::size_t size() const { return rows.rows(); }
  // `size` rows drawn without replacement (all rows if fewer), kept in
  // source order.
  static BackgroundSet sample(const Matrix& source, std::size_t size, std::uint64_t seed);
};

inline constexpr std::size_t kDefaultBackgroundSize = 100;
inline constexpr std::size_t kExactFeatureCap = 15;

struct Attribution {
  std::vector<double> phi;  // one entry per model feature
  double base_value = 0.0;
  std::int64_t sample_id = -1;
  bool exact = true;
  // Sampled estimates get their residual spread over features to restore
  // additivity; this marks that adjustment.
  bool adjusted = false;

  double total() const;  // base_value + sum(phi)
};

struct ExplainedSample {
  std::int64_t id = -1;
  std::vector<double> x;
  double score = 0.0;
  int yhat = 0;
  Attribution attribution;
};

struct FailedSample {
  std::int64_t id = -1;
  std::string reason;
};

// Samples routed by predicted class: A holds yhat = 0, B holds yhat = 1.
struct PartitionAB {
  std::vector<std::string> feature_names;
  std::vector<ExplainedSample> a;
  std::vector<ExplainedSample> b;
  // Every attribution, in test-set order.
  std::vector<Attribution> shapley_values;
  std::vector<FailedSample> failed;

  std::size_t explained() const { return a.size() + b.size(); }
  // A and B merged back into test-set order.
  std::vector<const ExplainedSample*> samples() const;
};

// Mean model score over background rows r of the hybrid that takes x on the
// features in `coalition` and r elsewhere.
double coalition_value(const TrainedModel& model, std::span<const double> x,
                       std::span<const std::size_t> coalition, const BackgroundSet& background);

// Exact Shapley values over the players `players` (all features when empty),
// enumerating every coalition. Features outside `players` stay fixed at x, so
// base_value + sum(phi) = score(x). Throws when there are more players than
// `cap`; use shapley_sampled then.
Attribution shapley_exact(const TrainedModel& model, std::span<const double> x,
                          std::span<const std::size_t> players, const BackgroundSet& background,
                          std::size_t cap = kExactFeatureCap);

// Permutation-sampling estimate of the same quantity.
Attribution shapley_sampled(const TrainedModel& model, std::span<const double> x,
                            std::span<const std::size_t> players, const BackgroundSet& background,
                            std::size_t permutations, std::uint64_t seed);

struct ExplainOptions {
  std::size_t exact_cap = kExactFeatureCap;
  std::size_t permutations = 2000;
  std::uint64_t seed = 1;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

// Exact when the model has at most `exact_cap` features, sampled otherwise.
Attribution explain_sample(const TrainedModel& model, std::span<const double> x,
                           const BackgroundSet& background, const ExplainOptions& options,
                           std::uint64_t sample_index = 0);

// Predicts and explains every test row, routing each into A or B.
PartitionAB partition_run(const TrainedModel& model, const data::Cohort& test,
                          const BackgroundSet& background, const ExplainOptions& options = {});

// ---- Plot data -------------------------------------------------------------

struct BeeswarmRow {
  std::string feature;
  std::int64_t sample_id = -1;
  double shap = 0.0;
  double value = 0.0;      // standardized feature value
  double raw_value = 0.0;  // value mapped back to feature units
};

struct BeeswarmTable {
  std::vector<std::string> feature_order;  // mean |shap| descending
  std::vector<double> mean_abs_shap;       // aligned with feature_order
  std::vector<BeeswarmRow> rows;
};

// `scaler` maps values back to raw units; without it raw_value = value.
BeeswarmTable summary_data(const PartitionAB& partition, const data::ScalerStats* scaler = nullptr);

struct DependenceRow {
  std::int64_t sample_id = -1;
  double value = 0.0;
  double shap = 0.0;
  double interaction_value = 0.0;
};

std::vector<DependenceRow> dependence_data(const PartitionAB& partition, std::string_view feature,
                                           std::string_view interaction);

struct ForceContribution {
  std::string feature;
  double value = 0.0;
  double phi = 0.0;
};

struct ForcePlot {
  std::int64_t sample_id = -1;
  double base_value = 0.0;
  double score = 0.0;  // base_value + sum(phi)
  int yhat = 0;
  bool exact = true;
  std::vector<ForceContribution> contributions;  // |phi| descending
};

ForcePlot force_data(const ExplainedSample& sample, std::span<const std::string> feature_names);

std::string beeswarm_csv(const BeeswarmTable& table);
std::string dependence_csv(std::span<const DependenceRow> rows, std::string_view feature,
                           std::string_view interaction);
std::string force_json(const ForcePlot& plot);

std::string partition_to_json(const PartitionAB& partition);
PartitionAB partition_from_json(std::string_view text);

}  // namespace mafus::explain

#endif  // MAFUS_EXPLAIN_H_
