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

#ifndef MAFUS_RELEVANCE_H_
#define MAFUS_RELEVANCE_H_

#include <span>
#include <string>
#include <vector>

#include "mafus/data.h"
#include "mafus/learners/config.h"

namespace mafus::relevance {

enum class ImportanceType {
  kSplitCount,  // number of splits using the feature ("F score")
  kTotalGain,   // summed split gain
};

struct FeatureScore {
  std::string feature;
  double score = 0.0;
};

struct RelevanceReport {
  std::vector<FeatureScore> scores;   // schema order
  std::vector<std::string> ranking;   // descending score, ties in schema order
  double threshold = 105.0;
  std::vector<std::string> forced;
  std::vector<std::string> selected;  // schema order
  ImportanceType importance = ImportanceType::kSplitCount;

  double score_of(std::string_view feature) const;
};

// Default booster used to score features: 100 rounds, depth 6, lr 0.1.
learners::ModelConfig default_booster();

// Fits the (xgb) booster on `train` and scores every feature by its use in
// the ensemble's splits.
RelevanceReport relevance_scores(const data::Cohort& train, const learners::ModelConfig& booster,
                                 ImportanceType importance = ImportanceType::kSplitCount);

// {score > threshold} union forced, in schema order. Fills the report's
// threshold/forced/selected fields and returns the selection.
std::vector<std::string> select_features(RelevanceReport& report, double threshold,
                                         std::span<const std::string> forced);

// Features the selector reproduces for the mortality cohort: nine ranked
// features plus Gender.
std::vector<std::string> cohort_reference_selection();

std::string to_json(const RelevanceReport& report);
RelevanceReport report_from_json(std::string_view text);

}  // namespace mafus::relevance

#endif  // MAFUS_RELEVANCE_H_
