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

#include "mafus/relevance.h"

#include <algorithm>
#include <numeric>

#include "json.hpp"
#include "mafus/learners/boosting.h"
#include "mafus/learners/model.h"

namespace mafus::relevance {

namespace {
using nlohmann::json;
}

double RelevanceReport::score_of(std::string_view feature) const {
  for (const auto& s : scores) {
    if (s.feature == feature) return s.score;
  }
  throw Error(ErrorCode::kContract, "no relevance score for '" + std::string(feature) + "'");
}

learners::ModelConfig default_booster() {
  learners::ModelConfig c;
  c.algorithm = learners::Algorithm::kXgb;
  c.params = {{"n_estimators", 100}, {"max_depth", 6}, {"learning_rate", 0.1}};
  c.seed = 1;
  return c;
}

RelevanceReport relevance_scores(const data::Cohort& train, const learners::ModelConfig& booster,
                                 ImportanceType importance) {
  if (booster.algorithm != learners::Algorithm::kXgb) {
    throw Error(ErrorCode::kConfig, "relevance scoring needs an xgb booster config");
  }
  if (train.size() == 0) throw Error(ErrorCode::kContract, "relevance scoring on empty cohort");
  const auto model = learners::fit(booster, train);
  const std::size_t d = train.dims();
  std::vector<double> totals(d, 0.0);
  if (const auto* boosted = model.as<learners::BoostedTrees>()) {
    for (const auto& tree : boosted->trees()) {
      if (importance == ImportanceType::kSplitCount) {
        const auto counts = tree.split_counts(d);
        for (std::size_t j = 0; j < d; ++j) totals[j] += static_cast<double>(counts[j]);
      } else {
        const auto gains = tree.split_gains(d);
        for (std::size_t j = 0; j < d; ++j) totals[j] += gains[j];
      }
    }
  }
  RelevanceReport report;
  report.importance = importance;
  const auto names = train.feature_names();
  for (std::size_t j = 0; j < d; ++j) report.scores.push_back({names[j], totals[j]});
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return totals[a] > totals[b]; });
  for (std::size_t j : order) report.ranking.push_back(names[j]);
  return report;
}

std::vector<std::string> select_features(RelevanceReport& report, double threshold,
                                         std::span<const std::string> forced) {
  for (const auto& f : forced) {
    const bool known = std::any_of(report.scores.begin(), report.scores.end(),
                                   [&](const FeatureScore& s) { return s.feature == f; });
    if (!known) throw Error(ErrorCode::kSelection, "forced feature '" + f + "' is not in the schema");
  }
  std::vector<std::string> selected;
  for (const auto& s : report.scores) {
    const bool is_forced = std::find(forced.begin(), forced.end(), s.feature) != forced.end();
    if (s.score > threshold || is_forced) selected.push_back(s.feature);
  }
  if (selected.empty()) {
    throw Error(ErrorCode::kSelection, "no feature scores above threshold " + format_double(threshold));
  }
  report.threshold = threshold;
  report.forced.assign(forced.begin(), forced.end());
  report.selected = selected;
  return selected;
}

std::vector<std::string> cohort_reference_selection() {
  return {"Age", "HDL-C", "HOMA", "BMI", "Weight", "LDL-C", "Blood Glucose", "TC", "Triglycerides",
          "Gender"};
}

std::string to_json(const RelevanceReport& report) {
  json doc;
  doc["importance"] = report.importance == ImportanceType::kSplitCount ? "split_count" : "total_gain";
  doc["threshold"] = report.threshold;
  doc["forced"] = report.forced;
  doc["selected"] = report.selected;
  doc["scores"] = json::array();
  for (const auto& s : report.scores) doc["scores"].push_back({{"feature", s.feature}, {"score", s.score}});
  doc["ranking"] = json::array();
  for (const auto& name : report.ranking) {
    doc["ranking"].push_back({{"feature", name}, {"score", report.score_of(name)}});
  }
  return doc.dump(2);
}

RelevanceReport report_from_json(std::string_view text) {
  const json doc = json::parse(text);
  RelevanceReport r;
  r.importance = doc.at("importance").get<std::string>() == "total_gain" ? ImportanceType::kTotalGain
                                                                         : ImportanceType::kSplitCount;
  r.threshold = doc.at("threshold").get<double>();
  r.forced = doc.at("forced").get<std::vector<std::string>>();
  r.selected = doc.at("selected").get<std::vector<std::string>>();
  for (const auto& e : doc.at("scores")) {
    r.scores.push_back({e.at("feature").get<std::string>(), e.at("score").get<double>()});
  }
  for (const auto& e : doc.at("ranking")) r.ranking.push_back(e.at("feature").get<std::string>());
  return r;
}

}  // namespace mafus::relevance
