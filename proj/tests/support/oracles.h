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

// Independent reference implementations used to check the library.

#ifndef MAFUS_TESTS_SUPPORT_ORACLES_H_
#define MAFUS_TESTS_SUPPORT_ORACLES_H_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "mafus/common.h"
#include "mafus/data.h"
#include "mafus/explain.h"
#include "mafus/learners/model.h"

namespace mafus::testing {

// v(F) by direct row-by-row evaluation: background row with x on `present`.
inline double brute_value(const learners::TrainedModel& model, std::span<const double> x,
                          const std::vector<bool>& present, const Matrix& background) {
  double sum = 0.0;
  std::vector<double> row(x.size());
  for (std::size_t r = 0; r < background.rows(); ++r) {
    for (std::size_t j = 0; j < x.size(); ++j) row[j] = present[j] ? x[j] : background(r, j);
    sum += model.score(row);
  }
  return sum / static_cast<double>(background.rows());
}

// Shapley values as the average marginal contribution over all d! feature
// orderings.
inline std::vector<double> permutation_shapley(const learners::TrainedModel& model,
                                               std::span<const double> x, const Matrix& background) {
  const std::size_t d = x.size();
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> phi(d, 0.0);
  double count = 0.0;
  do {
    std::vector<bool> present(d, false);
    double prev = brute_value(model, x, present, background);
    for (std::size_t j : order) {
      present[j] = true;
      const double cur = brute_value(model, x, present, background);
      phi[j] += cur - prev;
      prev = cur;
    }
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& p : phi) p /= count;
  return phi;
}

struct Counts {
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
};

inline Counts count_outcomes(std::span<const int> labels, std::span<const int> preds) {
  Counts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1 && preds[i] == 1) ++c.tp;
    if (labels[i] == 0 && preds[i] == 0) ++c.tn;
    if (labels[i] == 0 && preds[i] == 1) ++c.fp;
    if (labels[i] == 1 && preds[i] == 0) ++c.fn;
  }
  return c;
}

// AUC by comparing every (negative, positive) pair; ties earn one half.
inline double pair_auc(std::span<const double> scores, std::span<const int> labels) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0) continue;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] != 1) continue;
      pairs += 1.0;
      if (scores[i] < scores[j]) wins += 1.0;
      if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

// Two Gaussian blobs in d dimensions, shifted apart by `gap` on every axis.
inline data::Cohort blobs(std::size_t n, std::size_t d, double gap, std::uint64_t seed,
                          double prevalence = 0.5) {
  std::vector<data::Column> columns;
  for (std::size_t j = 0; j < d; ++j) columns.push_back({"f" + std::to_string(j), data::ColumnKind::kContinuous, {}});
  columns.push_back({"y", data::ColumnKind::kLabel, {}});
  data::Cohort c;
  c.schema = data::FeatureSchema(columns);
  c.rows = Matrix(n, d);
  c.labels.resize(n);
  c.row_ids.resize(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto positives = static_cast<std::size_t>(prevalence * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    c.labels[i] = i < positives ? 1 : 0;
    c.row_ids[i] = static_cast<std::int64_t>(i);
    for (std::size_t j = 0; j < d; ++j) c.rows(i, j) = normal(rng) + (c.labels[i] ? gap : 0.0);
  }
  return c;
}

}  // namespace mafus::testing

#endif  // MAFUS_TESTS_SUPPORT_ORACLES_H_
