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

#ifndef MAFUS_METRICS_H_
#define MAFUS_METRICS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mafus::metrics {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// A ratio metric. Zero denominators yield value 0 with `degenerate` set.
struct Metric {
  double value = 0.0;
  bool degenerate = false;
};

ConfusionMatrix confusion(std::span<const int> labels, std::span<const int> predictions,
                          int positive = 1);

double accuracy(const ConfusionMatrix& cm);
Metric recall(const ConfusionMatrix& cm);
Metric precision(const ConfusionMatrix& cm);
Metric f1(const ConfusionMatrix& cm);

enum class TieRule {
  kHalfCredit,  // Mann-Whitney: tied (negative, positive) pairs count 0.5
  kStrict,      // literal indicator: only score(neg) < score(pos) counts
};

// Fraction of (negative, positive) pairs ranked correctly. Class 1 is the
// positive class.
double auc(std::span<const double> scores, std::span<const int> labels,
           TieRule ties = TieRule::kHalfCredit);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

// Staircase ROC over every distinct score threshold, from (0,0) to (1,1).
std::vector<RocPoint> roc_points(std::span<const double> scores, std::span<const int> labels);
double trapezoid_area(std::span<const RocPoint> points);

struct ClassMetrics {
  Metric precision;
  Metric recall;
  Metric f1;
};

// One Table-2 style row group: per-class precision/recall/F1 plus accuracy
// and AUC, with confusion counts taken with class 1 as positive.
struct EvalReport {
  ClassMetrics no;   // class 0, "Mortality (No)"
  ClassMetrics yes;  // class 1, "Mortality (Yes)"
  double accuracy = 0.0;
  double auc = 0.0;
  bool auc_defined = true;
  ConfusionMatrix confusion;

  // Class-1 misclassifications (FN + FP with class 1 positive).
  std::size_t class1_errors() const { return confusion.fn + confusion.fp; }
};

EvalReport evaluate(std::span<const int> labels, std::span<const int> predictions,
                    std::span<const double> scores);

std::string to_json(const EvalReport& report);
EvalReport eval_report_from_json(std::string_view text);

}  // namespace mafus::metrics

#endif  // MAFUS_METRICS_H_
