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

#include "mafus/metrics.h"

#include <algorithm>
#include <cstdint>
#include <numeric>

#include "json.hpp"
#include "mafus/common.h"

namespace mafus::metrics {

namespace {

using nlohmann::json;

Metric ratio(std::size_t num, std::size_t den) {
  if (den == 0) return {0.0, true};
  return {static_cast<double>(num) / static_cast<double>(den), false};
}

void check_binary_pair(std::span<const double> scores, std::span<const int> labels,
                       std::size_t* pos, std::size_t* neg) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kContract, "scores and labels differ in length");
  }
  *pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  *neg = labels.size() - *pos;
  if (*pos == 0 || *neg == 0) {
    throw Error(ErrorCode::kUndefinedMetric, "AUC needs both classes present");
  }
}

// Sample order by descending score; stable so equal scores keep input order.
std::vector<std::size_t> descending_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

json metric_json(const Metric& m) { return {{"value", m.value}, {"degenerate", m.degenerate}}; }

Metric metric_from(const json& j) {
  return {j.at("value").get<double>(), j.at("degenerate").get<bool>()};
}

}  // namespace

ConfusionMatrix confusion(std::span<const int> labels, std::span<const int> predictions,
                          int positive) {
  if (labels.size() != predictions.size()) {
    throw Error(ErrorCode::kContract, "labels and predictions differ in length");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool actual = labels[i] == positive;
    const bool predicted = predictions[i] == positive;
    if (actual && predicted) ++cm.tp;
    else if (actual) ++cm.fn;
    else if (predicted) ++cm.fp;
    else ++cm.tn;
  }
  return cm;
}

double accuracy(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorCode::kUndefinedMetric, "accuracy of zero samples");
  return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

Metric recall(const ConfusionMatrix& cm) { return ratio(cm.tp, cm.tp + cm.fn); }

Metric precision(const ConfusionMatrix& cm) { return ratio(cm.tp, cm.tp + cm.fp); }

Metric f1(const ConfusionMatrix& cm) {
  const Metric p = precision(cm);
  const Metric r = recall(cm);
  if (p.degenerate || r.degenerate) return {0.0, true};
  if (p.value + r.value == 0.0) return {0.0, false};
  return {2.0 * p.value * r.value / (p.value + r.value), false};
}

double auc(std::span<const double> scores, std::span<const int> labels, TieRule ties) {
  std::size_t pos = 0;
  std::size_t neg = 0;
  check_binary_pair(scores, labels, &pos, &neg);

  // Walk scores ascending in tie groups. Twice the credited pair count stays
  // integral, so the result is a single correctly rounded division.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::uint64_t twice_credit = 0;
  std::uint64_t neg_below = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    std::uint64_t group_pos = 0;
    std::uint64_t group_neg = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] == 1 ? group_pos : group_neg) += 1;
      ++j;
    }
    twice_credit += group_pos * 2 * neg_below;
    if (ties == TieRule::kHalfCredit) twice_credit += group_pos * group_neg;
    neg_below += group_neg;
    i = j;
  }
  return static_cast<double>(twice_credit) /
         (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

std::vector<RocPoint> roc_points(std::span<const double> scores, std::span<const int> labels) {
  std::size_t pos = 0;
  std::size_t neg = 0;
  check_binary_pair(scores, labels, &pos, &neg);
  const auto order = descending_order(scores);
  std::vector<RocPoint> points{{0.0, 0.0}};
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    while (i < order.size() && scores[order[i]] == threshold) {
      (labels[order[i]] == 1 ? tp : fp) += 1;
      ++i;
    }
    points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                      static_cast<double>(tp) / static_cast<double>(pos)});
  }
  return points;
}

double trapezoid_area(std::span<const RocPoint> points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
  }
  return area;
}

EvalReport evaluate(std::span<const int> labels, std::span<const int> predictions,
                    std::span<const double> scores) {
  EvalReport report;
  report.confusion = confusion(labels, predictions, 1);
  const ConfusionMatrix swapped = confusion(labels, predictions, 0);
  report.yes = {precision(report.confusion), recall(report.confusion), f1(report.confusion)};
  report.no = {precision(swapped), recall(swapped), f1(swapped)};
  report.accuracy = accuracy(report.confusion);
  try {
    report.auc = auc(scores, labels);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUndefinedMetric) throw;
    report.auc = 0.0;
    report.auc_defined = false;
  }
  return report;
}

std::string to_json(const EvalReport& report) {
  json doc;
  doc["precision"] = {{"No", metric_json(report.no.precision)},
                      {"Yes", metric_json(report.yes.precision)}};
  doc["recall"] = {{"No", metric_json(report.no.recall)}, {"Yes", metric_json(report.yes.recall)}};
  doc["f1"] = {{"No", metric_json(report.no.f1)}, {"Yes", metric_json(report.yes.f1)}};
  doc["accuracy"] = report.accuracy;
  doc["auc"] = report.auc;
  doc["auc_defined"] = report.auc_defined;
  doc["confusion"] = {{"tp", report.confusion.tp},
                      {"tn", report.confusion.tn},
                      {"fp", report.confusion.fp},
                      {"fn", report.confusion.fn}};
  return doc.dump(2);
}

EvalReport eval_report_from_json(std::string_view text) {
  const json doc = json::parse(text);
  EvalReport r;
  r.no = {metric_from(doc.at("precision").at("No")), metric_from(doc.at("recall").at("No")),
          metric_from(doc.at("f1").at("No"))};
  r.yes = {metric_from(doc.at("precision").at("Yes")), metric_from(doc.at("recall").at("Yes")),
           metric_from(doc.at("f1").at("Yes"))};
  r.accuracy = doc.at("accuracy").get<double>();
  r.auc = doc.at("auc").get<double>();
  r.auc_defined = doc.value("auc_defined", true);
  const auto& c = doc.at("confusion");
  r.confusion = {c.at("tp").get<std::size_t>(), c.at("tn").get<std::size_t>(),
                 c.at("fp").get<std::size_t>(), c.at("fn").get<std::size_t>()};
  return r;
}

}  // namespace mafus::metrics
