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

#include <random>

#include "doctest.h"
#include "mafus/common.h"
#include "mafus/metrics.h"
#include "support/oracles.h"

namespace mafus::metrics {
namespace {

TEST_SUITE("metrics") {
  TEST_CASE("confusion counts") {
    const std::vector<int> labels{1, 1, 0, 0}, preds{1, 0, 0, 1};
    CHECK(confusion(labels, preds) == ConfusionMatrix{1, 1, 1, 1});
    CHECK(confusion(labels, preds, 0) == ConfusionMatrix{1, 1, 1, 1});
    const auto perfect = confusion(labels, labels);
    CHECK(perfect.fp == 0);
    CHECK(perfect.fn == 0);
    CHECK_THROWS_AS(confusion(labels, std::vector<int>{1}), Error);
  }

  TEST_CASE("accuracy") {
    CHECK(accuracy({2, 3, 1, 4}) == 0.5);
    CHECK(accuracy({5, 5, 0, 0}) == 1.0);
    CHECK(accuracy({0, 0, 3, 3}) == 0.0);
    try {
      accuracy({});
      FAIL("expected undefined metric");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kUndefinedMetric);
    }
  }

  TEST_CASE("recall, precision, F1") {
    const ConfusionMatrix cm{3, 0, 0, 1};
    CHECK(recall(cm).value == 0.75);
    CHECK_FALSE(recall(cm).degenerate);
    const ConfusionMatrix even{3, 5, 1, 1};  // precision = recall = 0.75
    CHECK(f1(even).value == doctest::Approx(0.75).epsilon(1e-15));
    const auto p = precision({0, 4, 0, 2});
    CHECK(p.value == 0.0);
    CHECK(p.degenerate);
  }

  TEST_CASE("AUC examples") {
    const std::vector<double> s{0.1, 0.2, 0.8, 0.9};
    CHECK(auc(s, std::vector<int>{0, 0, 1, 1}) == 1.0);
    CHECK(auc(s, std::vector<int>{1, 1, 0, 0}) == 0.0);
    CHECK(auc(std::vector<double>{0.5, 0.5}, std::vector<int>{0, 1}) == 0.5);
    CHECK(auc(std::vector<double>{0.5, 0.5}, std::vector<int>{0, 1}, TieRule::kStrict) == 0.0);
    try {
      auc(s, std::vector<int>{1, 1, 1, 1});
      FAIL("expected undefined metric");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kUndefinedMetric);
    }
  }

  TEST_CASE("ROC endpoints and area") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> bit(0, 1);
    std::uniform_int_distribution<int> level(0, 9);
    std::vector<double> scores(60);
    std::vector<int> labels(60);
    for (std::size_t i = 0; i < 60; ++i) {
      labels[i] = i < 2 ? static_cast<int>(i) : bit(rng);
      scores[i] = level(rng) / 10.0;  // plenty of ties
    }
    const auto roc = roc_points(scores, labels);
    CHECK(roc.front().fpr == 0.0);
    CHECK(roc.front().tpr == 0.0);
    CHECK(roc.back().fpr == 1.0);
    CHECK(roc.back().tpr == 1.0);
    CHECK(trapezoid_area(roc) == doctest::Approx(testing::pair_auc(scores, labels)).epsilon(1e-12));
  }

  TEST_CASE("evaluate and report round trip") {
    const std::vector<int> labels{1, 1, 0, 0, 0};
    const std::vector<int> preds{1, 0, 0, 0, 1};
    const std::vector<double> scores{0.9, 0.4, 0.2, 0.1, 0.6};
    const auto r = evaluate(labels, preds, scores);
    CHECK(r.confusion == ConfusionMatrix{1, 2, 1, 1});
    CHECK(r.class1_errors() == 2);
    CHECK(r.yes.recall.value == 0.5);
    CHECK(r.no.recall.value == doctest::Approx(2.0 / 3.0));
    CHECK(r.accuracy == 0.6);
    CHECK(r.auc == doctest::Approx(5.0 / 6.0));
    const auto back = eval_report_from_json(to_json(r));
    CHECK(back.confusion == r.confusion);
    CHECK(back.auc == r.auc);
    CHECK(back.yes.f1.value == r.yes.f1.value);
  }
}

}  // namespace
}  // namespace mafus::metrics
