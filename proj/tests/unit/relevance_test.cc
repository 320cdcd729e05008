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
#include "mafus/learners/boosting.h"
#include "mafus/learners/model.h"
#include "mafus/relevance.h"
#include "support/oracles.h"

namespace mafus::relevance {
namespace {

// Cohort with a copy of the label, a noise feature and a constant feature.
data::Cohort label_copy_cohort() {
  data::Cohort c = testing::blobs(120, 3, 0.0, 4);
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.4);
  for (std::size_t i = 0; i < c.size(); ++i) {
    c.labels[i] = coin(rng) ? 1 : 0;
    c.rows(i, 0) = c.labels[i];
    c.rows(i, 2) = 7.0;
  }
  return c;
}

RelevanceReport manual(std::vector<FeatureScore> scores) {
  RelevanceReport r;
  r.scores = std::move(scores);
  return r;
}

TEST_SUITE("relevance") {
  TEST_CASE("scores count splits per feature") {
    const auto c = label_copy_cohort();
    const auto booster = default_booster();
    const auto r = relevance_scores(c, booster);
    CHECK(r.score_of("f0") > 0.0);
    CHECK(r.score_of("f2") == 0.0);
    CHECK(r.ranking.front() == "f0");

    // Independent count over the fitted trees.
    const auto m = learners::fit(booster, c);
    std::vector<double> counts(3, 0.0);
    for (const auto& t : m.as<learners::BoostedTrees>()->trees()) {
      const auto s = t.split_counts(3);
      for (std::size_t j = 0; j < 3; ++j) counts[j] += static_cast<double>(s[j]);
    }
    CHECK(r.score_of("f0") == counts[0]);
    CHECK(r.score_of("f1") == counts[1]);
  }

  TEST_CASE("zero rounds score nothing") {
    auto booster = default_booster();
    booster.params["n_estimators"] = 0;
    const auto r = relevance_scores(label_copy_cohort(), booster);
    for (const auto& s : r.scores) CHECK(s.score == 0.0);
  }

  TEST_CASE("selection rule") {
    auto r = manual({{"A", 200}, {"B", 50}});
    CHECK(select_features(r, 105, {}) == std::vector<std::string>{"A"});
    CHECK(select_features(r, -1, {}) == std::vector<std::string>{"A", "B"});
    auto g = manual({{"Age", 300}, {"Gender", 3}, {"BMI", 105}});
    const std::vector<std::string> forced{"Gender"};
    CHECK(select_features(g, 105, forced) == std::vector<std::string>{"Age", "Gender"});
    CHECK(g.selected == std::vector<std::string>{"Age", "Gender"});
    auto empty = manual({{"A", 1}});
    try {
      select_features(empty, 105, {});
      FAIL("expected selection error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kSelection);
    }
  }

  TEST_CASE("report round trip") {
    auto r = relevance_scores(label_copy_cohort(), default_booster());
    select_features(r, 0, std::vector<std::string>{"f2"});
    const auto back = report_from_json(to_json(r));
    CHECK(back.selected == r.selected);
    CHECK(back.ranking == r.ranking);
    CHECK(to_json(back) == to_json(r));
  }
}

}  // namespace
}  // namespace mafus::relevance
