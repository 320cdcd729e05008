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

#include <cmath>
#include <random>

#include "doctest.h"
#include "mafus/learners/boosting.h"
#include "mafus/learners/config.h"
#include "mafus/learners/forest.h"
#include "mafus/learners/mlp.h"
#include "mafus/learners/model.h"
#include "mafus/learners/svm.h"
#include "support/oracles.h"

namespace mafus::learners {
namespace {

// Leaf-only tree returning `value`.
DecisionTree stump(double value) { return DecisionTree({TreeNode{.value = value}}); }

// XOR of the signs of two coordinates.
void xor_data(Matrix& x, std::vector<int>& y) {
  x = Matrix(4, 2);
  const double pts[4][2] = {{-1, -1}, {1, 1}, {-1, 1}, {1, -1}};
  y = {0, 0, 1, 1};
  for (int i = 0; i < 4; ++i) {
    x(i, 0) = pts[i][0];
    x(i, 1) = pts[i][1];
  }
}

double train_accuracy(const TrainedModel& m, const Matrix& x, std::span<const int> y) {
  const auto p = m.predict_all(x);
  double ok = 0;
  for (std::size_t i = 0; i < y.size(); ++i) ok += p[i] == y[i];
  return ok / static_cast<double>(y.size());
}

TEST_SUITE("learners") {
  TEST_CASE("one split separates 1-D data") {
    Matrix x(40, 1);
    std::vector<int> y(40);
    for (int i = 0; i < 40; ++i) {
      x(i, 0) = i - 19.5;
      y[i] = x(i, 0) > 0 ? 1 : 0;
    }
    const auto m = fit(make_config(Algorithm::kRf, {{"n_estimators", 1}, {"max_depth", 1},
                                                    {"bootstrap", "false"}}),
                       x, y);
    CHECK(train_accuracy(m, x, y) == 1.0);
    const auto* rf = m.as<RandomForest>();
    REQUIRE(rf);
    CHECK(rf->trees()[0].max_depth() == 1);
  }

  TEST_CASE("single-class labels give a degenerate model") {
    Matrix x(5, 2, 0.3);
    const std::vector<int> y(5, 1);
    for (auto alg : kAllAlgorithms) {
      const auto m = fit(make_config(alg, {}), x, y);
      CHECK(m.degenerate());
      CHECK(m.predict(std::vector<double>{100.0, -4.0}) == 1);
    }
  }

  TEST_CASE("non-finite features and wrong dimension are contract errors") {
    Matrix x(4, 1);
    x(2, 0) = std::nan("");
    std::vector<int> y{0, 1, 0, 1};
    CHECK_THROWS_AS(fit(make_config(Algorithm::kSvm, {}), x, y), Error);
    const TrainedModel m(std::make_shared<ConstantClassifier>(0), make_config(Algorithm::kSvm, {}), 2);
    try {
      m.predict(std::vector<double>{1.0});
      FAIL("expected contract error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kContract);
    }
  }

  TEST_CASE("a score exactly at the threshold predicts 1") {
    const TrainedModel m(std::make_shared<SvmModel>(KernelType::kLinear, 1.0, Matrix(1, 1, 1.0),
                                                    std::vector<double>{1.0}, 0.0),
                         make_config(Algorithm::kSvm, {}), 1);
    CHECK(m.score(std::vector<double>{0.0}) == 0.0);
    CHECK(m.predict(std::vector<double>{0.0}) == 1);
  }

  TEST_CASE("fitted models reproduce separable training labels") {
    const auto c = testing::blobs(80, 2, 6.0, 3);
    for (auto alg : kAllAlgorithms) {
      const auto m = fit(make_config(alg, {}), c);
      INFO(algorithm_name(alg));
      CHECK(train_accuracy(m, c.rows, c.labels) == 1.0);
    }
  }

  TEST_CASE("forest votes and empty booster") {
    const RandomForest all({stump(1), stump(0.9), stump(0.5)});
    CHECK(all.score(std::vector<double>{0.0}) == 1.0);
    const RandomForest three({stump(1), stump(0.7), stump(0.6), stump(0.2)});
    CHECK(three.score(std::vector<double>{0.0}) == 0.75);
    const BoostedTrees empty({}, 0.0, "xgb");
    CHECK(empty.score(std::vector<double>{1.0, 2.0}) == 0.5);
  }

  TEST_CASE("XOR needs the rbf kernel") {
    Matrix x;
    std::vector<int> y;
    xor_data(x, y);
    const auto lin = fit(make_config(Algorithm::kSvm, {{"kernel", "linear"}}), x, y);
    CHECK(train_accuracy(lin, x, y) <= 0.75);
    const auto rbf = fit(make_config(Algorithm::kSvm, {{"kernel", "rbf"}, {"gamma", 1.0}, {"C", 10.0}}), x, y);
    CHECK(train_accuracy(rbf, x, y) == 1.0);
  }

  TEST_CASE("SVM dual stays feasible") {
    const auto c = testing::blobs(60, 3, 1.0, 9);
    SvmSolution sol;
    SvmParams p;
    p.c = 2.0;
    fit_svm(p, c.rows, c.labels, &sol);
    CHECK(sol.converged);
    double balance = 0.0;
    for (std::size_t i = 0; i < sol.alpha.size(); ++i) {
      CHECK(sol.alpha[i] >= -1e-12);
      CHECK(sol.alpha[i] <= sol.upper[i] + 1e-12);
      balance += sol.alpha[i] * sol.signed_labels[i];
    }
    CHECK(std::abs(balance) < 1e-9);
  }

  TEST_CASE("identical fits give identical predictions") {
    const auto c = testing::blobs(100, 4, 1.0, 5);
    const auto probe = testing::blobs(30, 4, 0.5, 6);
    for (auto alg : kAllAlgorithms) {
      const auto cfg = make_config(alg, {}, 11);
      CHECK(fit(cfg, c).score_all(probe.rows) == fit(cfg, c).score_all(probe.rows));
    }
  }

  TEST_CASE("model JSON round trip preserves scores") {
    const auto c = testing::blobs(100, 4, 1.0, 5);
    const auto probe = testing::blobs(30, 4, 0.5, 6);
    for (auto alg : kAllAlgorithms) {
      const auto m = fit(make_config(alg, {}), c);
      const auto back = TrainedModel::from_json(m.to_json());
      const auto a = m.score_all(probe.rows), b = back.score_all(probe.rows);
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
      CHECK(back.config() == m.config());
    }
  }

  TEST_CASE("config validation") {
    CHECK_THROWS_AS(validate(make_config(Algorithm::kSvm, {{"depth", 3}})), Error);
    CHECK_THROWS_AS(validate(make_config(Algorithm::kSvm, {{"kernel", "poly"}})), Error);
    const auto c = make_config(Algorithm::kRf, {{"seed", 7}, {"class_weight", "balanced"}});
    CHECK(c.seed == 7);
    CHECK(c.class_weighting == ClassWeighting::kBalanced);
    CHECK(c.params.empty());
    const auto w = class_weights(std::vector<int>{1, 0, 0, 0}, ClassWeighting::kBalanced);
    CHECK(w[0] == 2.0);
    CHECK(w[1] == doctest::Approx(4.0 / 6.0));
  }

  TEST_CASE("max_features aliases") {
    const auto p = [](const char* v) {
      return ForestParams::from_config(make_config(Algorithm::kRf, {{"max_features", v}}), 10).tree.max_features;
    };
    CHECK(p("auto") == 3);
    CHECK(p("sqrt") == 3);
    CHECK(p("log2") == 3);
    CHECK(ForestParams::from_config(make_config(Algorithm::kRf, {{"max_features", nullptr}}), 10).tree.max_features == 10);
  }
}

}  // namespace
}  // namespace mafus::learners
