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

#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "mafus/artifact.h"
#include "mafus/pipeline.h"
#include "mafus/synth.h"
#include "support/runs.h"

namespace mafus::pipeline {
namespace {

namespace fs = std::filesystem;

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

std::string last_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line, last;
  while (std::getline(in, line))
    if (!line.empty()) last = line;
  return last;
}

TEST_SUITE("pipeline") {
  TEST_CASE("config parsing") {
    const auto c = PipelineConfig::from_json(testing::small_config_json());
    CHECK(c.grids.size() == 2);
    CHECK(c.grids[0].grid.algorithm == learners::Algorithm::kSvm);
    CHECK(c.cv_folds == 3);
    CHECK(c.forced_features == std::vector<std::string>{"Gender"});

    const auto d = PipelineConfig::from_json("{}");
    CHECK(d.grids.size() == 5);
    CHECK(d.seed == 1);
    CHECK(d.split_ratio == 0.8);
    CHECK(d.relevance_threshold == 105.0);

    for (const char* bad : {R"({"sed": 1})", R"({"split_ratio": 1.5})", R"({"grids": {"svm": "missing.json"}})",
                            R"({"cv_folds": 1})", "[1, 2]", "{"}) {
      try {
        PipelineConfig::from_json(bad);
        FAIL("accepted " << bad);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::kConfig);
      }
    }
    const auto shipped = PipelineConfig::load(fs::path(MAFUS_CONFIG_DIR) / "runs" / "e2e_synthetic.json");
    CHECK(shipped.synthetic.n == 1000);
    CHECK(shipped.grids.size() == 5);
  }

  TEST_CASE("model choice prefers fewest class-1 errors") {
    // svm: fn 5, fp 0. lgbm: fn 0, fp 6 with the higher F1.
    std::vector<int> labels(100, 0);
    for (int i = 0; i < 16; ++i) labels[i] = 1;
    std::vector<int> svm = labels, lgbm = labels;
    for (int i = 0; i < 5; ++i) svm[i] = 0;
    for (int i = 16; i < 22; ++i) lgbm[i] = 1;
    std::vector<double> scores(100, 0.0);
    for (int i = 0; i < 16; ++i) scores[i] = 1.0;
    std::vector<ModelEntry> e(2);
    e[0].algorithm = learners::Algorithm::kSvm;
    e[0].test = metrics::evaluate(labels, svm, scores);
    e[1].algorithm = learners::Algorithm::kLgbm;
    e[1].test = metrics::evaluate(labels, lgbm, scores);
    REQUIRE(e[1].test.yes.f1.value > e[0].test.yes.f1.value);
    CHECK(choose_model(e) == 0);
    std::swap(e[0], e[1]);
    CHECK(choose_model(e) == 1);

    // Equal errors: F1 decides, then AUC, then position.
    std::vector<ModelEntry> t(2);
    t[0].test = metrics::evaluate(labels, svm, scores);
    t[1].test = t[0].test;
    CHECK(choose_model(t) == 0);
    t[1].test.auc = 1.5;
    CHECK(choose_model(t) == 1);
    CHECK_THROWS_AS(choose_model(std::vector<ModelEntry>{}), Error);
  }

  TEST_CASE("synthetic exact-count prevalence") {
    synth::SynthSpec s;
    s.exact_count = true;
    CHECK(synth::gen_synthetic(s).count_label(1) == 200);
    s.exact_count = false;
    const auto n1 = synth::gen_synthetic(s).count_label(1);
    CHECK(n1 > 150);
    CHECK(n1 < 250);
    s.prevalence = 1.0;
    CHECK_THROWS_AS(synth::gen_synthetic(s), Error);
  }

  TEST_CASE("run writes the output tree and is deterministic") {
    const auto dir = testing::scratch_dir("pipeline");
    const auto r1 = testing::run_small(dir / "a");
    const auto r2 = testing::run_small(dir / "b");
    CHECK(r1.train_size == 160);
    CHECK(r1.test_size == 40);
    CHECK(r1.partition.explained() == 40);
    CHECK(r1.comparison.entries.size() == 2);
    CHECK_FALSE(fs::exists(dir / "a.tmp"));

    std::set<std::string> names;
    for (const auto& f : fs::recursive_directory_iterator(dir / "a")) {
      if (!f.is_regular_file()) continue;
      const auto rel = fs::relative(f.path(), dir / "a");
      names.insert(rel.generic_string());
      std::ifstream x(f.path(), std::ios::binary), y(dir / "b" / rel, std::ios::binary);
      const std::string xa((std::istreambuf_iterator<char>(x)), {}), yb((std::istreambuf_iterator<char>(y)), {});
      CHECK_MESSAGE(xa == yb, rel.string());
    }
    for (const char* f : {"manifest.json", "model.json", "comparison.json", "partition.json", "relevance.json",
                          "scaler.json", "split.json", "cohort_summary.json", "cv/svm.json", "eval/xgb.json",
                          "predictions/svm.csv", "plots/beeswarm.csv", "plots/force.json",
                          "plots/roc_svm.csv", "plots/confusion_xgb.csv", "plots/relevance_bar.csv"}) {
      CHECK_MESSAGE(names.contains(f), f);
    }

    const auto plots = dir / "a" / "plots";
    CHECK(line_count(plots / "relevance_bar.csv") == r1.relevance.selected.size() + 1);
    CHECK(line_count(plots / "relevance_excluded.csv") == 24 - r1.relevance.selected.size() + 1);
    CHECK(first_line(plots / "roc_svm.csv") == "fpr,tpr");
    std::ifstream roc(plots / "roc_svm.csv");
    std::string header, row;
    std::getline(roc, header);
    std::getline(roc, row);
    CHECK(row == "0,0");
    CHECK(last_line(plots / "roc_svm.csv") == "1,1");
    std::size_t dependence = 0;
    for (const auto& f : fs::directory_iterator(plots))
      dependence += f.path().filename().string().starts_with("dependence_");
    CHECK(dependence == r1.relevance.selected.size() - 1);

    // The stored artifact scores like the in-memory model.
    const auto art = ModelArtifact::load(dir / "a" / "model.json");
    const auto back = ModelArtifact::from_json(art.to_json());
    CHECK(back.to_json() == art.to_json());
    for (const auto* s : r1.partition.samples()) {
      CHECK(std::abs(art.model.score(s->x) - s->score) <= 1e-12);
    }
  }

  TEST_CASE("svm-only config compares one algorithm") {
    const auto dir = testing::scratch_dir("svm_only");
    const auto r = testing::run_small(dir / "out", 200, false);
    CHECK(r.comparison.entries.size() == 1);
    CHECK(r.comparison.entries[0].algorithm == learners::Algorithm::kSvm);
  }

  TEST_CASE("failures name the stage and leave no output") {
    const auto dir = testing::scratch_dir("fail");
    fs::create_directories(dir);
    {
      std::ofstream(dir / "bad.csv") << "GOT,Status\n1,1\n";
    }
    auto config = PipelineConfig::from_json(testing::small_config_json());
    config.input = dir / "bad.csv";
    config.output = dir / "out";
    try {
      run_pipeline(config);
      FAIL("expected a stage error");
    } catch (const StageError& e) {
      CHECK(e.stage() == "load");
      CHECK(e.code() == ErrorCode::kSchema);
    }
    CHECK_FALSE(fs::exists(dir / "out"));
    CHECK_FALSE(fs::exists(dir / "out.tmp"));
  }
}

}  // namespace
}  // namespace mafus::pipeline
