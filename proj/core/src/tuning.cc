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

#include "mafus/tuning.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "mafus/learners/model.h"

namespace mafus::tuning {

namespace {

using nlohmann::json;

json value_json(const ParamValue& v) {
  if (v.is_none()) return nullptr;
  if (v.is_int()) return v.as_int();
  if (v.is_real()) return v.as_real();
  return v.as_text();
}

ParamValue value_from(const json& j, const std::string& type) {
  if (j.is_null()) return ParamValue();
  if (j.is_string()) return ParamValue(j.get<std::string>());
  if (j.is_number_integer() && type != "Float") return ParamValue(j.get<std::int64_t>());
  if (j.is_number()) return ParamValue(j.get<double>());
  throw Error(ErrorCode::kConfig, "grid value " + j.dump() + " is not None, a number or text");
}

GridAxis axis(std::string name, std::string type, std::vector<ParamValue> values) {
  return {std::move(name), std::move(type), std::move(values)};
}

json report_json(const metrics::EvalReport& r) { return json::parse(metrics::to_json(r)); }

}  // namespace

std::size_t HyperGrid::size() const {
  if (axes.empty()) return 0;
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return n;
}

Hyperparameters HyperGrid::point(std::size_t index) const {
  if (index >= size()) throw Error(ErrorCode::kContract, "grid point index out of range");
  Hyperparameters out;
  for (std::size_t a = axes.size(); a-- > 0;) {
    const auto& values = axes[a].values;
    out[axes[a].name] = values[index % values.size()];
    index /= values.size();
  }
  return out;
}

HyperGrid HyperGrid::full_default(Algorithm algorithm) {
  HyperGrid g;
  g.algorithm = algorithm;
  switch (algorithm) {
    case Algorithm::kMlp:
      g.axes = {axis("seed", "Integer", {1}),
                axis("hidden_layer_sizes", "Integer", {128, 256, 512}),
                axis("activation", "String", {"tanh", "relu"}),
                axis("solver", "String", {"sgd", "adam", "lbfgs"}),
                axis("alpha", "Float", {0.0001, 0.001, 0.01, 0.1, 0.9}),
                axis("learning_rate", "String", {"constant", "adaptive"})};
      break;
    case Algorithm::kRf: {
      std::vector<ParamValue> depths;
      for (int d = 80; d <= 150; d += 10) depths.emplace_back(d);
      depths.emplace_back();
      g.axes = {axis("seed", "Integer", {1}),
                axis("n_estimators", "Integer", {100, 200, 300, 400, 500}),
                axis("max_features", "String", {"auto", "sqrt", "log2"}),
                axis("max_depth", "Integer", depths),
                axis("criterion", "String", {"gini", "entropy"}),
                axis("class_weight", "String", {"balanced"})};
      break;
    }
    case Algorithm::kSvm:
      g.axes = {axis("seed", "Integer", {1}),
                axis("class_weight", "String", {"balanced"}),
                axis("kernel", "String", {"rbf", "linear"}),
                axis("gamma", "Float", {1.0, 0.1, 0.001, 0.0001})};
      break;
    case Algorithm::kXgb: {
      std::vector<ParamValue> depths;
      for (int d = 3; d < 21; d += 3) depths.emplace_back(d);
      std::vector<ParamValue> colsample;
      for (int i = 3; i < 10; ++i) colsample.emplace_back(i / 10.0);
      g.axes = {axis("seed", "Integer", {1}),
                axis("gamma", "Float", {1.0, 0.1, 0.01, 0.001, 0.0001}),
                axis("learning_rate", "Float", {0.0001, 0.001, 0.01, 0.1, 1.0}),
                axis("max_depth", "Integer", depths),
                axis("colsample_bytree", "Float", colsample),
                axis("reg_alpha", "Float", {1e-5, 1e-2, 0.1, 1.0, 10.0, 100.0})};
      break;
    }
    case Algorithm::kLgbm:
      g.axes = {axis("seed", "Integer", {1}),
                axis("learning_rate", "Float", {0.1, 0.05}),
                axis("num_leaves", "Integer", {3, 10, 31, 50, 100, 200}),
                axis("reg_alpha", "Float", {ParamValue(), 0.01, 0.05, 0.1}),
                axis("colsample_bytree", "Float", {0.6, 0.8, 1.0}),
                axis("max_depth", "Integer", {-1, 3, 5, 8, 10}),
                axis("reg_lambda", "Float", {ParamValue(), 0.01, 0.02, 0.03}),
                axis("n_estimators", "Integer", {50, 100, 300})};
      break;
  }
  return g;
}

HyperGrid HyperGrid::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("grid document: ") + e.what());
  }
  HyperGrid g;
  g.algorithm = learners::parse_algorithm(doc.at("algorithm").get<std::string>());
  for (const auto& a : doc.at("axes")) {
    GridAxis ax;
    ax.name = a.at("name").get<std::string>();
    ax.type = a.value("type", "");
    for (const auto& v : a.at("values")) ax.values.push_back(value_from(v, ax.type));
    if (ax.values.empty()) throw Error(ErrorCode::kConfig, "grid axis '" + ax.name + "' is empty");
    g.axes.push_back(std::move(ax));
  }
  if (g.axes.empty()) throw Error(ErrorCode::kConfig, "grid has no axes");
  return g;
}

HyperGrid HyperGrid::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfig, "cannot open grid file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string HyperGrid::to_json() const {
  json doc;
  doc["algorithm"] = std::string(learners::algorithm_name(algorithm));
  doc["axes"] = json::array();
  for (const auto& a : axes) {
    json values = json::array();
    for (const auto& v : a.values) values.push_back(value_json(v));
    doc["axes"].push_back({{"name", a.name}, {"type", a.type}, {"values", values}});
  }
  return doc.dump(2);
}

std::vector<std::size_t> FoldAssignment::train_indices(std::size_t f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] != f) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldAssignment::test_indices(std::size_t f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] == f) out.push_back(i);
  }
  return out;
}

FoldAssignment stratified_kfold(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::kStratification, "k-fold needs k >= 2");
  std::vector<std::size_t> members[2];
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i] == 1 ? 1 : 0].push_back(i);
  for (int c = 0; c < 2; ++c) {
    if (members[c].size() < k) {
      throw Error(ErrorCode::kStratification,
                  "class " + std::to_string(c) + " has " + std::to_string(members[c].size()) +
                      " samples, fewer than k=" + std::to_string(k));
    }
  }
  FoldAssignment out;
  out.k = k;
  out.seed = seed;
  out.fold.assign(labels.size(), 0);
  std::mt19937_64 rng(seed);
  std::size_t next = 0;
  for (int c = 0; c < 2; ++c) {
    std::shuffle(members[c].begin(), members[c].end(), rng);
    for (std::size_t i : members[c]) {
      out.fold[i] = next;
      next = (next + 1) % k;
    }
  }
  return out;
}

ModelConfig config_for_point(const HyperGrid& grid, std::size_t index, std::uint64_t master_seed) {
  ModelConfig config = learners::make_config(grid.algorithm, grid.point(index), master_seed);
  config.seed += index;
  return config;
}

SearchResult grid_search(const HyperGrid& grid, const data::Cohort& train, std::size_t k,
                         std::uint64_t seed, const SearchOptions& options) {
  const std::size_t n_points = grid.size();
  if (n_points == 0) throw Error(ErrorCode::kConfig, "grid is empty");
  SearchResult result;
  result.folds = stratified_kfold(train.labels, k, derive_seed(seed, "folds"));

  // Materialize the fold cohorts once; every config sees identical folds.
  struct FoldData {
    data::Cohort train;
    data::Cohort test;
  };
  std::vector<FoldData> folds;
  for (std::size_t f = 0; f < k; ++f) {
    const auto tr = result.folds.train_indices(f);
    const auto te = result.folds.test_indices(f);
    folds.push_back({train.select_rows(tr), train.select_rows(te)});
  }

  std::vector<CVResult> results(n_points);
  auto evaluate_point = [&](std::size_t index) {
    CVResult& r = results[index];
    r.index = index;
    try {
      r.config = config_for_point(grid, index, seed);
    } catch (const Error& e) {
      r.config.algorithm = grid.algorithm;
      r.failure = e.what();
      return;
    }
    try {
      double sum = 0.0;
      for (const auto& fd : folds) {
        const auto model = learners::fit(r.config, fd.train);
        const auto scores = model.score_all(fd.test.rows);
        const auto preds = model.predict_all(fd.test.rows);
        r.folds.push_back(metrics::evaluate(fd.test.labels, preds, scores));
        sum += r.folds.back().yes.f1.value;
      }
      r.mean_f1 = sum / static_cast<double>(folds.size());
    } catch (const std::exception& e) {
      r.folds.clear();
      r.mean_f1 = 0.0;
      r.failure = e.what();
    }
  };

  std::size_t threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, n_points);
  if (threads == 1) {
    for (std::size_t i = 0; i < n_points; ++i) evaluate_point(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n_points; i = next++) evaluate_point(i);
      });
    }
  }

  std::stable_sort(results.begin(), results.end(), [](const CVResult& a, const CVResult& b) {
    if (a.mean_f1 != b.mean_f1) return a.mean_f1 > b.mean_f1;
    return a.index < b.index;
  });
  for (std::size_t i = 0; i < results.size(); ++i) results[i].rank = i + 1;
  result.best = results.front().config;
  result.all = std::move(results);
  return result;
}

std::string to_json(const SearchResult& result) {
  json doc;
  doc["best"] = result.best.describe();
  doc["folds"] = {{"k", result.folds.k}, {"seed", result.folds.seed}, {"assignment", result.folds.fold}};
  doc["results"] = json::array();
  for (const auto& r : result.all) {
    json entry;
    entry["rank"] = r.rank;
    entry["index"] = r.index;
    entry["config"] = r.config.describe();
    entry["mean_f1"] = r.mean_f1;
    entry["failure"] = r.failure ? json(*r.failure) : json();
    entry["folds"] = json::array();
    for (const auto& f : r.folds) entry["folds"].push_back(report_json(f));
    doc["results"].push_back(std::move(entry));
  }
  return doc.dump(1);
}

}  // namespace mafus::tuning
