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

#include "mafus/pipeline.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "json.hpp"
#include "mafus/artifact.h"
#include "mafus/data.h"
#include "mafus/learners/model.h"

namespace mafus::pipeline {

namespace fs = std::filesystem;

namespace {

using learners::Algorithm;
using nlohmann::json;

const char* importance_name(relevance::ImportanceType t) {
  return t == relevance::ImportanceType::kSplitCount ? "split_count" : "total_gain";
}

template <typename F>
auto run_stage(std::string_view name, F&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(std::string(name), e);
  } catch (const std::exception& e) {
    const ErrorCode code = name == "explain" ? ErrorCode::kExplanation : ErrorCode::kIo;
    throw StageError(std::string(name), Error(code, e.what()));
  }
}

std::string file_token(std::string_view name) {
  std::string out;
  for (char c : name) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

json cohort_summary(const data::Cohort& loaded, const data::Cohort& clean) {
  json doc;
  doc["rows_loaded"] = loaded.size();
  doc["rows_clean"] = clean.size();
  doc["rows_dropped"] = loaded.size() - clean.size();
  doc["class_counts"] = {{"0", clean.count_label(0)}, {"1", clean.count_label(1)}};
  doc["features"] = json::array();
  const auto features = clean.schema.features();
  for (std::size_t j = 0; j < features.size(); ++j) {
    double sum = 0.0, lo = INFINITY, hi = -INFINITY;
    for (std::size_t r = 0; r < clean.size(); ++r) {
      const double v = clean.rows(r, j);
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double n = static_cast<double>(clean.size());
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t r = 0; r < clean.size(); ++r) ss += (clean.rows(r, j) - mean) * (clean.rows(r, j) - mean);
    doc["features"].push_back({{"name", features[j].name},
                               {"kind", std::string(data::column_kind_name(features[j].kind))},
                               {"mean", mean},
                               {"stddev", std::sqrt(ss / n)},
                               {"min", lo},
                               {"max", hi}});
  }
  return doc;
}

std::string predictions_csv(const data::Cohort& test, std::span<const double> scores,
                            std::span<const int> preds) {
  std::ostringstream out;
  out << "sample_id,label,score,yhat\n";
  for (std::size_t i = 0; i < test.size(); ++i) {
    out << test.row_ids[i] << ',' << test.labels[i] << ',' << format_double(scores[i]) << ','
        << preds[i] << '\n';
  }
  return out.str();
}

struct Predictions {
  std::vector<int> labels;
  std::vector<double> scores;
  std::vector<int> preds;
};

Predictions parse_predictions(const std::string& text) {
  Predictions p;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string id, label, score, yhat;
    std::getline(cells, id, ',');
    std::getline(cells, label, ',');
    std::getline(cells, score, ',');
    std::getline(cells, yhat, ',');
    p.labels.push_back(std::stoi(label));
    p.scores.push_back(std::stod(score));
    p.preds.push_back(std::stoi(yhat));
  }
  return p;
}

std::vector<fs::path> list_files(const fs::path& root) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) out.push_back(fs::relative(entry.path(), root));
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
  return out;
}

std::map<std::string, std::vector<double>> numeric_codes(const data::Cohort& cohort,
                                                         std::span<const std::string> selected) {
  std::map<std::string, std::vector<double>> out;
  for (const auto& name : selected) {
    const auto& column = cohort.schema.column(name);
    if (column.kind != data::ColumnKind::kCategorical || !column.levels.empty()) continue;
    const std::size_t j = *cohort.feature_index(name);
    std::vector<double> codes;
    for (std::size_t r = 0; r < cohort.size(); ++r) codes.push_back(cohort.rows(r, j));
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
    out[name] = std::move(codes);
  }
  return out;
}

}  // namespace

StageError::StageError(std::string stage, const Error& cause)
    : Error(cause.code(), "stage '" + stage + "': " + cause.what()), stage_(std::move(stage)) {}

// ---- PipelineConfig --------------------------------------------------------

PipelineConfig PipelineConfig::defaults() {
  PipelineConfig c;
  for (Algorithm a : learners::kAllAlgorithms) c.grids.push_back({"full", tuning::HyperGrid::full_default(a)});
  return c;
}

PipelineConfig PipelineConfig::from_json(std::string_view text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("config document: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kConfig, "config document must be an object");
  static const char* kKeys[] = {"input",      "synthetic", "schema",         "seed",
                                "split_ratio", "stratified_split", "paper_faithful", "relevance",
                                "grids",      "cv_folds",  "explain",        "threads",
                                "output",     "emit_plots"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find_if(std::begin(kKeys), std::end(kKeys), [&](const char* k) { return key == k; }) ==
        std::end(kKeys)) {
      throw Error(ErrorCode::kConfig, "unknown config key '" + key + "'");
    }
  }
  auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };

  PipelineConfig c;
  try {
    if (doc.contains("input") && !doc["input"].is_null()) c.input = resolve(doc["input"].get<std::string>());
    if (doc.contains("synthetic")) {
      const auto& s = doc["synthetic"];
      c.synthetic.n = s.value("n", c.synthetic.n);
      c.synthetic.prevalence = s.value("prevalence", c.synthetic.prevalence);
      c.synthetic.signal = s.value("signal", c.synthetic.signal);
      c.synthetic.secondary_signal = s.value("secondary_signal", c.synthetic.secondary_signal);
      c.synthetic.exact_count = s.value("exact_count", c.synthetic.exact_count);
      c.synthetic.missing_rows = s.value("missing_rows", c.synthetic.missing_rows);
      if (s.contains("seed")) {
        c.synthetic.seed = s["seed"].get<std::uint64_t>();
        c.synthetic_seed_set = true;
      }
    }
    if (doc.contains("schema") && !doc["schema"].is_null()) c.schema = resolve(doc["schema"].get<std::string>());
    c.seed = doc.value("seed", c.seed);
    c.split_ratio = doc.value("split_ratio", c.split_ratio);
    c.stratified_split = doc.value("stratified_split", c.stratified_split);
    c.paper_faithful = doc.value("paper_faithful", c.paper_faithful);
    if (doc.contains("relevance")) {
      const auto& r = doc["relevance"];
      c.relevance_threshold = r.value("threshold", c.relevance_threshold);
      c.forced_features = r.value("forced", c.forced_features);
      const std::string imp = r.value("importance", std::string("split_count"));
      if (imp == "split_count") {
        c.importance = relevance::ImportanceType::kSplitCount;
      } else if (imp == "total_gain") {
        c.importance = relevance::ImportanceType::kTotalGain;
      } else {
        throw Error(ErrorCode::kConfig, "unknown importance type '" + imp + "'");
      }
    }
    if (doc.contains("grids")) {
      std::map<Algorithm, GridSource> by_algorithm;
      for (const auto& [name, value] : doc["grids"].items()) {
        const Algorithm a = learners::parse_algorithm(name);
        GridSource source;
        if (value.is_object()) {
          source = {"inline", tuning::HyperGrid::from_json(value.dump())};
        } else if (value.get<std::string>() == "full") {
          source = {"full", tuning::HyperGrid::full_default(a)};
        } else {
          source = {value.get<std::string>(), tuning::HyperGrid::load(resolve(value.get<std::string>()))};
        }
        if (source.grid.algorithm != a) {
          throw Error(ErrorCode::kConfig, "grid for '" + name + "' is declared for '" +
                                              std::string(learners::algorithm_name(source.grid.algorithm)) +
                                              "'");
        }
        by_algorithm.emplace(a, std::move(source));
      }
      for (Algorithm a : learners::kAllAlgorithms) {
        if (auto it = by_algorithm.find(a); it != by_algorithm.end()) c.grids.push_back(std::move(it->second));
      }
    } else {
      c.grids = defaults().grids;
    }
    c.cv_folds = doc.value("cv_folds", c.cv_folds);
    if (doc.contains("explain")) {
      const auto& e = doc["explain"];
      c.background_size = e.value("background_size", c.background_size);
      c.exact_cap = e.value("exact_cap", c.exact_cap);
      c.permutations = e.value("permutations", c.permutations);
    }
    c.threads = doc.value("threads", c.threads);
    if (doc.contains("output")) c.output = resolve(doc["output"].get<std::string>());
    c.emit_plots = doc.value("emit_plots", c.emit_plots);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("config value: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig) throw;
    throw Error(ErrorCode::kConfig, e.what());
  }
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  return from_json(text, path.parent_path());
}

void PipelineConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::kConfig, m); };
  if (input && !fs::exists(*input)) fail("input file " + input->string() + " does not exist");
  if (schema && !fs::exists(*schema)) fail("schema file " + schema->string() + " does not exist");
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) fail("split_ratio must lie in (0, 1)");
  if (cv_folds < 2) fail("cv_folds must be >= 2");
  if (background_size == 0) fail("background_size must be >= 1");
  if (permutations == 0) fail("permutations must be >= 1");
  if (grids.empty()) fail("no grids configured");
  if (!input) {
    if (!(synthetic.prevalence > 0.0 && synthetic.prevalence < 1.0)) fail("synthetic prevalence must lie in (0, 1)");
    if (synthetic.n < 20) fail("synthetic n must be >= 20");
  }
  if (output.empty()) fail("output directory is empty");
}

std::string PipelineConfig::to_json() const {
  json doc;
  doc["input"] = input ? json(input->generic_string()) : json();
  doc["synthetic"] = {{"n", synthetic.n},
                      {"prevalence", synthetic.prevalence},
                      {"signal", synthetic.signal},
                      {"secondary_signal", synthetic.secondary_signal},
                      {"seed", synthetic_seed_set ? synthetic.seed : seed},
                      {"exact_count", synthetic.exact_count},
                      {"missing_rows", synthetic.missing_rows}};
  doc["schema"] = schema ? json(schema->generic_string()) : json();
  doc["seed"] = seed;
  doc["split_ratio"] = split_ratio;
  doc["stratified_split"] = stratified_split;
  doc["paper_faithful"] = paper_faithful;
  doc["relevance"] = {{"threshold", relevance_threshold},
                      {"forced", forced_features},
                      {"importance", importance_name(importance)}};
  doc["grids"] = json::object();
  for (const auto& g : grids) {
    doc["grids"][std::string(learners::algorithm_name(g.grid.algorithm))] = {
        {"origin", g.origin}, {"size", g.grid.size()}};
  }
  doc["cv_folds"] = cv_folds;
  doc["explain"] = {{"background_size", background_size},
                    {"exact_cap", exact_cap},
                    {"permutations", permutations}};
  doc["emit_plots"] = emit_plots;
  return doc.dump(2);
}

// ---- Comparison ------------------------------------------------------------

std::size_t choose_model(std::span<const ModelEntry> entries) {
  if (entries.empty()) throw Error(ErrorCode::kContract, "no models to choose from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const auto& a = entries[i].test;
    const auto& b = entries[best].test;
    if (a.class1_errors() != b.class1_errors()) {
      if (a.class1_errors() < b.class1_errors()) best = i;
    } else if (a.yes.f1.value != b.yes.f1.value) {
      if (a.yes.f1.value > b.yes.f1.value) best = i;
    } else if (a.auc > b.auc) {
      best = i;
    }
  }
  return best;
}

std::string to_json(const ComparisonReport& report) {
  json doc;
  doc["models"] = json::array();
  for (const auto& e : report.entries) {
    doc["models"].push_back({{"algorithm", std::string(learners::algorithm_name(e.algorithm))},
                             {"best_config", e.best.describe()},
                             {"cv_f1", e.cv_f1},
                             {"class1_errors", e.test.class1_errors()},
                             {"test", json::parse(metrics::to_json(e.test))}});
  }
  const auto& chosen = report.entries.at(report.chosen);
  doc["chosen"] = std::string(learners::algorithm_name(chosen.algorithm));
  doc["rationale"] = report.rationale;
  return doc.dump(2);
}

// ---- run_pipeline ----------------------------------------------------------

PipelineResult run_pipeline(const PipelineConfig& config) {
  run_stage("config", [&] {
    config.validate();
    return 0;
  });
  const fs::path out = config.output;
  const fs::path tmp = out.string() + ".tmp";
  try {
    fs::remove_all(tmp);
    fs::create_directories(tmp);
  } catch (const fs::filesystem_error& e) {
    throw StageError("load", Error(ErrorCode::kIo, e.what()));
  }
  json stages = json::array();
  auto record = [&](std::string_view name, json detail) {
    stages.push_back({{"stage", name}, {"detail", std::move(detail)}});
  };
  auto put = [&](const std::string& rel, std::string_view bytes) { write_file(tmp / rel, bytes); };

  try {
    PipelineResult result;

    // load
    const data::Cohort loaded = run_stage("load", [&] {
      if (config.input) {
        const auto schema = config.schema ? data::FeatureSchema::load(*config.schema)
                                          : data::FeatureSchema::cohort_default();
        return data::load_csv(*config.input, schema);
      }
      synth::SynthSpec spec = config.synthetic;
      if (!config.synthetic_seed_set) spec.seed = config.seed;
      return synth::gen_synthetic(spec);
    });
    record("load", {{"rows", loaded.size()},
                    {"source", config.input ? "csv" : "synthetic"},
                    {"features", loaded.dims()}});

    // clean
    const data::Cohort clean = run_stage("clean", [&] {
      auto c = data::encode_categoricals(data::drop_incomplete(loaded));
      for (int y : c.labels) {
        if (y != 0 && y != 1) throw Error(ErrorCode::kParse, "labels must be binary after cleaning");
      }
      return c;
    });
    record("clean", {{"rows_in", loaded.size()}, {"rows_out", clean.size()}});
    put("cohort_summary.json", cohort_summary(loaded, clean).dump(2));

    // The partition is drawn from labels alone, so it can be fixed before the
    // scaler and selector are fit on the training side.
    const std::uint64_t split_seed = derive_seed(config.seed, "split");
    const auto [train_index, test_index] = run_stage("split", [&] {
      return data::plan_split(clean.labels, config.split_ratio, split_seed, config.stratified_split);
    });

    // standardize
    const data::ScalerStats scaler = run_stage("standardize", [&] {
      return data::fit_scaler(config.paper_faithful ? clean : clean.select_rows(train_index));
    });
    const data::Cohort standardized = run_stage("standardize", [&] { return data::apply_scaler(clean, scaler); });
    record("standardize", {{"fit_rows", config.paper_faithful ? "cohort" : "train"},
                           {"fit_size", config.paper_faithful ? clean.size() : train_index.size()}});
    put("scaler.json", data::scaler_to_json(scaler));

    // select
    auto [report, selected] = run_stage("select", [&] {
      auto booster = relevance::default_booster();
      booster.seed = derive_seed(config.seed, "relevance");
      auto r = relevance::relevance_scores(
          config.paper_faithful ? standardized : standardized.select_rows(train_index), booster,
          config.importance);
      auto s = relevance::select_features(r, config.relevance_threshold, config.forced_features);
      return std::make_pair(std::move(r), std::move(s));
    });
    const data::Cohort projected = run_stage("select", [&] { return standardized.select_features(selected); });
    record("select", {{"fit_rows", config.paper_faithful ? "cohort" : "train"},
                      {"selected", selected},
                      {"threshold", config.relevance_threshold}});
    put("relevance.json", relevance::to_json(report));

    // split
    const data::Cohort train = projected.select_rows(train_index);
    const data::Cohort test = projected.select_rows(test_index);
    record("split", {{"seed", split_seed},
                     {"ratio", config.split_ratio},
                     {"stratified", config.stratified_split},
                     {"train", train.size()},
                     {"test", test.size()}});
    put("split.json", json{{"train_ids", train.row_ids}, {"test_ids", test.row_ids}}.dump());
    result.train_size = train.size();
    result.test_size = test.size();

    // tune
    std::vector<tuning::SearchResult> searches;
    run_stage("tune", [&] {
      for (const auto& g : config.grids) {
        searches.push_back(tuning::grid_search(g.grid, train, config.cv_folds, config.seed,
                                               {.threads = config.threads}));
        put("cv/" + std::string(learners::algorithm_name(g.grid.algorithm)) + ".json",
            tuning::to_json(searches.back()));
      }
      return 0;
    });
    json tune_detail = json::array();
    for (std::size_t i = 0; i < searches.size(); ++i) {
      tune_detail.push_back({{"algorithm", std::string(learners::algorithm_name(config.grids[i].grid.algorithm))},
                             {"configs", config.grids[i].grid.size()},
                             {"best", searches[i].best.describe()},
                             {"cv_f1", searches[i].all.front().mean_f1}});
    }
    record("tune", {{"folds", config.cv_folds}, {"searches", tune_detail}});

    // fit
    std::vector<learners::TrainedModel> models;
    run_stage("fit", [&] {
      for (const auto& s : searches) models.push_back(learners::fit(s.best, train));
      return 0;
    });
    record("fit", {{"models", models.size()}, {"train", train.size()}});

    // evaluate
    ComparisonReport& comparison = result.comparison;
    run_stage("evaluate", [&] {
      for (std::size_t i = 0; i < models.size(); ++i) {
        const auto scores = models[i].score_all(test.rows);
        const auto preds = models[i].predict_all(test.rows);
        ModelEntry e{models[i].algorithm(), searches[i].best, searches[i].all.front().mean_f1,
                     metrics::evaluate(test.labels, preds, scores)};
        const std::string tag(learners::algorithm_name(e.algorithm));
        put("eval/" + tag + ".json", metrics::to_json(e.test));
        put("predictions/" + tag + ".csv", predictions_csv(test, scores, preds));
        comparison.entries.push_back(std::move(e));
      }
      comparison.chosen = choose_model(comparison.entries);
      const auto& c = comparison.entries[comparison.chosen];
      std::ostringstream why;
      why << learners::algorithm_name(c.algorithm) << " has the fewest class-1 errors ("
          << c.test.class1_errors() << ": fn " << c.test.confusion.fn << ", fp " << c.test.confusion.fp
          << ") with class-1 F1 " << format_double(c.test.yes.f1.value) << " and AUC "
          << format_double(c.test.auc);
      comparison.rationale = why.str();
      put("comparison.json", to_json(comparison));
      return 0;
    });
    const auto& chosen_model = models[comparison.chosen];
    record("evaluate", {{"chosen", std::string(learners::algorithm_name(chosen_model.algorithm()))},
                        {"test", test.size()}});

    // explain
    const std::uint64_t background_seed = derive_seed(config.seed, "background");
    const explain::ExplainOptions options{config.exact_cap, config.permutations,
                                          derive_seed(config.seed, "shap"), config.threads};
    const auto background = run_stage("explain", [&] {
      return explain::BackgroundSet::sample(train.rows, config.background_size, background_seed);
    });
    result.partition = run_stage("explain", [&] {
      auto p = explain::partition_run(chosen_model, test, background, options);
      if (p.explained() == 0 && test.size() > 0) {
        throw Error(ErrorCode::kExplanation, "every test sample failed to explain: " + p.failed.front().reason);
      }
      return p;
    });
    put("partition.json", explain::partition_to_json(result.partition));
    record("explain", {{"background", background.size()},
                       {"background_seed", background_seed},
                       {"mode", chosen_model.dims() <= config.exact_cap ? "exact" : "sampled"},
                       {"A", result.partition.a.size()},
                       {"B", result.partition.b.size()},
                       {"failed", result.partition.failed.size()}});

    run_stage("explain", [&] {
      ModelArtifact artifact{chosen_model,
                             clean.schema,
                             selected,
                             scaler,
                             numeric_codes(clean, selected),
                             background,
                             options,
                             result.partition,
                             config.seed};
      artifact.explain_options.threads = 0;
      put("model.json", artifact.to_json());
      return 0;
    });

    if (config.emit_plots) {
      run_stage("emit", [&] {
        emit_plots(tmp);
        return 0;
      });
      record("emit", {{"directory", "plots"}});
    }

    json manifest;
    manifest["seed"] = config.seed;
    manifest["config"] = json::parse(config.to_json());
    manifest["stages"] = stages;
    manifest["files"] = json::array();
    for (const auto& rel : list_files(tmp)) {
      manifest["files"].push_back({{"path", rel.generic_string()},
                                   {"fnv1a64", hex64(fnv1a64(read_file(tmp / rel)))}});
    }
    put("manifest.json", manifest.dump(2));

    run_stage("emit", [&] {
      fs::remove_all(out);
      fs::rename(tmp, out);
      return 0;
    });
    result.relevance = std::move(report);
    result.output = out;
    return result;
  } catch (...) {
    std::error_code ignored;
    fs::remove_all(tmp, ignored);
    throw;
  }
}

// ---- emit_plots ------------------------------------------------------------

void emit_plots(const fs::path& run_dir) {
  auto need = [&](const std::string& rel) {
    const fs::path p = run_dir / rel;
    if (!fs::exists(p)) throw Error(ErrorCode::kIo, "missing run artifact " + rel);
    return read_file(p);
  };
  const fs::path plots = run_dir / "plots";
  fs::create_directories(plots);

  // Relevance bars: selected features by score, excluded ones listed apart.
  const auto report = relevance::report_from_json(need("relevance.json"));
  std::ostringstream bar, excluded;
  bar << "feature,score,forced\n";
  excluded << "feature,score\n";
  for (const auto& name : report.ranking) {
    const bool is_selected = std::find(report.selected.begin(), report.selected.end(), name) != report.selected.end();
    const bool forced = std::find(report.forced.begin(), report.forced.end(), name) != report.forced.end();
    if (is_selected) {
      bar << name << ',' << format_double(report.score_of(name)) << ',' << (forced ? 1 : 0) << '\n';
    } else {
      excluded << name << ',' << format_double(report.score_of(name)) << '\n';
    }
  }
  write_file(plots / "relevance_bar.csv", bar.str());
  write_file(plots / "relevance_excluded.csv", excluded.str());

  // ROC curves and confusion matrices per model.
  const auto comparison = json::parse(need("comparison.json"));
  for (const auto& m : comparison.at("models")) {
    const auto tag = m.at("algorithm").get<std::string>();
    const auto p = parse_predictions(need("predictions/" + tag + ".csv"));
    std::ostringstream roc;
    roc << "fpr,tpr\n";
    for (const auto& pt : metrics::roc_points(p.scores, p.labels)) {
      roc << format_double(pt.fpr) << ',' << format_double(pt.tpr) << '\n';
    }
    write_file(plots / ("roc_" + tag + ".csv"), roc.str());
    const auto cm = metrics::confusion(p.labels, p.preds);
    std::ostringstream conf;
    conf << "actual,predicted_no,predicted_yes\n"
         << "Mortality (No)," << cm.tn << ',' << cm.fp << '\n'
         << "Mortality (Yes)," << cm.fn << ',' << cm.tp << '\n';
    write_file(plots / ("confusion_" + tag + ".csv"), conf.str());
  }

  // Attribution views of the explained test partition.
  const auto partition = explain::partition_from_json(need("partition.json"));
  const auto scaler = data::scaler_from_json(need("scaler.json"));
  if (partition.explained() == 0) return;
  const auto table = explain::summary_data(partition, &scaler);
  write_file(plots / "beeswarm.csv", explain::beeswarm_csv(table));
  const std::string& top = table.feature_order.front();
  for (const auto& feature : table.feature_order) {
    if (feature == top) continue;
    const auto rows = explain::dependence_data(partition, feature, top);
    write_file(plots / ("dependence_" + file_token(feature) + "_vs_" + file_token(top) + ".csv"),
               explain::dependence_csv(rows, feature, top));
  }
  json force = json::array();
  for (const auto* s : partition.samples()) {
    force.push_back(json::parse(explain::force_json(explain::force_data(*s, partition.feature_names))));
  }
  write_file(plots / "force.json", force.dump(1));
}

}  // namespace mafus::pipeline
