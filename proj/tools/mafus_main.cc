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

// mafus: train, compare and explain binary risk classifiers on tabular
// cohorts.
//
//   mafus run --config run.json [--seed N] [--output DIR]
//   mafus synth --n 1000 --prevalence 0.2 --signal 3 --seed 1 --out cohort.csv
//   mafus explain --model out/model.json --input patients.csv --out explained/
//   mafus serve --model out/model.json --port 8080

#include <cstdlib>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "mafus/artifact.h"
#include "mafus/data.h"
#include "mafus/explain.h"
#include "mafus/pipeline.h"
#include "mafus/service.h"
#include "mafus/synth.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitTraining = 4;
constexpr int kExitExplanation = 5;

int exit_code(const mafus::Error& e) {
  using mafus::ErrorCode;
  if (e.code() == ErrorCode::kConfig) return kExitConfig;
  if (const auto* s = dynamic_cast<const mafus::pipeline::StageError*>(&e)) {
    if (s->stage() == "config") return kExitConfig;
    if (s->stage() == "tune" || s->stage() == "fit" || s->stage() == "evaluate") return kExitTraining;
    if (s->stage() == "explain") return kExitExplanation;
    return kExitData;
  }
  switch (e.code()) {
    case ErrorCode::kTraining:
    case ErrorCode::kUndefinedMetric:
      return kExitTraining;
    case ErrorCode::kExplanation:
      return kExitExplanation;
    default:
      return kExitData;
  }
}

int run_command(const std::string& config_path, std::optional<std::uint64_t> seed,
                const std::string& output) {
  auto config = mafus::pipeline::PipelineConfig::load(config_path);
  if (seed) config.seed = *seed;
  if (!output.empty()) config.output = output;
  const auto result = mafus::pipeline::run_pipeline(config);
  const auto& c = result.comparison;
  std::cout << "train " << result.train_size << ", test " << result.test_size << "\n";
  for (const auto& e : c.entries) {
    std::cout << mafus::learners::algorithm_name(e.algorithm) << ": f1(yes) "
              << mafus::format_double(e.test.yes.f1.value) << ", auc "
              << mafus::format_double(e.test.auc) << ", class-1 errors " << e.test.class1_errors()
              << "\n";
  }
  std::cout << "chosen: " << c.rationale << "\n";
  std::cout << "explained: A " << result.partition.a.size() << ", B " << result.partition.b.size()
            << ", failed " << result.partition.failed.size() << "\n";
  std::cout << "output: " << result.output.string() << "\n";
  return kExitOk;
}

int synth_command(const mafus::synth::SynthSpec& spec, const std::string& out) {
  const auto cohort = mafus::synth::gen_synthetic(spec);
  mafus::write_file(out, mafus::data::to_csv(cohort));
  std::cout << "wrote " << cohort.size() << " rows (" << cohort.count_label(1) << " positive) to "
            << out << "\n";
  return kExitOk;
}

int explain_command(const std::string& model_path, const std::string& input, const std::string& out) {
  const auto artifact = mafus::ModelArtifact::load(model_path);
  const std::string text = mafus::read_file(input);

  // Parse only the columns the model needs (plus the label, when present).
  std::vector<mafus::data::Column> columns;
  for (const auto& c : artifact.schema.columns()) {
    const bool wanted = c.kind == mafus::data::ColumnKind::kLabel ||
                        std::find(artifact.selected.begin(), artifact.selected.end(), c.name) !=
                            artifact.selected.end();
    if (wanted) columns.push_back(c);
  }
  const mafus::data::FeatureSchema schema(columns);
  const auto cohort = mafus::data::parse_csv(text, schema, mafus::data::CsvMode::kScoring).select_features(artifact.selected);

  mafus::data::Cohort prepared = cohort;
  std::vector<std::size_t> usable;
  std::vector<std::pair<std::int64_t, std::string>> rejected;
  for (std::size_t r = 0; r < cohort.size(); ++r) {
    std::map<std::string, double> raw;
    for (std::size_t j = 0; j < artifact.selected.size(); ++j) raw[artifact.selected[j]] = cohort.rows(r, j);
    try {
      const auto x = artifact.prepare(raw);
      std::copy(x.begin(), x.end(), prepared.rows.row(r).begin());
      usable.push_back(r);
    } catch (const mafus::Error& e) {
      rejected.emplace_back(cohort.row_ids[r], e.what());
    }
  }
  auto partition = mafus::explain::partition_run(artifact.model, prepared.select_rows(usable),
                                                 artifact.background, artifact.explain_options);
  for (auto& [id, why] : rejected) partition.failed.push_back({id, why});
  const std::filesystem::path dir(out);
  mafus::write_file(dir / "partition.json", mafus::explain::partition_to_json(partition));
  if (partition.explained() > 0) {
    const auto table = mafus::explain::summary_data(partition, &artifact.scaler);
    mafus::write_file(dir / "beeswarm.csv", mafus::explain::beeswarm_csv(table));
    std::string force = "[\n";
    bool first = true;
    for (const auto* s : partition.samples()) {
      force += (first ? "" : ",\n") +
               mafus::explain::force_json(mafus::explain::force_data(*s, partition.feature_names));
      first = false;
    }
    mafus::write_file(dir / "force.json", force + "\n]\n");
  }
  std::cout << "explained " << partition.explained() << " rows (A " << partition.a.size() << ", B "
            << partition.b.size() << "), failed " << partition.failed.size() << "\n";
  return partition.explained() == 0 && !partition.failed.empty() ? kExitExplanation : kExitOk;
}

int serve_command(const std::string& model_path, const std::string& host, int port) {
  const auto service = mafus::service::Service::from_file(model_path);
  std::cout << "serving " << model_path << " (" << service.artifact_hash() << ") on " << host << ":"
            << port << std::endl;
  if (!mafus::service::serve(service, host, port)) {
    std::cerr << "mafus: cannot listen on " << host << ":" << port << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Train, compare and explain binary risk classifiers on tabular cohorts"};
  app.require_subcommand(1);

  std::string config_path, output;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run the full pipeline from a config file");
  run->add_option("--config", config_path, "Pipeline config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--output", output, "Override the output directory");

  mafus::synth::SynthSpec spec;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Write a synthetic cohort CSV");
  synth->add_option("--n", spec.n, "Rows")->capture_default_str();
  synth->add_option("--prevalence", spec.prevalence, "Class-1 fraction")->capture_default_str();
  synth->add_option("--signal", spec.signal, "Class-1 shift in standard deviations")->capture_default_str();
  synth->add_option("--seed", spec.seed, "Seed")->capture_default_str();
  synth->add_flag("--exact-count", spec.exact_count, "Exactly round(prevalence * n) positives");
  synth->add_option("--missing-rows", spec.missing_rows, "Rows with one missing cell");
  synth->add_option("--out", synth_out, "Output CSV")->required();

  std::string model_path, input, explain_out;
  auto* explain = app.add_subcommand("explain", "Explain every row of a CSV with a saved model");
  explain->add_option("--model", model_path, "Model artifact")->required()->check(CLI::ExistingFile);
  explain->add_option("--input", input, "CSV of patient rows")->required()->check(CLI::ExistingFile);
  explain->add_option("--out", explain_out, "Output directory")->required();

  std::string serve_model, host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve a saved model over HTTP");
  serve->add_option("--model", serve_model, "Model artifact")->required()->check(CLI::ExistingFile);
  serve->add_option("--port", port, "Port")->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return run_command(config_path, seed, output);
    if (*synth) return synth_command(spec, synth_out);
    if (*explain) return explain_command(model_path, input, explain_out);
    if (*serve) return serve_command(serve_model, host, port);
  } catch (const mafus::Error& e) {
    std::cerr << "mafus: " << mafus::error_code_name(e.code()) << ": " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "mafus: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
