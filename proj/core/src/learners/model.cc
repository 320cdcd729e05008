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

#include "mafus/learners/model.h"

#include <cmath>

#include "json.hpp"
#include "mafus/learners/boosting.h"
#include "mafus/learners/forest.h"
#include "mafus/learners/mlp.h"
#include "mafus/learners/svm.h"

namespace mafus::learners {

namespace {

using nlohmann::json;

constexpr int kArtifactVersion = 1;

json param_to_json(const ParamValue& v) {
  if (v.is_none()) return nullptr;
  if (v.is_int()) return v.as_int();
  if (v.is_real()) return v.as_real();
  return v.as_text();
}

ParamValue param_from_json(const json& j) {
  if (j.is_null()) return ParamValue();
  if (j.is_number_integer()) return ParamValue(j.get<std::int64_t>());
  if (j.is_number()) return ParamValue(j.get<double>());
  if (j.is_string()) return ParamValue(j.get<std::string>());
  throw Error(ErrorCode::kParse, "unsupported hyperparameter value " + j.dump());
}

json config_to_json(const ModelConfig& c) {
  json params = json::object();
  for (const auto& [k, v] : c.params) params[k] = param_to_json(v);
  return {{"algorithm", std::string(algorithm_name(c.algorithm))},
          {"params", params},
          {"seed", c.seed},
          {"class_weight", c.class_weighting == ClassWeighting::kBalanced ? json("balanced") : json()}};
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  c.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  for (const auto& [k, v] : j.at("params").items()) c.params[k] = param_from_json(v);
  c.seed = j.at("seed").get<std::uint64_t>();
  c.class_weighting = j.at("class_weight").is_null() ? ClassWeighting::kNone : ClassWeighting::kBalanced;
  return c;
}

std::shared_ptr<const Classifier> classifier_from(const std::string& kind, const std::string& text) {
  if (kind == "svm") return std::make_shared<SvmModel>(SvmModel::from_parameters(text));
  if (kind == "rf") return std::make_shared<RandomForest>(RandomForest::from_parameters(text));
  if (kind == "xgb" || kind == "lgbm") {
    return std::make_shared<BoostedTrees>(BoostedTrees::from_parameters(text, kind));
  }
  if (kind == "mlp") return std::make_shared<MlpModel>(MlpModel::from_parameters(text));
  const json doc = json::parse(text);
  if (kind == "constant") return std::make_shared<ConstantClassifier>(doc.at("label").get<int>());
  if (kind == "linear") {
    return std::make_shared<LinearClassifier>(doc.at("weights").get<std::vector<double>>(),
                                              doc.at("bias").get<double>(),
                                              doc.at("threshold").get<double>());
  }
  throw Error(ErrorCode::kParse, "unknown model kind '" + kind + "'");
}

}  // namespace

void Classifier::score_batch(const Matrix& x, std::span<double> out) const {
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = score(x.row(r));
}

std::string ConstantClassifier::parameters_json() const { return json{{"label", label_}}.dump(); }

double LinearClassifier::score(std::span<const double> x) const {
  double s = bias_;
  for (std::size_t k = 0; k < weights_.size(); ++k) s += weights_[k] * x[k];
  return s;
}

std::string LinearClassifier::parameters_json() const {
  return json{{"weights", weights_}, {"bias", bias_}, {"threshold", threshold_}}.dump();
}

TrainedModel::TrainedModel(std::shared_ptr<const Classifier> impl, ModelConfig config,
                           std::size_t dims, bool degenerate)
    : impl_(std::move(impl)), config_(std::move(config)), dims_(dims), degenerate_(degenerate) {}

void TrainedModel::check_dims(std::size_t n) const {
  if (n != dims_) {
    throw Error(ErrorCode::kContract, "feature vector has " + std::to_string(n) +
                                          " values, model expects " + std::to_string(dims_));
  }
}

double TrainedModel::score(std::span<const double> x) const {
  check_dims(x.size());
  return impl_->score(x);
}

int TrainedModel::predict(std::span<const double> x) const {
  return score(x) >= impl_->threshold() ? 1 : 0;
}

std::vector<double> TrainedModel::score_all(const Matrix& x) const {
  if (x.rows() > 0) check_dims(x.cols());
  std::vector<double> out(x.rows());
  impl_->score_batch(x, out);
  return out;
}

std::vector<int> TrainedModel::predict_all(const Matrix& x) const {
  const auto scores = score_all(x);
  std::vector<int> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] >= impl_->threshold() ? 1 : 0;
  return out;
}

std::string TrainedModel::to_json() const {
  json doc;
  doc["version"] = kArtifactVersion;
  doc["kind"] = impl_->kind();
  doc["config"] = config_to_json(config_);
  doc["dims"] = dims_;
  doc["degenerate"] = degenerate_;
  doc["parameters"] = json::parse(impl_->parameters_json());
  return doc.dump();
}

TrainedModel TrainedModel::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("model document: ") + e.what());
  }
  if (doc.value("version", 0) != kArtifactVersion) {
    throw Error(ErrorCode::kParse, "unsupported model document version");
  }
  const auto kind = doc.at("kind").get<std::string>();
  return TrainedModel(classifier_from(kind, doc.at("parameters").dump()),
                      config_from_json(doc.at("config")), doc.at("dims").get<std::size_t>(),
                      doc.at("degenerate").get<bool>());
}

std::vector<double> class_weights(std::span<const int> labels, ClassWeighting weighting) {
  std::vector<double> w(labels.size(), 1.0);
  if (weighting == ClassWeighting::kNone) return w;
  const double n = static_cast<double>(labels.size());
  double count[2] = {0.0, 0.0};
  for (int y : labels) count[y == 1 ? 1 : 0] += 1.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double c = count[labels[i] == 1 ? 1 : 0];
    w[i] = n / (2.0 * c);
  }
  return w;
}

TrainedModel fit(const ModelConfig& config, const Matrix& x, std::span<const int> labels) {
  validate(config);
  if (x.rows() != labels.size()) {
    throw Error(ErrorCode::kContract, "feature rows and labels differ in length");
  }
  if (labels.empty()) throw Error(ErrorCode::kContract, "cannot fit on an empty training set");
  for (double v : x.data()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kContract, "non-finite feature value in training data");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw Error(ErrorCode::kContract, "training labels must be 0 or 1");
  }
  const std::size_t positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  if (positives == 0 || positives == labels.size()) {
    return TrainedModel(std::make_shared<ConstantClassifier>(positives == 0 ? 0 : 1), config,
                        x.cols(), true);
  }
  std::shared_ptr<const Classifier> impl;
  switch (config.algorithm) {
    case Algorithm::kSvm:
      impl = std::make_shared<SvmModel>(fit_svm(SvmParams::from_config(config), x, labels));
      break;
    case Algorithm::kRf:
      impl = std::make_shared<RandomForest>(
          fit_forest(ForestParams::from_config(config, x.cols()), x, labels));
      break;
    case Algorithm::kXgb:
    case Algorithm::kLgbm:
      impl = std::make_shared<BoostedTrees>(
          fit_boosting(BoostingParams::from_config(config), x, labels));
      break;
    case Algorithm::kMlp:
      impl = std::make_shared<MlpModel>(fit_mlp(MlpParams::from_config(config), x, labels));
      break;
  }
  return TrainedModel(std::move(impl), config, x.cols(), false);
}

TrainedModel fit(const ModelConfig& config, const data::Cohort& train) {
  return fit(config, train.rows, train.labels);
}

}  // namespace mafus::learners
