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

#include "mafus/learners/config.h"

#include <algorithm>
#include <cmath>

#include "mafus/common.h"

namespace mafus::learners {

namespace {

[[noreturn]] void bad_value(const ModelConfig& config, std::string_view name,
                            const ParamValue& value) {
  throw Error(ErrorCode::kConfig, std::string(algorithm_name(config.algorithm)) + ": " +
                                      std::string(name) + "=" + value.to_string() +
                                      " is outside the accepted domain");
}

void require_text(const ModelConfig& config, std::string_view name,
                  std::initializer_list<std::string_view> allowed, bool none_ok = false) {
  auto it = config.params.find(std::string(name));
  if (it == config.params.end()) return;
  const ParamValue& v = it->second;
  if (v.is_none() && none_ok) return;
  if (!v.is_text() || std::find(allowed.begin(), allowed.end(), v.as_text()) == allowed.end()) {
    bad_value(config, name, v);
  }
}

void require_number(const ModelConfig& config, std::string_view name, double lo, double hi,
                    bool none_ok = false) {
  auto it = config.params.find(std::string(name));
  if (it == config.params.end()) return;
  const ParamValue& v = it->second;
  if (v.is_none() && none_ok) return;
  if (!v.is_number()) bad_value(config, name, v);
  const double x = v.as_real();
  if (!std::isfinite(x) || x < lo || x > hi) bad_value(config, name, v);
}

}  // namespace

std::string_view algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kSvm: return "svm";
    case Algorithm::kRf: return "rf";
    case Algorithm::kXgb: return "xgb";
    case Algorithm::kLgbm: return "lgbm";
    case Algorithm::kMlp: return "mlp";
  }
  return "svm";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (algorithm_name(a) == name) return a;
  }
  throw Error(ErrorCode::kConfig, "unknown algorithm '" + std::string(name) + "'");
}

double ParamValue::as_real() const {
  if (is_int()) return static_cast<double>(std::get<std::int64_t>(value_));
  if (is_real()) return std::get<double>(value_);
  throw Error(ErrorCode::kConfig, "hyperparameter " + to_string() + " is not numeric");
}

std::int64_t ParamValue::as_int() const {
  if (is_int()) return std::get<std::int64_t>(value_);
  if (is_real()) {
    const double x = std::get<double>(value_);
    if (x == std::floor(x)) return static_cast<std::int64_t>(x);
  }
  throw Error(ErrorCode::kConfig, "hyperparameter " + to_string() + " is not an integer");
}

const std::string& ParamValue::as_text() const {
  if (!is_text()) throw Error(ErrorCode::kConfig, "hyperparameter " + to_string() + " is not text");
  return std::get<std::string>(value_);
}

std::string ParamValue::to_string() const {
  if (is_none()) return "None";
  if (is_int()) return std::to_string(std::get<std::int64_t>(value_));
  if (is_real()) return format_double(std::get<double>(value_));
  return std::get<std::string>(value_);
}

double ModelConfig::real(std::string_view name, double fallback) const {
  auto it = params.find(std::string(name));
  if (it == params.end() || it->second.is_none()) return fallback;
  return it->second.as_real();
}

std::int64_t ModelConfig::integer(std::string_view name, std::int64_t fallback) const {
  auto it = params.find(std::string(name));
  if (it == params.end() || it->second.is_none()) return fallback;
  return it->second.as_int();
}

std::string ModelConfig::text(std::string_view name, std::string_view fallback) const {
  auto it = params.find(std::string(name));
  if (it == params.end() || it->second.is_none()) return std::string(fallback);
  return it->second.is_text() ? it->second.as_text() : it->second.to_string();
}

bool ModelConfig::is_none(std::string_view name) const {
  auto it = params.find(std::string(name));
  return it == params.end() || it->second.is_none();
}

std::string ModelConfig::describe() const {
  std::string out(algorithm_name(algorithm));
  out += "{";
  bool first = true;
  for (const auto& [name, value] : params) {
    if (!first) out += ",";
    first = false;
    out += name + "=" + value.to_string();
  }
  out += first ? "" : ",";
  out += "class_weight=";
  out += class_weighting == ClassWeighting::kBalanced ? "balanced" : "None";
  out += ",seed=" + std::to_string(seed) + "}";
  return out;
}

ModelConfig make_config(Algorithm algorithm, const Hyperparameters& point,
                        std::uint64_t default_seed) {
  ModelConfig config;
  config.algorithm = algorithm;
  config.seed = default_seed;
  for (const auto& [name, value] : point) {
    if (name == "seed") {
      config.seed = static_cast<std::uint64_t>(value.as_int());
    } else if (name == "class_weight") {
      if (value.is_none()) {
        config.class_weighting = ClassWeighting::kNone;
      } else if (value.is_text() && value.as_text() == "balanced") {
        config.class_weighting = ClassWeighting::kBalanced;
      } else {
        throw Error(ErrorCode::kConfig, "class_weight must be balanced or None");
      }
    } else {
      config.params[name] = value;
    }
  }
  return config;
}

const std::vector<std::string>& accepted_params(Algorithm algorithm) {
  static const std::vector<std::string> kSvm = {"kernel", "gamma", "C", "tol", "max_iter"};
  static const std::vector<std::string> kRf = {"n_estimators", "max_features", "max_depth",
                                               "criterion", "min_samples_split",
                                               "min_samples_leaf", "bootstrap"};
  static const std::vector<std::string> kXgb = {
      "n_estimators", "gamma",         "learning_rate",     "max_depth",
      "colsample_bytree", "reg_alpha", "reg_lambda",        "min_child_weight"};
  static const std::vector<std::string> kLgbm = {
      "n_estimators",     "learning_rate", "num_leaves",  "reg_alpha",
      "reg_lambda",       "colsample_bytree", "max_depth", "min_child_weight"};
  static const std::vector<std::string> kMlp = {
      "hidden_layer_sizes", "activation", "solver",   "alpha",           "learning_rate",
      "learning_rate_init", "max_iter",   "batch_size", "tol", "n_iter_no_change"};
  switch (algorithm) {
    case Algorithm::kSvm: return kSvm;
    case Algorithm::kRf: return kRf;
    case Algorithm::kXgb: return kXgb;
    case Algorithm::kLgbm: return kLgbm;
    case Algorithm::kMlp: return kMlp;
  }
  return kSvm;
}

void validate(const ModelConfig& config) {
  const auto& accepted = accepted_params(config.algorithm);
  for (const auto& [name, value] : config.params) {
    if (std::find(accepted.begin(), accepted.end(), name) == accepted.end()) {
      throw Error(ErrorCode::kConfig, std::string(algorithm_name(config.algorithm)) +
                                          ": unknown hyperparameter '" + name + "'");
    }
  }
  constexpr double kInf = std::numeric_limits<double>::max();
  switch (config.algorithm) {
    case Algorithm::kSvm:
      require_text(config, "kernel", {"rbf", "linear"});
      require_number(config, "gamma", 0.0, kInf);
      require_number(config, "C", 1e-12, kInf);
      require_number(config, "tol", 1e-15, kInf);
      require_number(config, "max_iter", 1, kInf);
      break;
    case Algorithm::kRf:
      require_number(config, "n_estimators", 1, kInf);
      require_text(config, "max_features", {"auto", "sqrt", "log2"}, true);
      require_number(config, "max_depth", 1, kInf, true);
      require_text(config, "criterion", {"gini", "entropy"});
      require_number(config, "min_samples_split", 2, kInf);
      require_number(config, "min_samples_leaf", 1, kInf);
      break;
    case Algorithm::kXgb:
    case Algorithm::kLgbm:
      require_number(config, "n_estimators", 0, kInf);
      require_number(config, "gamma", 0.0, kInf);
      require_number(config, "learning_rate", 1e-12, kInf);
      require_number(config, "max_depth", -1, kInf);
      require_number(config, "num_leaves", 2, kInf);
      require_number(config, "colsample_bytree", 1e-12, 1.0);
      require_number(config, "reg_alpha", 0.0, kInf, true);
      require_number(config, "reg_lambda", 0.0, kInf, true);
      require_number(config, "min_child_weight", 0.0, kInf);
      break;
    case Algorithm::kMlp:
      require_text(config, "activation", {"tanh", "relu"});
      require_text(config, "solver", {"sgd", "adam", "lbfgs"});
      require_number(config, "alpha", 0.0, kInf);
      require_text(config, "learning_rate", {"constant", "adaptive"});
      require_number(config, "learning_rate_init", 1e-12, kInf);
      require_number(config, "max_iter", 1, kInf);
      require_number(config, "batch_size", 1, kInf);
      require_number(config, "tol", 0.0, kInf);
      require_number(config, "n_iter_no_change", 1, kInf);
      break;
  }
}

}  // namespace mafus::learners
