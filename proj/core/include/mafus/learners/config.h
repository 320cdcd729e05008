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

#ifndef MAFUS_LEARNERS_CONFIG_H_
#define MAFUS_LEARNERS_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mafus::learners {

enum class Algorithm { kSvm, kRf, kXgb, kLgbm, kMlp };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::kSvm, Algorithm::kRf, Algorithm::kXgb,
                                               Algorithm::kLgbm, Algorithm::kMlp};

std::string_view algorithm_name(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

// A hyperparameter value as it appears in a grid: None, integer, real or text.
class ParamValue {
 public:
  ParamValue() = default;
  ParamValue(std::nullptr_t) {}
  ParamValue(int v) : value_(static_cast<std::int64_t>(v)) {}
  ParamValue(std::int64_t v) : value_(v) {}
  ParamValue(double v) : value_(v) {}
  ParamValue(const char* v) : value_(std::string(v)) {}
  ParamValue(std::string v) : value_(std::move(v)) {}

  bool is_none() const { return std::holds_alternative<std::monostate>(value_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(value_); }
  bool is_real() const { return std::holds_alternative<double>(value_); }
  bool is_text() const { return std::holds_alternative<std::string>(value_); }
  bool is_number() const { return is_int() || is_real(); }

  double as_real() const;
  std::int64_t as_int() const;
  const std::string& as_text() const;

  // Canonical text: "None", integers in decimal, reals in shortest form.
  std::string to_string() const;

  friend bool operator==(const ParamValue&, const ParamValue&) = default;

 private:
  std::variant<std::monostate, std::int64_t, double, std::string> value_;
};

using Hyperparameters = std::map<std::string, ParamValue>;

enum class ClassWeighting { kNone, kBalanced };

struct ModelConfig {
  Algorithm algorithm = Algorithm::kSvm;
  Hyperparameters params;
  std::uint64_t seed = 1;
  ClassWeighting class_weighting = ClassWeighting::kNone;

  // Typed accessors; a missing or None entry yields the fallback.
  double real(std::string_view name, double fallback) const;
  std::int64_t integer(std::string_view name, std::int64_t fallback) const;
  std::string text(std::string_view name, std::string_view fallback) const;
  bool is_none(std::string_view name) const;

  std::string describe() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Builds a config from one grid point. The `seed` and `class_weight` axes set
// the dedicated fields; everything else lands in `params`.
ModelConfig make_config(Algorithm algorithm, const Hyperparameters& point,
                        std::uint64_t default_seed = 1);

// Hyperparameter names each algorithm accepts.
const std::vector<std::string>& accepted_params(Algorithm algorithm);

// Throws a config error on unknown names or values outside the domain.
void validate(const ModelConfig& config);

}  // namespace mafus::learners

#endif  // MAFUS_LEARNERS_CONFIG_H_
