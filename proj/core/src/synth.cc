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

#include "mafus/synth.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string_view>

namespace mafus::synth {

namespace {

struct Gaussian {
  std::string_view name;
  double mean;
  double stddev;
};

struct Categorical {
  std::string_view name;
  int levels;
  double first_level_weight;  // weight of code 0; the rest share the remainder
};

constexpr Gaussian kContinuous[] = {
    {"GOT", 25, 8},
    {"Weight", 72, 14},
    {"Hypertension", 0.35, 0.48},
    {"Blood lipids", 5, 1},
    {"SBP", 130, 18},
    {"DBP", 80, 10},
    {"TC", 200, 38},
    {"Triglycerides", 120, 60},
    {"Blood Glucose", 100, 22},
    {"Alkaline Phosphatase", 80, 25},
    {"HDL-C", 52, 14},
    {"LDL-C", 125, 33},
    {"GPT", 24, 10},
    {"GGT", 30, 18},
    {"Age", 55, 12},
    {"HOMA", 2.5, 1.4},
    {"Residual Cholesterol", 24, 12},
    {"BMI", 27, 4.5},
};

constexpr Categorical kCategorical[] = {
    {"Education", 4, 0.25},
    {"Job", 5, 0.2},
    {"Marital Status", 4, 0.25},
    {"Diabetes condition", 2, 0.9},
    {"Smoke", 3, 0.5},
    {"Gender", 2, 0.5},
};

constexpr std::string_view kShifted[] = {"Age", "Blood Glucose", "HOMA"};
constexpr std::string_view kSecondary[] = {"HDL-C", "BMI", "Weight", "LDL-C", "TC", "Triglycerides"};

}  // namespace

data::Cohort gen_synthetic(const SynthSpec& spec) {
  if (!(spec.prevalence > 0.0 && spec.prevalence < 1.0)) {
    throw Error(ErrorCode::kContract, "prevalence must lie in (0, 1)");
  }
  if (spec.n < 20) throw Error(ErrorCode::kContract, "synthetic cohort needs n >= 20");
  if (spec.missing_rows > spec.n) throw Error(ErrorCode::kContract, "more missing rows than rows");

  data::Cohort cohort;
  cohort.schema = data::FeatureSchema::cohort_default();
  const auto features = cohort.schema.features();
  const std::size_t d = features.size();
  cohort.rows = Matrix(spec.n, d);
  cohort.labels.assign(spec.n, 0);
  cohort.row_ids.resize(spec.n);
  std::iota(cohort.row_ids.begin(), cohort.row_ids.end(), std::int64_t{0});

  std::mt19937_64 rng(spec.seed);
  if (spec.exact_count) {
    const auto positives = static_cast<std::size_t>(std::llround(spec.prevalence * spec.n));
    std::vector<std::size_t> order(spec.n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < positives; ++i) cohort.labels[order[i]] = 1;
  } else {
    std::bernoulli_distribution draw(spec.prevalence);
    for (auto& y : cohort.labels) y = draw(rng) ? 1 : 0;
  }

  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t r = 0; r < spec.n; ++r) {
    for (std::size_t j = 0; j < d; ++j) {
      const std::string_view name = features[j].name;
      double value = 0.0;
      if (const auto* g = std::find_if(std::begin(kContinuous), std::end(kContinuous),
                                       [&](const Gaussian& c) { return c.name == name; });
          g != std::end(kContinuous)) {
        double z = normal(rng);
        if (cohort.labels[r] == 1) {
          if (std::find(std::begin(kShifted), std::end(kShifted), name) != std::end(kShifted)) {
            z += spec.signal;
          } else if (std::find(std::begin(kSecondary), std::end(kSecondary), name) != std::end(kSecondary)) {
            z += spec.secondary_signal;
          }
        }
        value = g->mean + g->stddev * z;
      } else if (const auto* c = std::find_if(std::begin(kCategorical), std::end(kCategorical),
                                              [&](const Categorical& k) { return k.name == name; });
                 c != std::end(kCategorical)) {
        const double u = unit(rng);
        if (u < c->first_level_weight) {
          value = 0.0;
        } else {
          const double rest = (u - c->first_level_weight) / (1.0 - c->first_level_weight);
          value = 1.0 + std::min(std::floor(rest * (c->levels - 1)), c->levels - 2.0);
        }
      } else {
        value = normal(rng);
      }
      cohort.rows(r, j) = value;
    }
  }

  if (spec.missing_rows > 0) {
    std::mt19937_64 holes(derive_seed(spec.seed, "synth-missing"));
    std::vector<std::size_t> order(spec.n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), holes);
    std::uniform_int_distribution<std::size_t> column(0, d - 1);
    for (std::size_t i = 0; i < spec.missing_rows; ++i) {
      cohort.rows(order[i], column(holes)) = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return cohort;
}

}  // namespace mafus::synth
