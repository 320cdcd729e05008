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

#ifndef MAFUS_ARTIFACT_H_
#define MAFUS_ARTIFACT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mafus/data.h"
#include "mafus/explain.h"
#include "mafus/learners/model.h"

namespace mafus {

// Everything needed to score and explain raw patient records: the fitted
// model plus the preprocessing it was trained behind.
struct ModelArtifact {
  learners::TrainedModel model;
  data::FeatureSchema schema;
  std::vector<std::string> selected;  // model feature order
  data::ScalerStats scaler;
  // Codes seen in training for numerically coded categoricals.
  std::map<std::string, std::vector<double>> categorical_codes;
  explain::BackgroundSet background;  // standardized, selected features
  explain::ExplainOptions explain_options;
  std::optional<explain::PartitionAB> partition;  // stored test explanations
  std::uint64_t seed = 1;

  std::string to_json() const;
  static ModelArtifact from_json(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static ModelArtifact load(const std::filesystem::path& path);

  // Standardized model input for one record given in raw units, keyed by
  // feature name. Throws kSchema for unknown or missing features and for
  // categorical codes outside the training mapping, kContract for non-finite
  // values.
  std::vector<double> prepare(const std::map<std::string, double>& raw) const;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace mafus

#endif  // MAFUS_ARTIFACT_H_
