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

#include "mafus/artifact.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mafus {

namespace {

using nlohmann::json;

constexpr int kBundleVersion = 1;

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

Matrix matrix_from(const json& j, std::size_t cols) {
  Matrix m(0, cols);
  for (const auto& row : j) {
    const auto values = row.get<std::vector<double>>();
    if (values.size() != cols) throw Error(ErrorCode::kParse, "background row has wrong width");
    m.append_row(values);
  }
  return m;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

std::string ModelArtifact::to_json() const {
  json doc;
  doc["version"] = kBundleVersion;
  doc["model"] = json::parse(model.to_json());
  doc["schema"] = json::parse(schema.to_json());
  doc["selected_features"] = selected;
  doc["scaler"] = json::parse(data::scaler_to_json(scaler));
  doc["categorical_codes"] = categorical_codes;
  doc["background"] = matrix_json(background.rows);
  doc["explain"] = {{"exact_cap", explain_options.exact_cap},
                    {"permutations", explain_options.permutations},
                    {"seed", explain_options.seed}};
  doc["seed"] = seed;
  doc["partition"] = partition ? json::parse(explain::partition_to_json(*partition)) : json();
  return doc.dump();
}

ModelArtifact ModelArtifact::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("artifact document: ") + e.what());
  }
  try {
    if (doc.value("version", 0) != kBundleVersion) {
      throw Error(ErrorCode::kParse, "unsupported artifact version");
    }
    ModelArtifact a{learners::TrainedModel::from_json(doc.at("model").dump()),
                    data::FeatureSchema::from_json(doc.at("schema").dump()),
                    doc.at("selected_features").get<std::vector<std::string>>(),
                    data::scaler_from_json(doc.at("scaler").dump()),
                    doc.at("categorical_codes").get<std::map<std::string, std::vector<double>>>(),
                    {},
                    {},
                    std::nullopt,
                    doc.at("seed").get<std::uint64_t>()};
    if (a.selected.size() != a.model.dims()) {
      throw Error(ErrorCode::kParse, "selected features disagree with model dimension");
    }
    a.background.rows = matrix_from(doc.at("background"), a.model.dims());
    const auto& ex = doc.at("explain");
    a.explain_options.exact_cap = ex.at("exact_cap").get<std::size_t>();
    a.explain_options.permutations = ex.at("permutations").get<std::size_t>();
    a.explain_options.seed = ex.at("seed").get<std::uint64_t>();
    if (!doc.at("partition").is_null()) {
      a.partition = explain::partition_from_json(doc.at("partition").dump());
    }
    return a;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("artifact document: ") + e.what());
  }
}

void ModelArtifact::save(const std::filesystem::path& path) const { write_file(path, to_json()); }

ModelArtifact ModelArtifact::load(const std::filesystem::path& path) {
  return from_json(read_file(path));
}

std::vector<double> ModelArtifact::prepare(const std::map<std::string, double>& raw) const {
  for (const auto& [name, value] : raw) {
    if (std::find(selected.begin(), selected.end(), name) == selected.end()) {
      throw Error(ErrorCode::kSchema, "'" + name + "' is not a model feature");
    }
  }
  std::vector<double> x;
  x.reserve(selected.size());
  for (const auto& name : selected) {
    const auto it = raw.find(name);
    if (it == raw.end()) throw Error(ErrorCode::kSchema, "missing feature '" + name + "'");
    const double value = it->second;
    if (!std::isfinite(value)) throw Error(ErrorCode::kContract, "'" + name + "' is not finite");
    const auto& column = schema.column(name);
    if (column.kind == data::ColumnKind::kCategorical) {
      bool known = false;
      if (!column.levels.empty()) {
        known = value >= 0 && value < static_cast<double>(column.levels.size()) &&
                value == std::floor(value);
      } else if (const auto codes = categorical_codes.find(name); codes != categorical_codes.end()) {
        known = std::find(codes->second.begin(), codes->second.end(), value) != codes->second.end();
      }
      if (!known) {
        throw Error(ErrorCode::kSchema, "'" + name + "' code " + format_double(value) +
                                            " is outside the training mapping");
      }
      x.push_back(value);
    } else {
      const auto* e = scaler.find(name);
      if (!e) {
        x.push_back(value);
      } else {
        x.push_back(e->stddev > 0.0 ? (value - e->mean) / e->stddev : value - e->mean);
      }
    }
  }
  return x;
}

}  // namespace mafus
