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

#include "mafus/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace mafus::data {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n')) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "NA"; }

// Splits CSV text into records of fields, honoring double-quoted fields.
std::vector<std::vector<std::string>> tokenize_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(trim(field));
      field.clear();
      any = true;
    } else if (c == '\n') {
      record.push_back(trim(field));
      field.clear();
      if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
      record.clear();
      any = false;
    } else {
      field.push_back(c);
      any = true;
    }
  }
  if (any || !field.empty()) {
    record.push_back(trim(field));
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
  }
  // Strip a UTF-8 byte-order mark from the first header cell.
  if (!records.empty() && !records[0].empty() && records[0][0].rfind("\xEF\xBB\xBF", 0) == 0) {
    records[0][0] = records[0][0].substr(3);
  }
  return records;
}

int parse_label(const std::string& cell, std::size_t row, const std::string& column) {
  if (auto v = parse_number(cell)) {
    if (*v == 0.0) return 0;
    if (*v == 1.0) return 1;
  } else {
    const std::string l = lower(cell);
    if (l.find("yes") != std::string::npos) return 1;
    if (l.find("no") != std::string::npos) return 0;
  }
  throw Error(ErrorCode::kParse, "row " + std::to_string(row) + ", column '" + column +
                                     "': label '" + cell + "' is not 0/1 or No/Yes");
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace

std::string_view column_kind_name(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kContinuous: return "continuous";
    case ColumnKind::kCategorical: return "categorical";
    case ColumnKind::kLabel: return "label";
  }
  return "continuous";
}

ColumnKind parse_column_kind(std::string_view text) {
  if (text == "continuous") return ColumnKind::kContinuous;
  if (text == "categorical") return ColumnKind::kCategorical;
  if (text == "label") return ColumnKind::kLabel;
  throw Error(ErrorCode::kSchema, "unknown column kind '" + std::string(text) + "'");
}

FeatureSchema::FeatureSchema(std::vector<Column> columns) : columns_(std::move(columns)) {
  std::set<std::string> seen;
  std::optional<std::size_t> label;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const Column& c = columns_[i];
    if (c.name.empty()) throw Error(ErrorCode::kSchema, "column with empty name");
    if (!seen.insert(c.name).second) {
      throw Error(ErrorCode::kSchema, "duplicate column '" + c.name + "'");
    }
    if (c.kind == ColumnKind::kLabel) {
      if (label) throw Error(ErrorCode::kSchema, "more than one label column");
      label = i;
    }
  }
  if (!label) throw Error(ErrorCode::kSchema, "schema has no label column");
  label_index_ = *label;
}

FeatureSchema FeatureSchema::cohort_default() {
  static const char* kContinuous[] = {
      "GOT",           "Weight", "Hypertension", "Blood lipids", "SBP",
      "DBP",           "TC",     "Triglycerides", "Blood Glucose", "Alkaline Phosphatase",
      "HDL-C",         "LDL-C",  "GPT",           "GGT",           "Age",
      "HOMA",          "Residual Cholesterol",    "BMI"};
  static const char* kCategorical[] = {"Education", "Job",   "Marital Status",
                                       "Diabetes condition", "Smoke", "Gender"};
  std::vector<Column> columns;
  for (const char* name : kContinuous) columns.push_back({name, ColumnKind::kContinuous, {}});
  columns.push_back({"Status", ColumnKind::kLabel, {}});
  for (const char* name : kCategorical) columns.push_back({name, ColumnKind::kCategorical, {}});
  return FeatureSchema(std::move(columns));
}

FeatureSchema FeatureSchema::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("schema document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("columns") || !doc["columns"].is_array()) {
    throw Error(ErrorCode::kSchema, "schema document needs a 'columns' array");
  }
  std::vector<Column> columns;
  for (const auto& entry : doc["columns"]) {
    Column c;
    c.name = entry.at("name").get<std::string>();
    c.kind = parse_column_kind(entry.at("kind").get<std::string>());
    if (entry.contains("levels")) c.levels = entry["levels"].get<std::vector<std::string>>();
    columns.push_back(std::move(c));
  }
  if (doc.contains("label")) {
    const auto label = doc["label"].get<std::string>();
    bool found = false;
    for (auto& c : columns) {
      if (c.name == label) {
        c.kind = ColumnKind::kLabel;
        found = true;
      }
    }
    if (!found) throw Error(ErrorCode::kSchema, "label column '" + label + "' not listed");
  }
  return FeatureSchema(std::move(columns));
}

FeatureSchema FeatureSchema::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open schema file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string FeatureSchema::to_json() const {
  json doc;
  doc["label"] = label().name;
  doc["columns"] = json::array();
  for (const auto& c : columns_) {
    json entry = {{"name", c.name}, {"kind", std::string(column_kind_name(c.kind))}};
    if (!c.levels.empty()) entry["levels"] = c.levels;
    doc["columns"].push_back(std::move(entry));
  }
  return doc.dump(2);
}

std::vector<Column> FeatureSchema::features() const {
  std::vector<Column> out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i != label_index_) out.push_back(columns_[i]);
  }
  return out;
}

std::vector<std::string> FeatureSchema::feature_names() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i != label_index_) out.push_back(columns_[i].name);
  }
  return out;
}

std::optional<std::size_t> FeatureSchema::find(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

Column& FeatureSchema::column(std::string_view name) {
  auto i = find(name);
  if (!i) throw Error(ErrorCode::kSchema, "unknown column '" + std::string(name) + "'");
  return columns_[*i];
}

const Column& FeatureSchema::column(std::string_view name) const {
  auto i = find(name);
  if (!i) throw Error(ErrorCode::kSchema, "unknown column '" + std::string(name) + "'");
  return columns_[*i];
}

std::optional<std::size_t> Cohort::feature_index(std::string_view name) const {
  const auto names = schema.feature_names();
  for (std::size_t j = 0; j < names.size(); ++j) {
    if (names[j] == name) return j;
  }
  return std::nullopt;
}

Cohort Cohort::select_rows(std::span<const std::size_t> indices) const {
  Cohort out;
  out.schema = schema;
  out.rows = rows.select_rows(indices);
  out.labels.reserve(indices.size());
  out.row_ids.reserve(indices.size());
  for (std::size_t i : indices) {
    out.labels.push_back(labels[i]);
    out.row_ids.push_back(row_ids[i]);
  }
  return out;
}

Cohort Cohort::select_features(std::span<const std::string> names) const {
  std::vector<std::size_t> cols;
  std::vector<Column> columns;
  for (const auto& name : names) {
    auto j = feature_index(name);
    if (!j) throw Error(ErrorCode::kSchema, "unknown feature '" + name + "'");
    cols.push_back(*j);
    columns.push_back(schema.column(name));
  }
  columns.push_back(schema.label());
  Cohort out;
  out.schema = FeatureSchema(std::move(columns));
  out.rows = rows.select_cols(cols);
  out.labels = labels;
  out.row_ids = row_ids;
  return out;
}

std::size_t Cohort::count_label(int label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

const ScalerStats::Entry* ScalerStats::find(std::string_view name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

Cohort parse_csv(std::string_view text, const FeatureSchema& schema, CsvMode mode) {
  const auto records = tokenize_csv(text);
  if (records.empty()) throw Error(ErrorCode::kEmptyInput, "CSV input is empty");

  const auto& header = records[0];
  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!schema.find(header[i])) {
      if (mode == CsvMode::kScoring) continue;
      throw Error(ErrorCode::kSchema, "unknown column '" + header[i] + "'");
    }
    if (!position.emplace(header[i], i).second) {
      throw Error(ErrorCode::kSchema, "duplicate column '" + header[i] + "'");
    }
  }
  for (const auto& c : schema.columns()) {
    if (!position.contains(c.name) && !(mode == CsvMode::kScoring && c.kind == ColumnKind::kLabel)) {
      throw Error(ErrorCode::kSchema, "missing column '" + c.name + "'");
    }
  }

  const std::size_t n = records.size() - 1;
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != header.size()) {
      throw Error(ErrorCode::kParse, "row " + std::to_string(r) + ": expected " +
                                         std::to_string(header.size()) + " cells, found " +
                                         std::to_string(records[r].size()));
    }
  }

  Cohort cohort;
  cohort.schema = schema;
  const auto features = schema.features();
  cohort.rows = Matrix(n, features.size());
  cohort.labels.assign(n, kMissingLabel);
  cohort.row_ids.resize(n);
  std::iota(cohort.row_ids.begin(), cohort.row_ids.end(), 0);

  const Column& label = schema.label();
  if (const auto it = position.find(label.name); it != position.end()) {
    for (std::size_t r = 0; r < n; ++r) {
      const auto& cell = records[r + 1][it->second];
      if (!is_missing(cell)) cohort.labels[r] = parse_label(cell, r + 1, label.name);
    }
  }

  for (std::size_t j = 0; j < features.size(); ++j) {
    const Column& col = features[j];
    const std::size_t pos = position.at(col.name);
    bool all_numeric = true;
    for (std::size_t r = 0; r < n; ++r) {
      const auto& cell = records[r + 1][pos];
      if (!is_missing(cell) && !parse_number(cell)) {
        all_numeric = false;
        break;
      }
    }
    if (col.kind == ColumnKind::kContinuous || (all_numeric && col.levels.empty())) {
      for (std::size_t r = 0; r < n; ++r) {
        const auto& cell = records[r + 1][pos];
        if (is_missing(cell)) {
          cohort.rows(r, j) = std::numeric_limits<double>::quiet_NaN();
          continue;
        }
        auto v = parse_number(cell);
        if (!v) {
          throw Error(ErrorCode::kParse, "row " + std::to_string(r + 1) + ", column '" +
                                             col.name + "': cannot parse '" + cell + "'");
        }
        cohort.rows(r, j) = *v;
      }
      continue;
    }
    // Text-coded categorical.
    Column& target = cohort.schema.column(col.name);
    const bool frozen = !target.levels.empty();
    for (std::size_t r = 0; r < n; ++r) {
      const auto& cell = records[r + 1][pos];
      if (is_missing(cell)) {
        cohort.rows(r, j) = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      auto it = std::find(target.levels.begin(), target.levels.end(), cell);
      if (it == target.levels.end()) {
        if (frozen) {
          throw Error(ErrorCode::kParse, "row " + std::to_string(r + 1) + ", column '" +
                                             col.name + "': unknown level '" + cell + "'");
        }
        target.levels.push_back(cell);
        it = target.levels.end() - 1;
      }
      cohort.rows(r, j) = static_cast<double>(it - target.levels.begin());
    }
  }
  return cohort;
}

Cohort load_csv(const std::filesystem::path& path, const FeatureSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), schema);
}

std::string to_csv(const Cohort& cohort) {
  std::ostringstream out;
  const auto& columns = cohort.schema.columns();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << (i ? "," : "") << csv_escape(columns[i].name);
  }
  out << '\n';
  for (std::size_t r = 0; r < cohort.size(); ++r) {
    std::size_t j = 0;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out << ',';
      if (i == cohort.schema.label_index()) {
        if (cohort.labels[r] != kMissingLabel) out << cohort.labels[r];
        continue;
      }
      const double v = cohort.rows(r, j++);
      if (std::isnan(v)) continue;
      const auto& levels = columns[i].levels;
      if (!levels.empty()) {
        out << csv_escape(levels.at(static_cast<std::size_t>(v)));
      } else {
        out << format_double(v);
      }
    }
    out << '\n';
  }
  return out.str();
}

Cohort drop_incomplete(const Cohort& cohort) {
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < cohort.size(); ++r) {
    if (cohort.labels[r] == kMissingLabel) continue;
    const auto row = cohort.rows.row(r);
    if (std::any_of(row.begin(), row.end(), [](double v) { return std::isnan(v); })) continue;
    keep.push_back(r);
  }
  if (keep.empty() && cohort.size() > 0) {
    throw Error(ErrorCode::kEmptyResult, "every row has a missing cell");
  }
  if (keep.empty()) throw Error(ErrorCode::kEmptyResult, "cohort is empty");
  return cohort.select_rows(keep);
}

Cohort encode_categoricals(const Cohort& cohort) {
  Cohort out = cohort;
  const auto features = cohort.schema.features();
  for (std::size_t j = 0; j < features.size(); ++j) {
    const Column& col = features[j];
    if (col.kind != ColumnKind::kCategorical || col.levels.empty()) continue;
    // Recode by first appearance in the current row order; unseen levels keep
    // trailing codes so the mapping stays total.
    std::vector<std::size_t> order;
    std::vector<int> new_code(col.levels.size(), -1);
    for (std::size_t r = 0; r < cohort.size(); ++r) {
      const double v = cohort.rows(r, j);
      if (std::isnan(v)) continue;
      const auto code = static_cast<std::size_t>(v);
      if (new_code[code] < 0) {
        new_code[code] = static_cast<int>(order.size());
        order.push_back(code);
      }
    }
    for (std::size_t code = 0; code < col.levels.size(); ++code) {
      if (new_code[code] < 0) {
        new_code[code] = static_cast<int>(order.size());
        order.push_back(code);
      }
    }
    std::vector<std::string> levels;
    for (std::size_t code : order) levels.push_back(col.levels[code]);
    out.schema.column(col.name).levels = std::move(levels);
    for (std::size_t r = 0; r < cohort.size(); ++r) {
      const double v = cohort.rows(r, j);
      if (!std::isnan(v)) out.rows(r, j) = new_code[static_cast<std::size_t>(v)];
    }
  }
  return out;
}

ScalerStats fit_scaler(const Cohort& cohort) {
  if (cohort.size() == 0) throw Error(ErrorCode::kContract, "cannot fit scaler on empty cohort");
  ScalerStats stats;
  const auto features = cohort.schema.features();
  const double n = static_cast<double>(cohort.size());
  for (std::size_t j = 0; j < features.size(); ++j) {
    if (features[j].kind != ColumnKind::kContinuous) continue;
    double sum = 0.0;
    for (std::size_t r = 0; r < cohort.size(); ++r) sum += cohort.rows(r, j);
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t r = 0; r < cohort.size(); ++r) {
      const double d = cohort.rows(r, j) - mean;
      ss += d * d;
    }
    stats.entries.push_back({features[j].name, mean, std::sqrt(ss / n)});
  }
  return stats;
}

Cohort apply_scaler(const Cohort& cohort, const ScalerStats& stats) {
  Cohort out = cohort;
  const auto features = cohort.schema.features();
  for (std::size_t j = 0; j < features.size(); ++j) {
    if (features[j].kind != ColumnKind::kContinuous) continue;
    const auto* e = stats.find(features[j].name);
    if (!e) {
      throw Error(ErrorCode::kContract,
                  "scaler stats missing feature '" + features[j].name + "'");
    }
    for (std::size_t r = 0; r < cohort.size(); ++r) {
      const double shifted = cohort.rows(r, j) - e->mean;
      out.rows(r, j) = e->stddev > 0.0 ? shifted / e->stddev : shifted;
    }
  }
  return out;
}

double unscale(const ScalerStats& stats, std::string_view feature, double value) {
  const auto* e = stats.find(feature);
  if (!e) return value;
  return e->stddev > 0.0 ? value * e->stddev + e->mean : value + e->mean;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> plan_split(
    std::span<const int> labels, double ratio, std::uint64_t seed, bool stratified) {
  const std::size_t n = labels.size();
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::kContract, "split ratio must lie in (0, 1)");
  }
  if (n < 2) throw Error(ErrorCode::kSizing, "split needs at least two rows");
  const auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
  if (n_train == 0 || n_train == n) {
    throw Error(ErrorCode::kSizing, "split of " + std::to_string(n) + " rows at ratio " +
                                        format_double(ratio) + " leaves one side empty");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  if (!stratified) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  } else {
    // Per-class quotas by largest remainder so they sum to n_train exactly.
    std::vector<std::vector<std::size_t>> members(2);
    for (std::size_t i = 0; i < n; ++i) members[labels[i] == 1 ? 1 : 0].push_back(i);
    std::size_t quota[2];
    double remainder[2];
    std::size_t assigned = 0;
    for (int c = 0; c < 2; ++c) {
      const double exact = ratio * static_cast<double>(members[c].size());
      quota[c] = static_cast<std::size_t>(std::floor(exact));
      remainder[c] = exact - static_cast<double>(quota[c]);
      assigned += quota[c];
    }
    while (assigned < n_train) {
      const int c = remainder[1] > remainder[0] ? 1 : 0;
      const int pick = quota[c] < members[c].size() ? c : 1 - c;
      ++quota[pick];
      remainder[pick] = -1.0;
      ++assigned;
    }
    for (int c = 0; c < 2; ++c) {
      std::shuffle(members[c].begin(), members[c].end(), rng);
      train.insert(train.end(), members[c].begin(),
                   members[c].begin() + static_cast<std::ptrdiff_t>(quota[c]));
      test.insert(test.end(), members[c].begin() + static_cast<std::ptrdiff_t>(quota[c]),
                  members[c].end());
    }
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

SplitPair split(const Cohort& cohort, double ratio, std::uint64_t seed, bool stratified) {
  auto [train, test] = plan_split(cohort.labels, ratio, seed, stratified);
  SplitPair out;
  out.train = cohort.select_rows(train);
  out.test = cohort.select_rows(test);
  out.seed = seed;
  out.ratio = ratio;
  out.train_index = std::move(train);
  out.test_index = std::move(test);
  return out;
}

std::string scaler_to_json(const ScalerStats& stats) {
  json doc = json::array();
  for (const auto& e : stats.entries) {
    doc.push_back({{"name", e.name}, {"mean", e.mean}, {"stddev", e.stddev}});
  }
  return doc.dump();
}

ScalerStats scaler_from_json(std::string_view text) {
  ScalerStats stats;
  for (const auto& e : json::parse(text)) {
    stats.entries.push_back(
        {e.at("name").get<std::string>(), e.at("mean").get<double>(), e.at("stddev").get<double>()});
  }
  return stats;
}

}  // namespace mafus::data
