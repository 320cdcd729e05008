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

#ifndef MAFUS_DATA_H_
#define MAFUS_DATA_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mafus/common.h"

namespace mafus::data {

enum class ColumnKind { kContinuous, kCategorical, kLabel };

std::string_view column_kind_name(ColumnKind kind);
ColumnKind parse_column_kind(std::string_view text);

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::kContinuous;
  // Text levels of a categorical column; level i is encoded as code i. Empty
  // for numerically coded categoricals.
  std::vector<std::string> levels;

  friend bool operator==(const Column&, const Column&) = default;
};

// Ordered column list with exactly one label column and unique names.
class FeatureSchema {
 public:
  FeatureSchema() = default;
  explicit FeatureSchema(std::vector<Column> columns);

  // The 25-column mortality cohort layout (18 continuous, 6 categorical,
  // Status as label).
  static FeatureSchema cohort_default();
  static FeatureSchema from_json(std::string_view text);
  static FeatureSchema load(const std::filesystem::path& path);
  std::string to_json() const;

  const std::vector<Column>& columns() const { return columns_; }
  const Column& label() const { return columns_[label_index_]; }
  std::size_t label_index() const { return label_index_; }

  // Non-label columns, in schema order.
  std::vector<Column> features() const;
  std::vector<std::string> feature_names() const;
  std::optional<std::size_t> find(std::string_view name) const;
  Column& column(std::string_view name);
  const Column& column(std::string_view name) const;

  friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;

 private:
  std::vector<Column> columns_;
  std::size_t label_index_ = 0;
};

inline constexpr int kMissingLabel = -1;

// n x d feature matrix plus binary labels. Feature column j of `rows` is the
// j-th non-label column of `schema`. Before cleaning, missing cells are NaN and
// missing labels are kMissingLabel.
struct Cohort {
  FeatureSchema schema;
  Matrix rows;
  std::vector<int> labels;
  std::vector<std::int64_t> row_ids;

  std::size_t size() const { return labels.size(); }
  std::size_t dims() const { return rows.cols(); }
  std::vector<std::string> feature_names() const { return schema.feature_names(); }
  std::optional<std::size_t> feature_index(std::string_view name) const;

  Cohort select_rows(std::span<const std::size_t> indices) const;
  // Projects onto the named features (schema order of `names` is kept).
  Cohort select_features(std::span<const std::string> names) const;

  std::size_t count_label(int label) const;
  friend bool operator==(const Cohort&, const Cohort&) = default;
};

struct ScalerStats {
  struct Entry {
    std::string name;
    double mean = 0.0;
    double stddev = 0.0;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  std::vector<Entry> entries;

  const Entry* find(std::string_view name) const;
  friend bool operator==(const ScalerStats&, const ScalerStats&) = default;
};

struct SplitPair {
  Cohort train;
  Cohort test;
  std::uint64_t seed = 0;
  double ratio = 0.0;
  // Positions of the train/test rows in the source cohort, ascending.
  std::vector<std::size_t> train_index;
  std::vector<std::size_t> test_index;
};

// Parses a UTF-8 CSV whose header matches the schema's column names in any
// order. Empty cells and `NA` are missing. Categorical columns whose cells are
// all numeric stay numeric; otherwise text is coded by the column's preset
// levels (unknown text is a parse error) or by first appearance.
Cohort load_csv(const std::filesystem::path& path, const FeatureSchema& schema);
enum class CsvMode {
  kStrict,   // every schema column present, no others
  kScoring,  // extra columns skipped; the label may be absent (all missing)
};
Cohort parse_csv(std::string_view text, const FeatureSchema& schema,
                 CsvMode mode = CsvMode::kStrict);

// Writes rows back out in schema order, decoding text levels.
std::string to_csv(const Cohort& cohort);

Cohort drop_incomplete(const Cohort& cohort);
Cohort encode_categoricals(const Cohort& cohort);

ScalerStats fit_scaler(const Cohort& cohort);
Cohort apply_scaler(const Cohort& cohort, const ScalerStats& stats);
// Maps one standardized value of `feature` back to feature units.
double unscale(const ScalerStats& stats, std::string_view feature, double value);

// Row positions for a seeded split; |train| = round(ratio * n).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> plan_split(
    std::span<const int> labels, double ratio, std::uint64_t seed, bool stratified);
SplitPair split(const Cohort& cohort, double ratio, std::uint64_t seed,
                bool stratified = false);

std::string scaler_to_json(const ScalerStats& stats);
ScalerStats scaler_from_json(std::string_view text);

}  // namespace mafus::data

#endif  // MAFUS_DATA_H_
