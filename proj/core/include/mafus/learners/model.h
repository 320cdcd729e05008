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

#ifndef MAFUS_LEARNERS_MODEL_H_
#define MAFUS_LEARNERS_MODEL_H_

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mafus/common.h"
#include "mafus/data.h"
#include "mafus/learners/config.h"

namespace mafus::learners {

// Learned parameters of one fitted classifier. Implementations are immutable
// after construction, so score() may be called concurrently.
class Classifier {
 public:
  virtual ~Classifier() = default;

  // Real-valued ranking score, monotone in positive-class confidence.
  virtual double score(std::span<const double> x) const = 0;
  // predict(x) = 1 iff score(x) >= threshold().
  virtual double threshold() const = 0;
  // Tag stored in artifacts ("svm", "rf", ..., "constant", "linear").
  virtual std::string kind() const = 0;
  // Learned parameters as a JSON object text.
  virtual std::string parameters_json() const = 0;

  // Scores every row of `x` into `out`.
  virtual void score_batch(const Matrix& x, std::span<double> out) const;
};

// Always predicts one class; produced when training labels are single-class.
class ConstantClassifier final : public Classifier {
 public:
  explicit ConstantClassifier(int label) : label_(label) {}

  double score(std::span<const double>) const override { return label_ == 1 ? 1.0 : 0.0; }
  double threshold() const override { return 0.5; }
  std::string kind() const override { return "constant"; }
  std::string parameters_json() const override;
  int label() const { return label_; }

 private:
  int label_;
};

// score(x) = w . x + b, predicting 1 when the score is >= threshold.
class LinearClassifier final : public Classifier {
 public:
  LinearClassifier(std::vector<double> weights, double bias, double threshold = 0.0)
      : weights_(std::move(weights)), bias_(bias), threshold_(threshold) {}

  double score(std::span<const double> x) const override;
  double threshold() const override { return threshold_; }
  std::string kind() const override { return "linear"; }
  std::string parameters_json() const override;

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }

 private:
  std::vector<double> weights_;
  double bias_;
  double threshold_;
};

class TrainedModel {
 public:
  TrainedModel(std::shared_ptr<const Classifier> impl, ModelConfig config, std::size_t dims,
               bool degenerate = false);

  Algorithm algorithm() const { return config_.algorithm; }
  const ModelConfig& config() const { return config_; }
  std::size_t dims() const { return dims_; }
  bool degenerate() const { return degenerate_; }

  double score(std::span<const double> x) const;
  int predict(std::span<const double> x) const;
  double threshold() const { return impl_->threshold(); }
  std::vector<double> score_all(const Matrix& x) const;
  std::vector<int> predict_all(const Matrix& x) const;

  const Classifier& classifier() const { return *impl_; }
  template <typename T>
  const T* as() const {
    return dynamic_cast<const T*>(impl_.get());
  }

  std::string to_json() const;
  static TrainedModel from_json(std::string_view text);

 private:
  void check_dims(std::size_t n) const;

  std::shared_ptr<const Classifier> impl_;
  ModelConfig config_;
  std::size_t dims_;
  bool degenerate_;
};

// Trains the configured algorithm. Single-class labels give a degenerate
// constant model; non-finite features are a contract error.
TrainedModel fit(const ModelConfig& config, const Matrix& x, std::span<const int> labels);
TrainedModel fit(const ModelConfig& config, const data::Cohort& train);

// Per-sample weights for class_weighting=balanced: n / (2 * n_class).
std::vector<double> class_weights(std::span<const int> labels, ClassWeighting weighting);

}  // namespace mafus::learners

#endif  // MAFUS_LEARNERS_MODEL_H_
