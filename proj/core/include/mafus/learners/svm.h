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

#ifndef MAFUS_LEARNERS_SVM_H_
#define MAFUS_LEARNERS_SVM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "mafus/common.h"
#include "mafus/learners/config.h"
#include "mafus/learners/model.h"

namespace mafus::learners {

enum class KernelType { kRbf, kLinear };

struct SvmParams {
  KernelType kernel = KernelType::kRbf;
  double gamma = 0.0;  // <= 0 means 1/d
  double c = 1.0;
  double tol = 1e-3;
  std::size_t max_iter = 0;  // 0 means max(10^7, 100 n)
  ClassWeighting class_weighting = ClassWeighting::kNone;

  static SvmParams from_config(const ModelConfig& config);
};

// Soft-margin kernel SVM. score(x) = sum_i coef_i K(sv_i, x) + bias, the
// signed decision margin; class 1 when score >= 0.
class SvmModel final : public Classifier {
 public:
  SvmModel(KernelType kernel, double gamma, Matrix support_vectors, std::vector<double> coef,
           double bias);

  double score(std::span<const double> x) const override;
  double threshold() const override { return 0.0; }
  std::string kind() const override { return "svm"; }
  std::string parameters_json() const override;
  static SvmModel from_parameters(std::string_view text);

  KernelType kernel() const { return kernel_; }
  double gamma() const { return gamma_; }
  const Matrix& support_vectors() const { return support_vectors_; }
  const std::vector<double>& coef() const { return coef_; }
  double bias() const { return bias_; }

 private:
  KernelType kernel_;
  double gamma_;
  Matrix support_vectors_;
  std::vector<double> coef_;  // alpha_i * y_i
  double bias_;
  std::vector<double> primal_;  // linear kernel only: sum_i coef_i sv_i
};

// Dual solution kept alongside the model for feasibility checks.
struct SvmSolution {
  std::vector<double> alpha;    // per training sample
  std::vector<double> upper;    // per-sample box bound C_i
  std::vector<int> signed_labels;  // +1 / -1
  std::size_t iterations = 0;
  bool converged = false;
  double final_gap = 0.0;  // max KKT violation m(alpha) - M(alpha)
};

double kernel_value(KernelType kernel, double gamma, std::span<const double> a,
                    std::span<const double> b);

// Sequential minimal optimization with second-order working-set selection.
SvmModel fit_svm(const SvmParams& params, const Matrix& x, std::span<const int> labels,
                 SvmSolution* solution = nullptr);

}  // namespace mafus::learners

#endif  // MAFUS_LEARNERS_SVM_H_
