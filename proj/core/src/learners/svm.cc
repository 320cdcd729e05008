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

#include "mafus/learners/svm.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace mafus::learners {

namespace {

constexpr double kTau = 1e-12;
constexpr std::size_t kFullCacheLimit = 6000;

// Kernel rows for the solver: the full matrix when it fits, otherwise rows
// are recomputed on request.
class KernelRows {
 public:
  KernelRows(const Matrix& x, KernelType kernel, double gamma)
      : x_(x), kernel_(kernel), gamma_(gamma), n_(x.rows()) {
    diag_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) diag_[i] = kernel_value(kernel_, gamma_, x_.row(i), x_.row(i));
    if (n_ <= kFullCacheLimit) {
      full_.resize(n_ * n_);
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i; j < n_; ++j) {
          const double k = i == j ? diag_[i] : kernel_value(kernel_, gamma_, x_.row(i), x_.row(j));
          full_[i * n_ + j] = k;
          full_[j * n_ + i] = k;
        }
      }
    } else {
      scratch_[0].resize(n_);
      scratch_[1].resize(n_);
    }
  }

  // Valid until the next call with the same slot.
  const double* row(std::size_t i, int slot) {
    if (!full_.empty()) return full_.data() + i * n_;
    auto& buf = scratch_[slot];
    for (std::size_t j = 0; j < n_; ++j) buf[j] = kernel_value(kernel_, gamma_, x_.row(i), x_.row(j));
    return buf.data();
  }

  double diag(std::size_t i) const { return diag_[i]; }

 private:
  const Matrix& x_;
  KernelType kernel_;
  double gamma_;
  std::size_t n_;
  std::vector<double> diag_;
  std::vector<double> full_;
  std::vector<double> scratch_[2];
};

}  // namespace

double kernel_value(KernelType kernel, double gamma, std::span<const double> a,
                    std::span<const double> b) {
  if (kernel == KernelType::kLinear) {
    double dot = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
    return dot;
  }
  double dist = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    dist += diff * diff;
  }
  return std::exp(-gamma * dist);
}

SvmParams SvmParams::from_config(const ModelConfig& config) {
  SvmParams p;
  p.kernel = config.text("kernel", "rbf") == "linear" ? KernelType::kLinear : KernelType::kRbf;
  p.gamma = config.real("gamma", 0.0);
  p.c = config.real("C", 1.0);
  p.tol = config.real("tol", 1e-3);
  p.max_iter = static_cast<std::size_t>(config.integer("max_iter", 0));
  p.class_weighting = config.class_weighting;
  return p;
}

SvmModel::SvmModel(KernelType kernel, double gamma, Matrix support_vectors,
                   std::vector<double> coef, double bias)
    : kernel_(kernel),
      gamma_(gamma),
      support_vectors_(std::move(support_vectors)),
      coef_(std::move(coef)),
      bias_(bias) {
  if (kernel_ == KernelType::kLinear) {
    primal_.assign(support_vectors_.cols(), 0.0);
    for (std::size_t s = 0; s < support_vectors_.rows(); ++s) {
      for (std::size_t k = 0; k < primal_.size(); ++k) {
        primal_[k] += coef_[s] * support_vectors_(s, k);
      }
    }
  }
}

double SvmModel::score(std::span<const double> x) const {
  double sum = bias_;
  if (kernel_ == KernelType::kLinear) {
    for (std::size_t k = 0; k < primal_.size(); ++k) sum += primal_[k] * x[k];
    return sum;
  }
  for (std::size_t s = 0; s < support_vectors_.rows(); ++s) {
    sum += coef_[s] * kernel_value(kernel_, gamma_, support_vectors_.row(s), x);
  }
  return sum;
}

std::string SvmModel::parameters_json() const {
  nlohmann::json doc;
  doc["kernel"] = kernel_ == KernelType::kLinear ? "linear" : "rbf";
  doc["gamma"] = gamma_;
  doc["bias"] = bias_;
  doc["coef"] = coef_;
  doc["dims"] = support_vectors_.cols();
  doc["support_vectors"] = support_vectors_.data();
  return doc.dump();
}

SvmModel SvmModel::from_parameters(std::string_view text) {
  const auto doc = nlohmann::json::parse(text);
  const auto coef = doc.at("coef").get<std::vector<double>>();
  const auto dims = doc.at("dims").get<std::size_t>();
  const auto flat = doc.at("support_vectors").get<std::vector<double>>();
  if (flat.size() != coef.size() * dims) {
    throw Error(ErrorCode::kParse, "svm support vector block has the wrong size");
  }
  Matrix sv(coef.size(), dims);
  for (std::size_t s = 0; s < coef.size(); ++s) {
    for (std::size_t k = 0; k < dims; ++k) sv(s, k) = flat[s * dims + k];
  }
  const KernelType kernel =
      doc.at("kernel").get<std::string>() == "linear" ? KernelType::kLinear : KernelType::kRbf;
  return SvmModel(kernel, doc.at("gamma").get<double>(), std::move(sv), coef,
                  doc.at("bias").get<double>());
}

SvmModel fit_svm(const SvmParams& params, const Matrix& x, std::span<const int> labels,
                 SvmSolution* solution) {
  const std::size_t n = labels.size();
  const double gamma = params.gamma > 0.0 ? params.gamma : 1.0 / static_cast<double>(x.cols());
  const auto weights = class_weights(labels, params.class_weighting);

  std::vector<int> y(n);
  std::vector<double> upper(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = labels[i] == 1 ? 1 : -1;
    upper[i] = params.c * weights[i];
  }
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a at a = 0
  KernelRows kernel(x, params.kernel, gamma);

  const std::size_t max_iter =
      params.max_iter > 0 ? params.max_iter : std::max<std::size_t>(10'000'000, 100 * n);
  std::size_t iter = 0;
  bool converged = false;
  double gap = 0.0;
  auto in_up = [&](std::size_t t) { return y[t] == 1 ? alpha[t] < upper[t] : alpha[t] > 0.0; };
  auto in_low = [&](std::size_t t) { return y[t] == 1 ? alpha[t] > 0.0 : alpha[t] < upper[t]; };

  for (; iter < max_iter; ++iter) {
    // i: maximal violator in I_up. j: the I_low partner with the largest
    // second-order decrease of the objective.
    double g_max = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(t) && v > g_max) {
        g_max = v;
        i = t;
      }
    }
    double g_min = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    if (i != n) {
      const double* k_i = kernel.row(i, 0);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < n; ++t) {
        if (!in_low(t)) continue;
        const double v = -y[t] * grad[t];
        g_min = std::min(g_min, v);
        const double b = g_max - v;
        if (b <= 0.0) continue;
        double a = kernel.diag(i) + kernel.diag(t) - 2.0 * k_i[t];
        if (a <= 0.0) a = kTau;
        if (-(b * b) / a < best) {
          best = -(b * b) / a;
          j = t;
        }
      }
    }
    gap = g_max - g_min;
    if (i == n || j == n || gap < params.tol) {
      converged = true;
      break;
    }

    const double* k_i = kernel.row(i, 0);
    const double* k_j = kernel.row(j, 1);
    const double c_i = upper[i];
    const double c_j = upper[j];
    const double old_i = alpha[i];
    const double old_j = alpha[j];
    if (y[i] != y[j]) {
      // Q_ij = -K_ij here.
      double quad = kernel.diag(i) + kernel.diag(j) + 2.0 * (-k_i[j]);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > c_i - c_j) {
        if (alpha[i] > c_i) {
          alpha[i] = c_i;
          alpha[j] = c_i - diff;
        }
      } else if (alpha[j] > c_j) {
        alpha[j] = c_j;
        alpha[i] = c_j + diff;
      }
    } else {
      double quad = kernel.diag(i) + kernel.diag(j) - 2.0 * k_i[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c_i) {
        if (alpha[i] > c_i) {
          alpha[i] = c_i;
          alpha[j] = sum - c_i;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c_j) {
        if (alpha[j] > c_j) {
          alpha[j] = c_j;
          alpha[i] = sum - c_j;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    const double d_i = alpha[i] - old_i;
    const double d_j = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += y[t] * (y[i] * k_i[t] * d_i + y[j] * k_j[t] * d_j);
    }
  }

  // Offset from free variables, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= upper[t]) {
      if (y[t] == -1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] == 1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (ub + lb) / 2.0;

  std::vector<std::size_t> support;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) support.push_back(t);
  }
  std::vector<double> coef;
  for (std::size_t t : support) coef.push_back(alpha[t] * y[t]);
  if (solution) {
    solution->alpha = alpha;
    solution->upper = upper;
    solution->signed_labels = y;
    solution->iterations = iter;
    solution->converged = converged;
    solution->final_gap = gap;
  }
  return SvmModel(params.kernel, gamma, x.select_rows(support), std::move(coef), -rho);
}

}  // namespace mafus::learners
