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

#include "mafus/learners/mlp.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"
#include "mafus/learners/boosting.h"

namespace mafus::learners {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using WeightMap = Eigen::Map<const RowMajor>;
using GradMap = Eigen::Map<RowMajor>;

// Rows of `x` selected by `index` as a (features x samples) block.
Eigen::MatrixXd columns_of(const Matrix& x, std::span<const std::size_t> index) {
  Eigen::MatrixXd out(x.cols(), index.size());
  for (std::size_t s = 0; s < index.size(); ++s) {
    const auto row = x.row(index[s]);
    for (std::size_t k = 0; k < row.size(); ++k) out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(s)) = row[k];
  }
  return out;
}

void activate(Eigen::MatrixXd& z, Activation a) {
  if (a == Activation::kTanh) z = z.array().tanh();
  else z = z.array().max(0.0);
}

// Derivative of the activation expressed through its output.
Eigen::MatrixXd activation_slope(const Eigen::MatrixXd& out, Activation a) {
  if (a == Activation::kTanh) return (1.0 - out.array().square()).matrix();
  return (out.array() > 0.0).cast<double>().matrix();
}

double logistic_loss(double margin, int label) {
  const double z = label == 1 ? -margin : margin;
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

}  // namespace

MlpNetwork::MlpNetwork(std::size_t dims, std::vector<std::size_t> hidden, Activation activation)
    : activation_(activation) {
  sizes_.push_back(dims);
  for (std::size_t h : hidden) {
    if (h == 0) throw Error(ErrorCode::kConfig, "hidden layer width must be positive");
    sizes_.push_back(h);
  }
  sizes_.push_back(1);
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    offsets_.push_back(total);
    total += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
  }
  params_.assign(total, 0.0);
}

void MlpNetwork::initialize(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    const double fan_in = static_cast<double>(sizes_[l]);
    const double fan_out = static_cast<double>(sizes_[l + 1]);
    const bool output = l + 2 == sizes_.size();
    const double bound = std::sqrt((output ? 2.0 : 6.0) / (fan_in + fan_out));
    std::uniform_real_distribution<double> u(-bound, bound);
    const std::size_t count = sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
    for (std::size_t k = 0; k < count; ++k) params_[offsets_[l] + k] = u(rng);
  }
}

double MlpNetwork::predict_proba(std::span<const double> x) const {
  Matrix one(1, x.size());
  std::copy(x.begin(), x.end(), one.row(0).begin());
  double out = 0.0;
  predict_proba_batch(one, {&out, 1});
  return out;
}

void MlpNetwork::predict_proba_batch(const Matrix& x, std::span<double> out) const {
  if (x.cols() != dims()) throw Error(ErrorCode::kContract, "mlp input width mismatch");
  std::vector<std::size_t> index(x.rows());
  std::iota(index.begin(), index.end(), 0);
  Eigen::MatrixXd a = columns_of(x, index);
  const std::size_t layers = sizes_.size() - 1;
  for (std::size_t l = 0; l < layers; ++l) {
    const auto rows = static_cast<Eigen::Index>(sizes_[l + 1]);
    const auto cols = static_cast<Eigen::Index>(sizes_[l]);
    WeightMap w(params_.data() + offsets_[l], rows, cols);
    Eigen::Map<const Eigen::VectorXd> b(params_.data() + offsets_[l] + sizes_[l + 1] * sizes_[l], rows);
    Eigen::MatrixXd z = w * a;
    z.colwise() += b;
    if (l + 1 < layers) activate(z, activation_);
    a = std::move(z);
  }
  for (std::size_t s = 0; s < x.rows(); ++s) out[s] = sigmoid(a(0, static_cast<Eigen::Index>(s)));
}

double MlpNetwork::loss_and_gradient(const Matrix& x, std::span<const int> labels,
                                     std::span<const double> weights, double alpha,
                                     std::vector<double>* grad) const {
  const std::size_t m = x.rows();
  const std::size_t layers = sizes_.size() - 1;
  std::vector<std::size_t> index(m);
  std::iota(index.begin(), index.end(), 0);

  std::vector<Eigen::MatrixXd> acts;
  acts.push_back(columns_of(x, index));
  for (std::size_t l = 0; l < layers; ++l) {
    const auto rows = static_cast<Eigen::Index>(sizes_[l + 1]);
    WeightMap w(params_.data() + offsets_[l], rows, static_cast<Eigen::Index>(sizes_[l]));
    Eigen::Map<const Eigen::VectorXd> b(params_.data() + offsets_[l] + sizes_[l + 1] * sizes_[l], rows);
    Eigen::MatrixXd z = w * acts.back();
    z.colwise() += b;
    if (l + 1 < layers) activate(z, activation_);
    acts.push_back(std::move(z));
  }

  const double weight_sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  const Eigen::MatrixXd& margin = acts.back();
  double loss = 0.0;
  for (std::size_t s = 0; s < m; ++s) {
    loss += weights[s] * logistic_loss(margin(0, static_cast<Eigen::Index>(s)), labels[s]);
  }
  loss /= weight_sum;
  double l2 = 0.0;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t count = sizes_[l + 1] * sizes_[l];
    for (std::size_t k = 0; k < count; ++k) l2 += params_[offsets_[l] + k] * params_[offsets_[l] + k];
  }
  loss += alpha * l2 / (2.0 * static_cast<double>(m));
  if (!grad) return loss;

  grad->assign(params_.size(), 0.0);
  Eigen::MatrixXd delta(1, static_cast<Eigen::Index>(m));
  for (std::size_t s = 0; s < m; ++s) {
    const auto si = static_cast<Eigen::Index>(s);
    delta(0, si) = weights[s] * (sigmoid(margin(0, si)) - labels[s]) / weight_sum;
  }
  for (std::size_t l = layers; l-- > 0;) {
    const auto rows = static_cast<Eigen::Index>(sizes_[l + 1]);
    const auto cols = static_cast<Eigen::Index>(sizes_[l]);
    WeightMap w(params_.data() + offsets_[l], rows, cols);
    GradMap gw(grad->data() + offsets_[l], rows, cols);
    Eigen::Map<Eigen::VectorXd> gb(grad->data() + offsets_[l] + sizes_[l + 1] * sizes_[l], rows);
    gw = delta * acts[l].transpose() + (alpha / static_cast<double>(m)) * w;
    gb = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd back = w.transpose() * delta;
      delta = back.cwiseProduct(activation_slope(acts[l], activation_));
    }
  }
  return loss;
}

MlpParams MlpParams::from_config(const ModelConfig& config) {
  MlpParams p;
  auto it = config.params.find("hidden_layer_sizes");
  if (it != config.params.end() && !it->second.is_none()) {
    if (it->second.is_number()) {
      const auto width = static_cast<std::size_t>(it->second.as_int());
      p.hidden = {width, width, width};
    } else {
      p.hidden.clear();
      std::stringstream in(it->second.as_text());
      std::string part;
      while (std::getline(in, part, ',')) p.hidden.push_back(std::stoul(part));
      if (p.hidden.size() != 3) {
        throw Error(ErrorCode::kConfig, "hidden_layer_sizes needs three widths");
      }
    }
  }
  p.activation = config.text("activation", "relu") == "tanh" ? Activation::kTanh : Activation::kRelu;
  const std::string solver = config.text("solver", "adam");
  p.solver = solver == "sgd" ? MlpSolver::kSgd : solver == "lbfgs" ? MlpSolver::kLbfgs : MlpSolver::kAdam;
  p.alpha = config.real("alpha", 1e-4);
  p.adaptive_learning_rate = config.text("learning_rate", "constant") == "adaptive";
  p.learning_rate_init = config.real("learning_rate_init", 1e-3);
  p.max_iter = static_cast<std::size_t>(config.integer("max_iter", 500));
  p.batch_size = static_cast<std::size_t>(config.integer("batch_size", 32));
  p.tol = config.real("tol", 1e-6);
  p.n_iter_no_change = static_cast<std::size_t>(config.integer("n_iter_no_change", 10));
  p.seed = config.seed;
  p.class_weighting = config.class_weighting;
  return p;
}

std::string MlpModel::parameters_json() const {
  nlohmann::json doc;
  const auto& sizes = network_.layer_sizes();
  doc["layer_sizes"] = sizes;
  doc["activation"] = network_.activation() == Activation::kTanh ? "tanh" : "relu";
  doc["parameters"] = std::vector<double>(network_.parameters().begin(), network_.parameters().end());
  return doc.dump();
}

MlpModel MlpModel::from_parameters(std::string_view text) {
  const auto doc = nlohmann::json::parse(text);
  const auto sizes = doc.at("layer_sizes").get<std::vector<std::size_t>>();
  if (sizes.size() < 3) throw Error(ErrorCode::kParse, "mlp needs at least one hidden layer");
  std::vector<std::size_t> hidden(sizes.begin() + 1, sizes.end() - 1);
  MlpNetwork net(sizes.front(), hidden,
                 doc.at("activation").get<std::string>() == "tanh" ? Activation::kTanh : Activation::kRelu);
  const auto values = doc.at("parameters").get<std::vector<double>>();
  if (values.size() != net.parameter_count()) {
    throw Error(ErrorCode::kParse, "mlp parameter count mismatch");
  }
  std::copy(values.begin(), values.end(), net.mutable_parameters().begin());
  return MlpModel(std::move(net));
}

namespace {

struct PlateauTracker {
  double best = std::numeric_limits<double>::infinity();
  std::size_t stale = 0;

  // True once the loss has failed to improve by `tol` for more than `patience`
  // consecutive epochs.
  bool update(double loss, double tol, std::size_t patience) {
    if (loss > best - tol) ++stale;
    else stale = 0;
    best = std::min(best, loss);
    return stale > patience;
  }
};

void train_minibatch(MlpNetwork& net, const MlpParams& params, const Matrix& x,
                     std::span<const int> labels, std::span<const double> weights,
                     std::vector<double>& curve) {
  const std::size_t n = labels.size();
  const std::size_t batch = std::min(params.batch_size, n);
  std::mt19937_64 rng(derive_seed(params.seed, "mlp-batches"));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t p = net.parameter_count();
  std::vector<double> velocity(p, 0.0);
  std::vector<double> m1(p, 0.0);
  std::vector<double> m2(p, 0.0);
  std::vector<double> grad;
  double lr = params.learning_rate_init;
  constexpr double kMomentum = 0.9;
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  std::size_t step = 0;
  PlateauTracker plateau;

  for (std::size_t epoch = 0; epoch < params.max_iter; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      std::span<const std::size_t> idx(order.data() + start, end - start);
      const Matrix xb = x.select_rows(idx);
      std::vector<int> yb;
      std::vector<double> wb;
      for (std::size_t i : idx) {
        yb.push_back(labels[i]);
        wb.push_back(weights[i]);
      }
      const double loss = net.loss_and_gradient(xb, yb, wb, params.alpha, &grad);
      epoch_loss += loss * static_cast<double>(idx.size());
      auto theta = net.mutable_parameters();
      ++step;
      if (params.solver == MlpSolver::kSgd) {
        for (std::size_t k = 0; k < p; ++k) {
          velocity[k] = kMomentum * velocity[k] - lr * grad[k];
          theta[k] += kMomentum * velocity[k] - lr * grad[k];  // Nesterov
        }
      } else {
        const double t = static_cast<double>(step);
        const double lr_t = lr * std::sqrt(1.0 - std::pow(kBeta2, t)) / (1.0 - std::pow(kBeta1, t));
        for (std::size_t k = 0; k < p; ++k) {
          m1[k] = kBeta1 * m1[k] + (1.0 - kBeta1) * grad[k];
          m2[k] = kBeta2 * m2[k] + (1.0 - kBeta2) * grad[k] * grad[k];
          theta[k] -= lr_t * m1[k] / (std::sqrt(m2[k]) + kEps);
        }
      }
    }
    epoch_loss /= static_cast<double>(n);
    curve.push_back(epoch_loss);
    if (!std::isfinite(epoch_loss)) {
      throw Error(ErrorCode::kTraining, "mlp training diverged");
    }
    if (plateau.update(epoch_loss, params.tol, params.n_iter_no_change)) {
      if (params.adaptive_learning_rate && params.solver == MlpSolver::kSgd && lr / 5.0 > 1e-6) {
        lr /= 5.0;
        plateau.stale = 0;
      } else {
        break;
      }
    }
  }
}

void train_lbfgs(MlpNetwork& net, const MlpParams& params, const Matrix& x,
                 std::span<const int> labels, std::span<const double> weights,
                 std::vector<double>& curve) {
  constexpr std::size_t kHistory = 10;
  const std::size_t p = net.parameter_count();
  auto theta = net.mutable_parameters();
  std::vector<double> grad;
  double loss = net.loss_and_gradient(x, labels, weights, params.alpha, &grad);
  std::deque<std::vector<double>> s_hist;
  std::deque<std::vector<double>> y_hist;
  std::deque<double> rho_hist;
  PlateauTracker plateau;
  std::vector<double> dir(p);
  std::vector<double> old_theta(p);
  std::vector<double> new_grad;

  for (std::size_t iter = 0; iter < params.max_iter; ++iter) {
    // Two-loop recursion for the search direction.
    for (std::size_t k = 0; k < p; ++k) dir[k] = -grad[k];
    std::vector<double> a(s_hist.size());
    for (std::size_t h = s_hist.size(); h-- > 0;) {
      double dot = 0.0;
      for (std::size_t k = 0; k < p; ++k) dot += s_hist[h][k] * dir[k];
      a[h] = rho_hist[h] * dot;
      for (std::size_t k = 0; k < p; ++k) dir[k] -= a[h] * y_hist[h][k];
    }
    if (!s_hist.empty()) {
      double sy = 0.0;
      double yy = 0.0;
      for (std::size_t k = 0; k < p; ++k) {
        sy += s_hist.back()[k] * y_hist.back()[k];
        yy += y_hist.back()[k] * y_hist.back()[k];
      }
      const double gamma = sy / yy;
      for (double& v : dir) v *= gamma;
    }
    for (std::size_t h = 0; h < s_hist.size(); ++h) {
      double dot = 0.0;
      for (std::size_t k = 0; k < p; ++k) dot += y_hist[h][k] * dir[k];
      const double b = rho_hist[h] * dot;
      for (std::size_t k = 0; k < p; ++k) dir[k] += s_hist[h][k] * (a[h] - b);
    }
    double slope = 0.0;
    for (std::size_t k = 0; k < p; ++k) slope += grad[k] * dir[k];
    if (slope >= 0.0) {
      for (std::size_t k = 0; k < p; ++k) dir[k] = -grad[k];
      slope = 0.0;
      for (std::size_t k = 0; k < p; ++k) slope -= grad[k] * grad[k];
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
    }
    if (slope > -1e-20) break;

    // Backtracking Armijo search.
    std::copy(theta.begin(), theta.end(), old_theta.begin());
    double step = 1.0;
    double new_loss = loss;
    bool accepted = false;
    for (int tries = 0; tries < 40; ++tries) {
      for (std::size_t k = 0; k < p; ++k) theta[k] = old_theta[k] + step * dir[k];
      new_loss = net.loss_and_gradient(x, labels, weights, params.alpha, &new_grad);
      if (std::isfinite(new_loss) && new_loss <= loss + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      std::copy(old_theta.begin(), old_theta.end(), theta.begin());
      break;
    }
    std::vector<double> s(p);
    std::vector<double> yv(p);
    double sy = 0.0;
    for (std::size_t k = 0; k < p; ++k) {
      s[k] = theta[k] - old_theta[k];
      yv[k] = new_grad[k] - grad[k];
      sy += s[k] * yv[k];
    }
    if (sy > 1e-12) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(yv));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > kHistory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    loss = new_loss;
    grad.swap(new_grad);
    curve.push_back(loss);
    if (plateau.update(loss, params.tol, params.n_iter_no_change)) break;
  }
}

}  // namespace

MlpModel fit_mlp(const MlpParams& params, const Matrix& x, std::span<const int> labels) {
  MlpNetwork net(x.cols(), params.hidden, params.activation);
  net.initialize(derive_seed(params.seed, "mlp-init"));
  const auto weights = class_weights(labels, params.class_weighting);
  std::vector<double> curve;
  if (params.solver == MlpSolver::kLbfgs) {
    train_lbfgs(net, params, x, labels, weights, curve);
  } else {
    train_minibatch(net, params, x, labels, weights, curve);
  }
  MlpModel model(std::move(net));
  model.set_loss_curve(std::move(curve));
  return model;
}

}  // namespace mafus::learners
