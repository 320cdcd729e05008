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

#include "mafus/explain.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "json.hpp"
#include "mafus/learners/boosting.h"
#include "mafus/learners/forest.h"
#include "mafus/learners/svm.h"

namespace mafus::explain {

namespace {

using nlohmann::json;

// Rows scored per batch when enumerating coalitions.
constexpr std::size_t kBatchRows = 8192;

void check_background(const TrainedModel& model, const BackgroundSet& background) {
  if (background.size() == 0) throw Error(ErrorCode::kContract, "background set is empty");
  if (background.rows.cols() != model.dims()) {
    throw Error(ErrorCode::kContract, "background has " + std::to_string(background.rows.cols()) +
                                          " features, model expects " +
                                          std::to_string(model.dims()));
  }
}

void check_sample(const TrainedModel& model, std::span<const double> x) {
  if (x.size() != model.dims()) {
    throw Error(ErrorCode::kContract, "sample has " + std::to_string(x.size()) +
                                          " features, model expects " +
                                          std::to_string(model.dims()));
  }
}

std::vector<std::size_t> resolve_players(std::span<const std::size_t> players, std::size_t d) {
  std::vector<std::size_t> out(players.begin(), players.end());
  if (out.empty()) {
    out.resize(d);
    std::iota(out.begin(), out.end(), 0);
    return out;
  }
  std::vector<bool> seen(d, false);
  for (std::size_t j : out) {
    if (j >= d) throw Error(ErrorCode::kContract, "feature index " + std::to_string(j) + " out of range");
    if (seen[j]) throw Error(ErrorCode::kContract, "feature index " + std::to_string(j) + " repeated");
    seen[j] = true;
  }
  return out;
}

// Background rows with every non-player feature pinned to x. Coalition rows
// are these with the coalition's players also set to x.
Matrix pinned_background(std::span<const double> x, std::span<const std::size_t> players,
                         const BackgroundSet& background) {
  const std::size_t d = x.size();
  std::vector<bool> is_player(d, false);
  for (std::size_t j : players) is_player[j] = true;
  Matrix out = background.rows;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      if (!is_player[c]) out(r, c) = x[c];
    }
  }
  return out;
}

// Values of coalitions given as bitmasks over `players`.
class CoalitionGame {
 public:
  CoalitionGame(const TrainedModel& model, std::span<const double> x,
                std::span<const std::size_t> players, const BackgroundSet& background)
      : model_(model),
        x_(x),
        players_(players.begin(), players.end()),
        pinned_(pinned_background(x, players, background)) {}

  // Fills values[i] = v(masks[i]).
  void evaluate(std::span<const std::uint64_t> masks, std::span<double> values) const {
    const std::size_t b = pinned_.rows();
    const std::size_t d = pinned_.cols();
    const std::size_t per_batch = std::max<std::size_t>(1, kBatchRows / b);
    std::vector<double> scores;
    for (std::size_t start = 0; start < masks.size(); start += per_batch) {
      const std::size_t stop = std::min(masks.size(), start + per_batch);
      Matrix hybrid((stop - start) * b, d);
      for (std::size_t m = start; m < stop; ++m) {
        const std::uint64_t mask = masks[m];
        for (std::size_t r = 0; r < b; ++r) {
          auto dst = hybrid.row((m - start) * b + r);
          const auto src = pinned_.row(r);
          std::copy(src.begin(), src.end(), dst.begin());
          for (std::size_t p = 0; p < players_.size(); ++p) {
            if (mask >> p & 1U) dst[players_[p]] = x_[players_[p]];
          }
        }
      }
      scores.assign(hybrid.rows(), 0.0);
      model_.classifier().score_batch(hybrid, scores);
      for (std::size_t m = start; m < stop; ++m) {
        double sum = 0.0;
        for (std::size_t r = 0; r < b; ++r) sum += scores[(m - start) * b + r];
        values[m] = sum / static_cast<double>(b);
      }
    }
  }

  double value(std::uint64_t mask) const {
    double v = 0.0;
    evaluate({&mask, 1}, {&v, 1});
    return v;
  }

 private:
  const TrainedModel& model_;
  std::span<const double> x_;
  std::vector<std::size_t> players_;
  Matrix pinned_;
};

json attribution_json(const Attribution& a) {
  return {{"phi", a.phi},
          {"base_value", a.base_value},
          {"exact", a.exact},
          {"adjusted", a.adjusted}};
}

// Exact values for an rbf SVM without enumerating coalitions. The kernel
// factorizes over features, so each (background row, support vector) pair is
// a product game v(S) = prod_{j in S} u_j * prod_{j not in S} w_j, whose value
// for player p is (u_p - w_p) * sum_k weight[k] e_k with e_k the size-k
// coefficient of prod_{q != p} (w_q + u_q t).
Attribution rbf_product_shapley(const learners::SvmModel& svm, std::span<const double> x,
                                std::span<const std::size_t> players, const BackgroundSet& background,
                                std::span<const double> weight) {
  const std::size_t d = x.size();
  const std::size_t s = players.size();
  const std::size_t stride = s + 1;
  const double gamma = svm.gamma();
  const auto& sv = svm.support_vectors();
  const double scale = 1.0 / static_cast<double>(background.size());
  std::vector<bool> is_player(d, false);
  for (std::size_t j : players) is_player[j] = true;

  std::vector<double> phi(s, 0.0);
  std::vector<double> u(s), w(s);
  // pre row p holds the coefficients of prod_{q < p}, suf row p prod_{q >= p}.
  std::vector<double> pre(stride * stride), suf(stride * stride);
  double base = 0.0;
  for (std::size_t k = 0; k < sv.rows(); ++k) {
    const auto v = sv.row(k);
    double pinned = svm.coef()[k] * scale;
    for (std::size_t j = 0; j < d; ++j) {
      if (!is_player[j]) pinned *= std::exp(-gamma * (x[j] - v[j]) * (x[j] - v[j]));
    }
    for (std::size_t p = 0; p < s; ++p) {
      const double diff = x[players[p]] - v[players[p]];
      u[p] = std::exp(-gamma * diff * diff);
    }
    for (std::size_t r = 0; r < background.size(); ++r) {
      const auto row = background.rows.row(r);
      double all_w = pinned;
      for (std::size_t p = 0; p < s; ++p) {
        const double diff = row[players[p]] - v[players[p]];
        w[p] = std::exp(-gamma * diff * diff);
        all_w *= w[p];
      }
      base += all_w;
      std::fill(pre.begin(), pre.end(), 0.0);
      std::fill(suf.begin(), suf.end(), 0.0);
      pre[0] = 1.0;
      for (std::size_t p = 0; p < s; ++p) {
        const double* in = &pre[p * stride];
        double* o = &pre[(p + 1) * stride];
        for (std::size_t a = 0; a <= p; ++a) {
          o[a] += in[a] * w[p];
          o[a + 1] += in[a] * u[p];
        }
      }
      suf[s * stride] = 1.0;
      for (std::size_t p = s; p-- > 0;) {
        const double* in = &suf[(p + 1) * stride];
        double* o = &suf[p * stride];
        for (std::size_t a = 0; a < s - p; ++a) {
          o[a] += in[a] * w[p];
          o[a + 1] += in[a] * u[p];
        }
      }
      for (std::size_t p = 0; p < s; ++p) {
        const double* left = &pre[p * stride];
        const double* right = &suf[(p + 1) * stride];
        double total = 0.0;
        for (std::size_t a = 0; a <= p; ++a) {
          for (std::size_t b = 0; b < s - p; ++b) total += left[a] * right[b] * weight[a + b];
        }
        phi[p] += pinned * (u[p] - w[p]) * total;
      }
    }
  }
  Attribution out;
  out.phi.assign(d, 0.0);
  for (std::size_t p = 0; p < s; ++p) out.phi[players[p]] = phi[p];
  out.base_value = base + svm.bias();
  return out;
}


// Sorted split thresholds per feature, or nullopt for models that are not
// tree ensembles.
std::optional<std::vector<std::vector<double>>> split_thresholds(const TrainedModel& model, std::size_t d) {
  const std::vector<learners::DecisionTree>* trees = nullptr;
  if (const auto* rf = model.as<learners::RandomForest>()) trees = &rf->trees();
  if (const auto* gb = model.as<learners::BoostedTrees>()) trees = &gb->trees();
  if (trees == nullptr) return std::nullopt;
  std::vector<std::vector<double>> out(d);
  for (const auto& tree : *trees) {
    for (const auto& node : tree.nodes()) {
      if (!node.is_leaf()) out[static_cast<std::size_t>(node.feature)].push_back(node.threshold);
    }
  }
  for (auto& t : out) {
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
  }
  return out;
}

// Exact Shapley values for tree ensembles. For one background row z, a
// player whose x and z fall on the same side of every split on that feature
// never changes any tree path, so it is a dummy in that row's game. Each row
// is solved over its own active players, and the per-row values are averaged.
Attribution tree_reduced_shapley(const TrainedModel& model, std::span<const double> x,
                                 std::span<const std::size_t> players, const BackgroundSet& background,
                                 const std::vector<std::vector<double>>& thresholds) {
  const std::size_t d = x.size();
  const Matrix pinned = pinned_background(x, players, background);
  const std::size_t b = pinned.rows();
  std::vector<double> factorial(players.size() + 1, 1.0);
  for (std::size_t i = 1; i < factorial.size(); ++i) factorial[i] = factorial[i - 1] * static_cast<double>(i);

  Attribution out;
  out.phi.assign(d, 0.0);
  out.base_value = 0.0;
  std::vector<std::size_t> active;
  std::vector<double> v;
  for (std::size_t r = 0; r < b; ++r) {
    const auto z = pinned.row(r);
    active.clear();
    for (std::size_t j : players) {
      const double lo = std::min(x[j], z[j]);
      const double hi = std::max(x[j], z[j]);
      // Some threshold t with lo <= t < hi separates the two values.
      const auto& t = thresholds[j];
      const auto it = std::lower_bound(t.begin(), t.end(), lo);
      if (it != t.end() && *it < hi) active.push_back(j);
    }
    const std::size_t a = active.size();
    const std::uint64_t n_masks = std::uint64_t{1} << a;
    Matrix hybrid(n_masks, d);
    for (std::uint64_t mask = 0; mask < n_masks; ++mask) {
      auto dst = hybrid.row(mask);
      std::copy(z.begin(), z.end(), dst.begin());
      for (std::size_t p = 0; p < a; ++p) {
        if (mask >> p & 1U) dst[active[p]] = x[active[p]];
      }
    }
    v.assign(n_masks, 0.0);
    model.classifier().score_batch(hybrid, v);
    out.base_value += v[0];
    for (std::size_t p = 0; p < a; ++p) {
      const std::uint64_t bit = std::uint64_t{1} << p;
      double phi = 0.0;
      for (std::uint64_t mask = 0; mask < n_masks; ++mask) {
        if (mask & bit) continue;
        const auto k = static_cast<std::size_t>(std::popcount(mask));
        phi += factorial[k] * factorial[a - k - 1] / factorial[a] * (v[mask | bit] - v[mask]);
      }
      out.phi[active[p]] += phi;
    }
  }
  const double scale = 1.0 / static_cast<double>(b);
  out.base_value *= scale;
  for (double& p : out.phi) p *= scale;
  return out;
}
}  // namespace

BackgroundSet BackgroundSet::sample(const Matrix& source, std::size_t size, std::uint64_t seed) {
  if (source.rows() == 0 || size == 0) {
    throw Error(ErrorCode::kContract, "background needs at least one row");
  }
  if (size >= source.rows()) return {source};
  std::vector<std::size_t> idx(source.rows());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(size);
  std::sort(idx.begin(), idx.end());
  return {source.select_rows(idx)};
}

double Attribution::total() const {
  return base_value + std::accumulate(phi.begin(), phi.end(), 0.0);
}

std::vector<const ExplainedSample*> PartitionAB::samples() const {
  std::vector<const ExplainedSample*> out;
  for (const auto& s : a) out.push_back(&s);
  for (const auto& s : b) out.push_back(&s);
  // Order of appearance in shapley_values is test order.
  std::unordered_map<std::int64_t, std::size_t> position;
  for (std::size_t i = 0; i < shapley_values.size(); ++i) position[shapley_values[i].sample_id] = i;
  std::stable_sort(out.begin(), out.end(), [&](const ExplainedSample* l, const ExplainedSample* r) {
    return position[l->id] < position[r->id];
  });
  return out;
}

double coalition_value(const TrainedModel& model, std::span<const double> x,
                       std::span<const std::size_t> coalition, const BackgroundSet& background) {
  check_sample(model, x);
  check_background(model, background);
  const std::size_t d = x.size();
  Matrix hybrid = background.rows;
  for (std::size_t j : coalition) {
    if (j >= d) throw Error(ErrorCode::kContract, "feature index " + std::to_string(j) + " out of range");
    for (std::size_t r = 0; r < hybrid.rows(); ++r) hybrid(r, j) = x[j];
  }
  std::vector<double> scores(hybrid.rows());
  model.classifier().score_batch(hybrid, scores);
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

Attribution shapley_exact(const TrainedModel& model, std::span<const double> x,
                          std::span<const std::size_t> players, const BackgroundSet& background,
                          std::size_t cap) {
  check_sample(model, x);
  check_background(model, background);
  const auto s_players = resolve_players(players, x.size());
  const std::size_t s = s_players.size();
  if (s > cap || s >= 63) {
    throw Error(ErrorCode::kExplanation,
                std::to_string(s) + " features exceed the exact cap of " + std::to_string(cap) +
                    "; use shapley_sampled");
  }
  // weight[k] = k! (s-k-1)! / s!
  std::vector<double> factorial(s + 1, 1.0);
  for (std::size_t i = 1; i <= s; ++i) factorial[i] = factorial[i - 1] * static_cast<double>(i);
  std::vector<double> weight(s, 0.0);
  for (std::size_t k = 0; k < s; ++k) weight[k] = factorial[k] * factorial[s - k - 1] / factorial[s];

  if (const auto* svm = model.as<learners::SvmModel>(); svm && svm->kernel() == learners::KernelType::kRbf) {
    return rbf_product_shapley(*svm, x, s_players, background, weight);
  }
  if (const auto thresholds = split_thresholds(model, x.size())) {
    return tree_reduced_shapley(model, x, s_players, background, *thresholds);
  }

  const CoalitionGame game(model, x, s_players, background);
  const std::uint64_t n_masks = std::uint64_t{1} << s;
  std::vector<std::uint64_t> masks(n_masks);
  std::iota(masks.begin(), masks.end(), std::uint64_t{0});
  std::vector<double> v(n_masks);
  game.evaluate(masks, v);

  Attribution out;
  out.phi.assign(x.size(), 0.0);
  out.base_value = v[0];
  for (std::size_t p = 0; p < s; ++p) {
    const std::uint64_t bit = std::uint64_t{1} << p;
    double phi = 0.0;
    for (std::uint64_t mask = 0; mask < n_masks; ++mask) {
      if (mask & bit) continue;
      phi += weight[std::popcount(mask)] * (v[mask | bit] - v[mask]);
    }
    out.phi[s_players[p]] = phi;
  }
  return out;
}

Attribution shapley_sampled(const TrainedModel& model, std::span<const double> x,
                            std::span<const std::size_t> players, const BackgroundSet& background,
                            std::size_t permutations, std::uint64_t seed) {
  check_sample(model, x);
  check_background(model, background);
  if (permutations == 0) throw Error(ErrorCode::kContract, "permutation count must be >= 1");
  const auto s_players = resolve_players(players, x.size());
  const std::size_t s = s_players.size();
  if (s > 64) throw Error(ErrorCode::kExplanation, "sampled mode supports at most 64 features");
  const CoalitionGame game(model, x, s_players, background);

  std::unordered_map<std::uint64_t, double> memo;
  auto value = [&](std::uint64_t mask) {
    const auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    const double v = game.value(mask);
    memo.emplace(mask, v);
    return v;
  };

  Attribution out;
  out.exact = false;
  out.phi.assign(x.size(), 0.0);
  out.base_value = value(0);
  std::vector<double> sums(s, 0.0);
  std::vector<std::size_t> order(s);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t it = 0; it < permutations; ++it) {
    std::shuffle(order.begin(), order.end(), rng);
    std::uint64_t mask = 0;
    double prev = out.base_value;
    for (std::size_t p : order) {
      mask |= std::uint64_t{1} << p;
      const double cur = value(mask);
      sums[p] += cur - prev;
      prev = cur;
    }
  }
  double sum_abs = 0.0;
  double sum_phi = 0.0;
  for (std::size_t p = 0; p < s; ++p) {
    const double phi = sums[p] / static_cast<double>(permutations);
    out.phi[s_players[p]] = phi;
    sum_abs += std::abs(phi);
    sum_phi += phi;
  }
  const double residual = model.score(x) - out.base_value - sum_phi;
  for (std::size_t p = 0; p < s; ++p) {
    double& phi = out.phi[s_players[p]];
    const double share = sum_abs > 0.0 ? std::abs(phi) / sum_abs : 1.0 / static_cast<double>(s);
    phi += residual * share;
  }
  out.adjusted = true;
  return out;
}

Attribution explain_sample(const TrainedModel& model, std::span<const double> x,
                           const BackgroundSet& background, const ExplainOptions& options,
                           std::uint64_t sample_index) {
  if (model.dims() <= options.exact_cap) return shapley_exact(model, x, {}, background, options.exact_cap);
  return shapley_sampled(model, x, {}, background, options.permutations,
                         derive_seed(options.seed, "shap-sample", sample_index));
}

PartitionAB partition_run(const TrainedModel& model, const data::Cohort& test,
                          const BackgroundSet& background, const ExplainOptions& options) {
  if (test.dims() != model.dims()) {
    throw Error(ErrorCode::kContract, "test cohort has " + std::to_string(test.dims()) +
                                          " features, model expects " +
                                          std::to_string(model.dims()));
  }
  check_background(model, background);
  const std::size_t n = test.size();
  std::vector<ExplainedSample> explained(n);
  std::vector<std::optional<std::string>> failure(n);

  auto run_one = [&](std::size_t i) {
    ExplainedSample& e = explained[i];
    e.id = i < test.row_ids.size() ? test.row_ids[i] : static_cast<std::int64_t>(i);
    const auto x = test.rows.row(i);
    e.x.assign(x.begin(), x.end());
    try {
      e.score = model.score(x);
      e.yhat = e.score >= model.threshold() ? 1 : 0;
      e.attribution = explain_sample(model, x, background, options, i);
      e.attribution.sample_id = e.id;
    } catch (const std::exception& ex) {
      failure[i] = ex.what();
    }
  };

  std::size_t threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) run_one(i);
      });
    }
  }

  PartitionAB out;
  out.feature_names = test.feature_names();
  for (std::size_t i = 0; i < n; ++i) {
    if (failure[i]) {
      out.failed.push_back({explained[i].id, *failure[i]});
      continue;
    }
    out.shapley_values.push_back(explained[i].attribution);
    (explained[i].yhat == 1 ? out.b : out.a).push_back(std::move(explained[i]));
  }
  return out;
}

BeeswarmTable summary_data(const PartitionAB& partition, const data::ScalerStats* scaler) {
  const auto samples = partition.samples();
  if (samples.empty()) throw Error(ErrorCode::kContract, "partition has no explained samples");
  const std::size_t d = partition.feature_names.size();
  std::vector<double> mean_abs(d, 0.0);
  for (const auto* s : samples) {
    for (std::size_t j = 0; j < d; ++j) mean_abs[j] += std::abs(s->attribution.phi[j]);
  }
  for (double& m : mean_abs) m /= static_cast<double>(samples.size());
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mean_abs[a] > mean_abs[b]; });

  BeeswarmTable table;
  for (std::size_t j : order) {
    const auto& name = partition.feature_names[j];
    table.feature_order.push_back(name);
    table.mean_abs_shap.push_back(mean_abs[j]);
    for (const auto* s : samples) {
      const double value = s->x[j];
      table.rows.push_back({name, s->id, s->attribution.phi[j], value,
                            scaler ? data::unscale(*scaler, name, value) : value});
    }
  }
  return table;
}

std::vector<DependenceRow> dependence_data(const PartitionAB& partition, std::string_view feature,
                                           std::string_view interaction) {
  auto index_of = [&](std::string_view name) {
    const auto it = std::find(partition.feature_names.begin(), partition.feature_names.end(), name);
    if (it == partition.feature_names.end()) {
      throw Error(ErrorCode::kContract, "unknown feature '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - partition.feature_names.begin());
  };
  const std::size_t f = index_of(feature);
  const std::size_t g = index_of(interaction);
  std::vector<DependenceRow> rows;
  for (const auto* s : partition.samples()) {
    rows.push_back({s->id, s->x[f], s->attribution.phi[f], s->x[g]});
  }
  return rows;
}

ForcePlot force_data(const ExplainedSample& sample, std::span<const std::string> feature_names) {
  const auto& phi = sample.attribution.phi;
  if (phi.size() != feature_names.size() || sample.x.size() != phi.size()) {
    throw Error(ErrorCode::kContract, "sample and feature names disagree in length");
  }
  ForcePlot plot;
  plot.sample_id = sample.id;
  plot.base_value = sample.attribution.base_value;
  plot.score = sample.score;
  plot.yhat = sample.yhat;
  plot.exact = sample.attribution.exact;
  std::vector<std::size_t> order(phi.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(phi[a]) > std::abs(phi[b]); });
  for (std::size_t j : order) plot.contributions.push_back({feature_names[j], sample.x[j], phi[j]});
  return plot;
}

std::string beeswarm_csv(const BeeswarmTable& table) {
  std::ostringstream out;
  out << "rank,feature,sample_id,shap,value,raw_value\n";
  for (const auto& r : table.rows) {
    const auto pos = std::find(table.feature_order.begin(), table.feature_order.end(), r.feature);
    out << (pos - table.feature_order.begin() + 1) << ',' << r.feature << ',' << r.sample_id << ','
        << format_double(r.shap) << ',' << format_double(r.value) << ','
        << format_double(r.raw_value) << '\n';
  }
  return out.str();
}

std::string dependence_csv(std::span<const DependenceRow> rows, std::string_view feature,
                           std::string_view interaction) {
  std::ostringstream out;
  out << "sample_id," << feature << ",shap_" << feature << ',' << interaction << '\n';
  for (const auto& r : rows) {
    out << r.sample_id << ',' << format_double(r.value) << ',' << format_double(r.shap) << ','
        << format_double(r.interaction_value) << '\n';
  }
  return out.str();
}

std::string force_json(const ForcePlot& plot) {
  json doc;
  doc["sample_id"] = plot.sample_id;
  doc["base_value"] = plot.base_value;
  doc["score"] = plot.score;
  doc["yhat"] = plot.yhat;
  doc["exact"] = plot.exact;
  doc["contributions"] = json::array();
  for (const auto& c : plot.contributions) {
    doc["contributions"].push_back({{"feature", c.feature}, {"value", c.value}, {"phi", c.phi}});
  }
  return doc.dump(2);
}

std::string partition_to_json(const PartitionAB& partition) {
  json doc;
  doc["feature_names"] = partition.feature_names;
  doc["samples"] = json::array();
  for (const auto* s : partition.samples()) {
    json e = attribution_json(s->attribution);
    e["id"] = s->id;
    e["set"] = s->yhat == 1 ? "B" : "A";
    e["yhat"] = s->yhat;
    e["score"] = s->score;
    e["x"] = s->x;
    doc["samples"].push_back(std::move(e));
  }
  doc["failed"] = json::array();
  for (const auto& f : partition.failed) doc["failed"].push_back({{"id", f.id}, {"reason", f.reason}});
  return doc.dump(1);
}

PartitionAB partition_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("partition document: ") + e.what());
  }
  PartitionAB out;
  out.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
  for (const auto& e : doc.at("samples")) {
    ExplainedSample s;
    s.id = e.at("id").get<std::int64_t>();
    s.x = e.at("x").get<std::vector<double>>();
    s.score = e.at("score").get<double>();
    s.yhat = e.at("yhat").get<int>();
    s.attribution.phi = e.at("phi").get<std::vector<double>>();
    s.attribution.base_value = e.at("base_value").get<double>();
    s.attribution.exact = e.at("exact").get<bool>();
    s.attribution.adjusted = e.at("adjusted").get<bool>();
    s.attribution.sample_id = s.id;
    out.shapley_values.push_back(s.attribution);
    (s.yhat == 1 ? out.b : out.a).push_back(std::move(s));
  }
  for (const auto& f : doc.at("failed")) {
    out.failed.push_back({f.at("id").get<std::int64_t>(), f.at("reason").get<std::string>()});
  }
  return out;
}

}  // namespace mafus::explain
