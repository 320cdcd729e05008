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

#include <benchmark/benchmark.h>

#include "mafus/explain.h"
#include "mafus/learners/config.h"
#include "support/oracles.h"

namespace {

using mafus::learners::Algorithm;

// Exact attribution of one sample as the feature count grows.
void BM_ShapleyExact(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto train = mafus::testing::blobs(300, d, 1.0, 1);
  const auto model =
      mafus::learners::fit(mafus::learners::make_config(Algorithm::kXgb, {{"n_estimators", 50}}), train);
  const auto bg = mafus::explain::BackgroundSet::sample(train.rows, 100, 2);
  const auto x = train.rows.row(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mafus::explain::shapley_exact(model, x, {}, bg));
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(1) << d);
}
BENCHMARK(BM_ShapleyExact)->DenseRange(4, 12, 2)->Unit(benchmark::kMillisecond)->Complexity();

void BM_ShapleySampled(benchmark::State& state) {
  const auto train = mafus::testing::blobs(300, 20, 1.0, 1);
  const auto model =
      mafus::learners::fit(mafus::learners::make_config(Algorithm::kXgb, {{"n_estimators", 50}}), train);
  const auto bg = mafus::explain::BackgroundSet::sample(train.rows, 100, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mafus::explain::shapley_sampled(model, train.rows.row(0), {}, bg, static_cast<std::size_t>(state.range(0)), 1));
  }
}
BENCHMARK(BM_ShapleySampled)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
