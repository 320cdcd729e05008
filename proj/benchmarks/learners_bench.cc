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

#include "mafus/learners/config.h"
#include "mafus/learners/model.h"
#include "support/oracles.h"

namespace {

using mafus::learners::Algorithm;

void fit_bench(benchmark::State& state, Algorithm alg, const mafus::learners::Hyperparameters& params) {
  const auto train = mafus::testing::blobs(static_cast<std::size_t>(state.range(0)), 10, 0.8, 3, 0.2);
  const auto config = mafus::learners::make_config(alg, params);
  for (auto _ : state) benchmark::DoNotOptimize(mafus::learners::fit(config, train));
  state.SetComplexityN(state.range(0));
}

void BM_FitSvm(benchmark::State& state) { fit_bench(state, Algorithm::kSvm, {{"kernel", "rbf"}, {"gamma", 0.1}}); }
BENCHMARK(BM_FitSvm)->RangeMultiplier(2)->Range(250, 2000)->Unit(benchmark::kMillisecond)->Complexity();

void BM_FitXgb(benchmark::State& state) { fit_bench(state, Algorithm::kXgb, {{"n_estimators", 100}}); }
BENCHMARK(BM_FitXgb)->RangeMultiplier(2)->Range(250, 2000)->Unit(benchmark::kMillisecond)->Complexity();

void BM_FitLgbm(benchmark::State& state) { fit_bench(state, Algorithm::kLgbm, {{"n_estimators", 100}}); }
BENCHMARK(BM_FitLgbm)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_FitRf(benchmark::State& state) { fit_bench(state, Algorithm::kRf, {{"n_estimators", 100}}); }
BENCHMARK(BM_FitRf)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
