/* Copyright 2026 The trajarea Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include "trajarea/abt.hpp"
#include "trajarea/gbtm.hpp"
#include "trajarea/simulate.hpp"

namespace {

using namespace trajarea;

void BM_TrapezoidArea(benchmark::State& state) {
  const Polynomial a{{15.0, -0.2, -0.068, 0.00283}};
  const Polynomial b{{6.5, 0.9, -0.0234375}};
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(trapezoid_area(a, b, 0.0, 2.0, n));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrapezoidArea)->Arg(100)->Arg(1000)->Arg(10000);

const LongitudinalDataset& default_data() {
  static const auto sim = generate_dataset(default_scenario());
  return sim.dataset;
}

void BM_FitEm(benchmark::State& state) {
  const auto& data = default_data();
  FitConfig config;
  config.n_starts = 1;
  config.seed = 1;
  const auto groups = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_em(data, groups, 3, config));
  }
}
BENCHMARK(BM_FitEm)->Arg(2)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_PairwiseDistributions(benchmark::State& state) {
  FitConfig config;
  config.n_starts = 1;
  config.seed = 1;
  const auto fit = fit_em(default_data(), 5, 3, config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pairwise_distributions(fit.model));
  }
}
BENCHMARK(BM_PairwiseDistributions)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
