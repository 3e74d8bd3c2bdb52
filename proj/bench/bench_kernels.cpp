/* Copyright 2026 The gazesal Authors
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
 *
 */

// Serial reference kernels against their OpenMP counterparts.
// Thread counts for the parallel cases come from the benchmark argument.

#include <random>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "gazesal/cohortsim.hpp"
#include "gazesal/pipeline.hpp"
#include "gazesal/reference.hpp"
#include "gazesal/salmap.hpp"
#include "gazesal/stats.hpp"

using namespace gazesal;

namespace {

SaliencyMap bench_map() {
  return synthetic_stimulus_map({800, 600}, 1);
}

std::vector<double> bench_values(std::size_t n, std::uint64_t seed, double shift) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(shift, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

void BM_SmoothSerial(benchmark::State& state) {
  const auto m = bench_map();
  for (auto _ : state) benchmark::DoNotOptimize(reference::gaussian_smooth_serial(m, 12.0));
}

void BM_SmoothParallel(benchmark::State& state) {
  const auto m = bench_map();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_smooth(m, 12.0));
}

void BM_PermutationSerial(benchmark::State& state) {
  const auto a = bench_values(30, 1, 0.0), b = bench_values(30, 2, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(reference::permutation_test_serial(a, b, {4999, 1}));
}

void BM_PermutationParallel(benchmark::State& state) {
  const auto a = bench_values(30, 1, 0.0), b = bench_values(30, 2, 0.3);
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(stats::permutation_test(a, b, {4999, 1}));
}

struct TrialFixture {
  SimulatedCohort sim;
  AnalysisConfig config;
  PreparedMaps maps;

  TrialFixture() : sim(simulate_cohort([] {
                     CohortSimConfig c;
                     c.subjects_per_group = 10;
                     return c;
                   }())) {
    config.densities = false;
    config.n_perm = 1;  // keep the timing dominated by per-trial work
    maps = prepare_maps(sim.cohort, config);
  }
};

const TrialFixture& trials() {
  static const TrialFixture f;
  return f;
}

void BM_TrialsSerial(benchmark::State& state) {
  const auto& f = trials();
  for (auto _ : state) benchmark::DoNotOptimize(reference::analyze_trials_serial(f.sim.cohort, f.config, f.maps));
}

void BM_TrialsParallel(benchmark::State& state) {
  const auto& f = trials();
  auto cfg = f.config;
  cfg.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(analyze(f.sim.cohort, cfg, f.maps));
}

}  // namespace

BENCHMARK(BM_SmoothSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SmoothParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PermutationSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PermutationParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrialsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrialsParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
