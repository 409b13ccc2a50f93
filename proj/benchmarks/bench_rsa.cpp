// Copyright 2026 The rsaprobe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "rsaprobe/rsa.hpp"
#include "rsaprobe/stats.hpp"

namespace {

std::vector<double> gaussian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

void BM_Spearman(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = gaussian(n, rng);
  const auto y = gaussian(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(rsaprobe::spearman(x, y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Spearman)->Arg(300)->Arg(435)->Arg(4096);

// One sample of the default experiment: 30 vectors of GloVe width.
void BM_ReferenceRdm(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<std::vector<double>> vs;
  for (int i = 0; i < 30; ++i) vs.push_back(gaussian(static_cast<std::size_t>(state.range(0)), rng));
  for (auto _ : state) benchmark::DoNotOptimize(rsaprobe::reference_rdm(vs));
}
BENCHMARK(BM_ReferenceRdm)->Arg(300)->Arg(768);

void BM_RsaSimilarity(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::vector<std::vector<double>> vs;
  for (int i = 0; i < 30; ++i) vs.push_back(gaussian(300, rng));
  const auto ref = rsaprobe::reference_rdm(vs);
  const auto hyp = rsaprobe::hypothesis_rdm(rsaprobe::RoleLabeling::blocks(10, 10, 10),
                                            rsaprobe::Role::kGroup2);
  for (auto _ : state) benchmark::DoNotOptimize(rsaprobe::rsa_similarity(ref, hyp));
}
BENCHMARK(BM_RsaSimilarity);

void BM_SignTest(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto d = gaussian(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(rsaprobe::sign_test(d));
}
BENCHMARK(BM_SignTest)->Arg(100)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
