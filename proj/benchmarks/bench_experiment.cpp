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
#include <sstream>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "rsaprobe/embedding_store.hpp"
#include "rsaprobe/experiment.hpp"
#include "rsaprobe/glossary.hpp"

namespace {

using rsaprobe::EmbeddingTable;

EmbeddingTable random_table(std::size_t rows, std::size_t dim, const std::string& prefix) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::vector<std::pair<std::string, rsaprobe::Vector>> data;
  for (std::size_t r = 0; r < rows; ++r) {
    rsaprobe::Vector v(dim);
    for (double& x : v) x = g(rng);
    data.emplace_back(prefix + std::to_string(r), std::move(v));
  }
  return EmbeddingTable::from_rows(dim, data);
}

rsaprobe::ItemSet tokens(const std::string& name, rsaprobe::SetKind kind, std::size_t from,
                         std::size_t count) {
  std::vector<rsaprobe::Item> items;
  for (std::size_t i = from; i < from + count; ++i) {
    const auto t = "t" + std::to_string(i);
    items.push_back({t, t, t, name});
  }
  return rsaprobe::ItemSet(name, kind, items);
}

// Full 100-sample experiment on 300-dimensional vectors.
void BM_RunExperiment(benchmark::State& state) {
  const auto table = random_table(39, 300, "t");
  rsaprobe::ExperimentConfig config{
      .name = "bench",
      .group1 = tokens("g1", rsaprobe::SetKind::kGroup, 0, 13),
      .group2 = tokens("g2", rsaprobe::SetKind::kGroup, 13, 13),
      .concept_set = tokens("c", rsaprobe::SetKind::kConcept, 26, 13),
      .source = {},
      .labels = {}};
  const rsaprobe::SourceInfo info{{}, "", "bench"};
  const rsaprobe::RunOptions options{static_cast<unsigned>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        rsaprobe::run_experiment(config, rsaprobe::SourceView(&table), true, info, options));
  }
}
BENCHMARK(BM_RunExperiment)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ParseGlove(benchmark::State& state) {
  std::stringstream text;
  rsaprobe::write_glove(random_table(static_cast<std::size_t>(state.range(0)), 300, "w"), text);
  const auto bytes = text.str();
  for (auto _ : state) {
    std::istringstream in(bytes);
    benchmark::DoNotOptimize(rsaprobe::load_glove(in, "bench"));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(bytes.size()));
}
BENCHMARK(BM_ParseGlove)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
