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

#ifndef RSAPROBE_TESTS_FIXTURES_HPP_
#define RSAPROBE_TESTS_FIXTURES_HPP_

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "oracles.hpp"
#include "rsaprobe/embedding_store.hpp"
#include "rsaprobe/experiment.hpp"
#include "rsaprobe/glossary.hpp"

namespace rsaprobe::testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    std::random_device rd;
    for (;;) {
      path_ = base / ("rsaprobe-test-" + std::to_string(::getpid()) + "-" +
                      std::to_string(rd()));
      if (std::filesystem::create_directory(path_)) break;
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline ItemSet token_set(const std::string& name, SetKind kind,
                         const std::string& prefix, std::size_t count) {
  std::vector<Item> items;
  for (std::size_t i = 0; i < count; ++i) {
    const auto token = prefix + std::to_string(i);
    items.push_back(Item{token, token, token, name});
  }
  return ItemSet(name, kind, std::move(items));
}

// Group 1 and concept tokens are noisy copies of base A; group 2 tokens are
// noisy copies of an independent base B.
struct SyntheticFixture {
  EmbeddingTable table;
  ItemSet group1;
  ItemSet group2;
  ItemSet concept_set;
};

inline SyntheticFixture make_synthetic(std::size_t dim, double sigma,
                                       std::uint64_t seed,
                                       std::size_t pool = 13) {
  std::mt19937_64 rng(seed);
  const auto base_a = oracle::gaussian_vector(dim, rng);
  const auto base_b = oracle::gaussian_vector(dim, rng);
  std::vector<std::pair<std::string, Vector>> rows;
  auto add = [&](const std::string& prefix, const std::vector<double>& base) {
    auto copies = oracle::noisy_copies(base, pool, sigma, rng);
    for (std::size_t i = 0; i < pool; ++i) {
      rows.emplace_back(prefix + std::to_string(i), copies[i]);
    }
  };
  add("ga", base_a);
  add("gb", base_b);
  add("ca", base_a);
  return SyntheticFixture{
      EmbeddingTable::from_rows(dim, rows),
      token_set("synthetic_g1", SetKind::kGroup, "ga", pool),
      token_set("synthetic_g2", SetKind::kGroup, "gb", pool),
      token_set("synthetic_concept", SetKind::kConcept, "ca", pool)};
}

inline ExperimentConfig synthetic_config(const SyntheticFixture& f,
                                         std::uint64_t seed = 0,
                                         std::size_t samples = 100) {
  ExperimentConfig c{.name = "synthetic",
                     .group1 = f.group1,
                     .group2 = f.group2,
                     .concept_set = f.concept_set,
                     .source = {},
                     .labels = {}};
  c.seed = seed;
  c.num_samples = samples;
  return c;
}

}  // namespace rsaprobe::testing

#endif  // RSAPROBE_TESTS_FIXTURES_HPP_
