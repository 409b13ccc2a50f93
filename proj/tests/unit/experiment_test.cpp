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

#include "rsaprobe/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "rsaprobe/error.hpp"

namespace rsaprobe {
namespace {

using testing::make_synthetic;
using testing::synthetic_config;

SourceInfo info_for(const char* label = "synthetic") {
  return SourceInfo{SourceSpec{SourceKind::kGlove, "synthetic.txt", true}, "", label};
}

ExperimentConfig names_config() {
  return ExperimentConfig{.name = "names",
                          .group1 = *find_builtin("black_female_names"),
                          .group2 = *find_builtin("black_male_names"),
                          .concept_set = *find_builtin("female_concept_words"),
                          .source = {},
                          .labels = {}};
}

TEST(DrawSample, SizesAndUniqueness) {
  const auto config = names_config();
  const auto s = draw_sample(config, 0);
  EXPECT_EQ(s.size(), 30u);
  for (const auto* block : {&s.group1, &s.group2, &s.concept_items}) {
    EXPECT_EQ(block->size(), 10u);
    EXPECT_EQ(std::set<std::size_t>(block->begin(), block->end()).size(), 10u);
  }
  EXPECT_TRUE(std::all_of(s.concept_items.begin(), s.concept_items.end(),
                          [](std::size_t p) { return p < 11; }));
  EXPECT_EQ(sample_items(config, s).size(), 30u);
  EXPECT_EQ(sample_labeling(s).size(), 30u);
}

TEST(DrawSample, FullPoolWhenSizesMatch) {
  auto config = names_config();
  config.n1 = 13;
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    config.seed = seed;
    auto g1 = draw_sample(config, 3).group1;
    std::sort(g1.begin(), g1.end());
    std::vector<std::size_t> all(13);
    std::iota(all.begin(), all.end(), 0);
    EXPECT_EQ(g1, all);
  }
}

TEST(DrawSample, Deterministic) {
  const auto config = names_config();
  EXPECT_EQ(draw_sample(config, 7), draw_sample(config, 7));
  EXPECT_NE(draw_sample(config, 7), draw_sample(config, 8));
  auto other = config;
  other.seed = 1;
  EXPECT_NE(draw_sample(config, 7), draw_sample(other, 7));
}

TEST(DrawSample, PoolTooSmall) {
  auto config = names_config();
  config.n3 = 12;
  EXPECT_THROW(draw_sample(config, 0), InvalidArgument);
  EXPECT_THROW(validate_config(config), InvalidArgument);
  config.n3 = 0;
  EXPECT_THROW(validate_config(config), InvalidArgument);
  config.n3 = 10;
  config.num_samples = 0;
  EXPECT_THROW(validate_config(config), InvalidArgument);
}

TEST(DrawWithoutReplacement, RoughlyUniform) {
  std::vector<int> counts(13, 0);
  for (std::uint64_t s = 0; s < 2000; ++s) {
    for (auto p : draw_without_replacement(mix64(s), 13, 10)) ++counts[p];
  }
  // Each position is expected 2000 * 10 / 13 = 1538 times.
  for (int c : counts) {
    EXPECT_GT(c, 1400);
    EXPECT_LT(c, 1680);
  }
}

TEST(RunExperiment, SyntheticFavoursHyp1) {
  const auto f = make_synthetic(50, 0.05, 42);
  const auto result =
      run_experiment(synthetic_config(f), SourceView(&f.table), true, info_for());
  EXPECT_EQ(result.s_hyp1.size(), 100u);
  EXPECT_EQ(result.summary.sign_test.direction, Direction::kHyp1);
  EXPECT_LT(result.summary.sign_test.p_value, 1e-3);
  EXPECT_GT(result.summary.mean_s1, result.summary.mean_s2);
  EXPECT_DOUBLE_EQ(result.summary.mean_s1, mean(result.s_hyp1));
  for (std::size_t i = 0; i < result.samples.size(); ++i) {
    const auto& rec = result.samples[i];
    EXPECT_EQ(rec.index, i);
    EXPECT_EQ(rec.s_hyp1, result.s_hyp1[i]);
    EXPECT_GE(rec.s_hyp1, -1.0);
    EXPECT_LE(rec.s_hyp1, 1.0);
    EXPECT_GE(rec.s_hyp2, -1.0);
    EXPECT_LE(rec.s_hyp2, 1.0);
    EXPECT_EQ(rec.group1_ids.size(), 10u);
  }
}

TEST(RunExperiment, DeterministicAndScheduleIndependent) {
  const auto f = make_synthetic(20, 0.5, 7);
  const auto config = synthetic_config(f, 123, 40);
  const auto a = run_experiment(config, SourceView(&f.table), true, info_for(),
                                RunOptions{1});
  const auto b = run_experiment(config, SourceView(&f.table), true, info_for(),
                                RunOptions{1});
  const auto c = run_experiment(config, SourceView(&f.table), true, info_for(),
                                RunOptions{4});
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  EXPECT_EQ(to_json(a).dump(), to_json(c).dump());
}

TEST(RunExperiment, RoleSwapExchangesHypotheses) {
  const auto f = make_synthetic(30, 0.5, 9);
  auto config = synthetic_config(f, 5, 30);
  config.n1 = 8;
  config.n2 = 11;
  auto swapped = config;
  std::swap(swapped.group1, swapped.group2);
  std::swap(swapped.n1, swapped.n2);
  const auto a = run_experiment(config, SourceView(&f.table), true, info_for());
  const auto b = run_experiment(swapped, SourceView(&f.table), true, info_for());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    EXPECT_EQ(a.samples[i].group1_ids, b.samples[i].group2_ids);
    EXPECT_NEAR(a.samples[i].s_hyp1, b.samples[i].s_hyp2, 1e-12);
    EXPECT_NEAR(a.samples[i].s_hyp2, b.samples[i].s_hyp1, 1e-12);
  }
}

TEST(RunExperiment, MissingItemsFailValidation) {
  const auto f = make_synthetic(10, 0.1, 1);
  auto config = synthetic_config(f);
  config.concept_set = *find_builtin("female_concept_words");
  try {
    run_experiment(config, SourceView(&f.table), true, info_for());
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.missing().size(), 1u);
    EXPECT_EQ(e.missing().at("female_concept_words").size(), 11u);
  }
}

TEST(RunExperiment, ConstantVectorAbortsWithSampleIndex) {
  std::vector<std::pair<std::string, Vector>> rows;
  for (int i = 0; i < 3; ++i) {
    rows.emplace_back("a" + std::to_string(i), Vector{1.0 + i, 2, 3, 4});
    rows.emplace_back("b" + std::to_string(i), Vector{4, 3, 2, 1.0 + i});
    rows.emplace_back("c" + std::to_string(i), Vector{2, 1, 4, 3.0 + i});
  }
  rows.emplace_back("flat", Vector{1, 1, 1, 1});
  const auto table = EmbeddingTable::from_rows(4, rows);
  ExperimentConfig config{
      .name = "flat",
      .group1 = testing::token_set("g1", SetKind::kGroup, "a", 3),
      .group2 = testing::token_set("g2", SetKind::kGroup, "b", 3),
      .concept_set = ItemSet("c", SetKind::kConcept,
                             {{"c0", "c0", "c0", ""}, {"flat", "flat", "flat", ""}}),
      .n1 = 2, .n2 = 2, .n3 = 2, .num_samples = 5,
      .source = {}, .labels = {}};
  try {
    run_experiment(config, SourceView(&table), true, info_for(), RunOptions{3});
    FAIL() << "expected SampleError";
  } catch (const SampleError& e) {
    EXPECT_EQ(e.index(), 0u);
    EXPECT_NE(std::string(e.what()).find("constant"), std::string::npos);
  }
}

TEST(RunExperiment, ContextualSource) {
  // Sentence ids resolve against a contextual store; vectors cluster by
  // construction exactly as in the GloVe fixture.
  const auto f = make_synthetic(24, 0.05, 77);
  const auto g1 = *find_builtin("black_female_sentences.race");
  const auto g2 = *find_builtin("white_female_sentences.race");
  const auto con = *find_builtin("female_concept_sentences");
  ContextualStore store(24, {"synthetic", 12, "mean"});
  auto fill = [&](const ItemSet& set, const std::string& prefix) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      const auto row = f.table.row(prefix + std::to_string(i % 13));
      Vector v(row.begin(), row.end());
      v[0] += 1e-3 * static_cast<double>(i);  // distinct items
      store.add(set.items()[i].id, v);
    }
  };
  fill(g1, "gb");
  fill(g2, "ga");
  fill(con, "ca");
  ExperimentConfig config{.name = "ctx", .group1 = g1, .group2 = g2,
                          .concept_set = con, .source = {}, .labels = {}};
  config.source.kind = SourceKind::kContextual;
  const auto r = run_experiment(config, SourceView(&store), false, info_for());
  EXPECT_EQ(r.summary.sign_test.direction, Direction::kHyp2);
  EXPECT_LT(r.summary.sign_test.p_value, 1e-3);
}

TEST(FormatMean, PaperStyle) {
  EXPECT_EQ(format_mean(0.375), ".375");
  EXPECT_EQ(format_mean(0.0501), ".050");
  EXPECT_EQ(format_mean(-0.05), "-.050");
  EXPECT_EQ(format_mean(-0.0001), ".000");
  EXPECT_EQ(format_mean(1.0), "1.000");
}

TEST(Suite, ContinuesPastFailingRowsAndRendersTable) {
  testing::TempDir dir;
  const auto f = make_synthetic(20, 0.05, 3);
  write_glove(f.table, dir.file("syn.txt"));
  auto good = synthetic_config(f, 0, 30);
  good.source = {SourceKind::kGlove, dir.file("syn.txt"), true};
  good.labels = {"Toy", "G1", "G2", "Con"};
  auto missing_file = good;
  missing_file.name = "broken";
  missing_file.source.path = dir.file("absent.txt");
  SourceCache cache;
  const auto rows = run_suite({good, missing_file, good}, cache, RunOptions{2});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_TRUE(rows[0].result);
  EXPECT_FALSE(rows[1].result);
  EXPECT_NE(rows[1].error.find("absent.txt"), std::string::npos);
  EXPECT_TRUE(rows[2].result);
  EXPECT_EQ(rows[0].result->source.sha256.size(), 64u);

  const auto md = render_markdown(rows);
  EXPECT_NE(md.find("| Embedding | Group 1 | Group 2 | Concept | Group 1 + Con | "
                    "Group 2 + Con |"),
            std::string::npos);
  const auto& s = rows[0].result->summary;
  EXPECT_NE(md.find("| Toy | G1 | G2 | Con | **" + format_mean(s.mean_s1) + "** | " +
                    format_mean(s.mean_s2) + " |"),
            std::string::npos)
      << md;
  const auto tsv = render_tsv(rows);
  EXPECT_NE(tsv.find("Toy\tG1\tG2\tCon\t" + format_mean(s.mean_s1)), std::string::npos);
  EXPECT_NE(tsv.find("error"), std::string::npos);
}

TEST(Config, ParsesReferencesAndDefaults) {
  testing::TempDir dir;
  save_item_set(*find_builtin("white_male_names"), dir.file("custom.json"));
  const nlohmann::json j = {
      {"name", "row"},
      {"group1", "black_female_names"},
      {"group2", "custom.json"},
      {"concept", to_json(*find_builtin("female_concept_words"))},
      {"source", {{"kind", "glove"}, {"path", "vectors/glove.txt"}}}};
  const auto c = config_from_json(j, dir.path());
  EXPECT_EQ(c.group1.name(), "black_female_names");
  EXPECT_EQ(c.group2.name(), "white_male_names");
  EXPECT_EQ(c.concept_set.size(), 11u);
  EXPECT_EQ(c.n1, 10u);
  EXPECT_EQ(c.num_samples, 100u);
  EXPECT_EQ(c.seed, 0u);
  EXPECT_TRUE(c.source.case_fold);
  EXPECT_EQ(c.source.path, (dir.path() / "vectors/glove.txt").string());

  const auto echoed = config_to_json(c);
  EXPECT_EQ(echoed.at("group1"), "black_female_names");
  const auto again = config_from_json(echoed, {});
  EXPECT_EQ(again.group2, c.group2);
  EXPECT_EQ(again.source, c.source);
}

TEST(Config, Errors) {
  const nlohmann::json base = {
      {"name", "row"},
      {"group1", "black_female_names"},
      {"group2", "black_male_names"},
      {"concept", "female_concept_words"},
      {"source", {{"kind", "glove"}, {"path", "x"}}}};
  EXPECT_NO_THROW(config_from_json(base, {}));
  auto j = base;
  j["n3"] = 12;
  EXPECT_THROW(config_from_json(j, {}), InvalidArgument);
  j = base;
  j["group1"] = "no_such_set";
  EXPECT_THROW(config_from_json(j, {}), InvalidArgument);
  j = base;
  j["source"]["kind"] = "word2vec";
  EXPECT_THROW(config_from_json(j, {}), InvalidArgument);
  j = base;
  j.erase("name");
  EXPECT_THROW(config_from_json(j, {}), InvalidArgument);
}

TEST(Suite, LoadAppliesSharedSource) {
  testing::TempDir dir;
  std::ofstream(dir.file("suite.json")) << R"({
    "source": {"kind": "glove", "path": "g.txt"},
    "seed": 4,
    "experiments": [
      {"name": "a", "group1": "black_female_names", "group2": "black_male_names",
       "concept": "female_concept_words"},
      {"name": "b", "group1": "black_female_names", "group2": "white_female_names",
       "concept": "female_concept_words", "seed": 9,
       "source": {"kind": "contextual", "path": "c.jsonl"}}
    ]})";
  const auto configs = load_suite(dir.file("suite.json"));
  ASSERT_EQ(configs.size(), 2u);
  EXPECT_EQ(configs[0].source.path, dir.file("g.txt"));
  EXPECT_EQ(configs[0].seed, 4u);
  EXPECT_EQ(configs[1].source.kind, SourceKind::kContextual);
  EXPECT_EQ(configs[1].seed, 9u);
}

TEST(Result, JsonRoundTrip) {
  const auto f = make_synthetic(12, 0.2, 8);
  const auto r = run_experiment(synthetic_config(f, 1, 10), SourceView(&f.table),
                                true, info_for("Toy"));
  const auto j = to_json(r);
  EXPECT_EQ(j.at("seed"), 1);
  EXPECT_EQ(j.at("s_hyp1").size(), 10u);
  EXPECT_EQ(j.at("source").at("label"), "Toy");
  const auto back = result_from_json(j);
  EXPECT_EQ(back.s_hyp1, r.s_hyp1);
  EXPECT_EQ(back.summary.sign_test, r.summary.sign_test);
  EXPECT_EQ(back.samples.size(), r.samples.size());
  EXPECT_EQ(to_json(back).dump(), j.dump());
}

TEST(Sha256, KnownDigest) {
  testing::TempDir dir;
  std::ofstream(dir.file("abc")) << "abc";
  EXPECT_EQ(sha256_file(dir.file("abc")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace rsaprobe
