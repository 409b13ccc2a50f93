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

// Experiment driver.
//
// One experiment draws `num_samples` independent samples of n1 group-1,
// n2 group-2 and n3 concept items. For each sample it builds the reference
// RDM from the embeddings and scores it against both hypothesis RDMs,
// producing the paired vectors S_hyp1 and S_hyp2, which are then compared
// with a sign test.
//
// Seeding: sample k of a pool P is drawn with a std::mt19937_64 seeded by
// splitmix64-mixing (master seed, k, FNV-1a(P.name)). Keying the stream by
// pool rather than by role keeps draws identical when group 1 and group 2
// are exchanged, and by sample index rather than execution order keeps
// results independent of the thread count.

#ifndef RSAPROBE_EXPERIMENT_HPP_
#define RSAPROBE_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsaprobe/embedding_store.hpp"
#include "rsaprobe/error.hpp"
#include "rsaprobe/glossary.hpp"
#include "rsaprobe/rsa.hpp"
#include "rsaprobe/stats.hpp"

namespace rsaprobe {

enum class SourceKind { kGlove, kContextual };

std::string_view to_string(SourceKind kind);

struct SourceSpec {
  SourceKind kind = SourceKind::kGlove;
  std::string path;
  // Only meaningful for GloVe tables.
  bool case_fold = true;

  bool operator==(const SourceSpec&) const = default;
};

// A source loaded into memory, with the SHA-256 of the file it came from.
struct LoadedSource {
  SourceSpec spec;
  std::variant<EmbeddingTable, ContextualStore> store;
  std::string sha256;

  SourceView view() const;
  // "GloVe" for tables; the producing model name for contextual stores.
  std::string default_label() const;
};

LoadedSource load_source(const SourceSpec& spec);

// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

// Display labels for the results table; empty fields fall back to the set
// and source names.
struct TableLabels {
  std::string embedding;
  std::string group1;
  std::string group2;
  std::string concept_label;
};

struct ExperimentConfig {
  std::string name;
  ItemSet group1;
  ItemSet group2;
  ItemSet concept_set;
  std::size_t n1 = 10;
  std::size_t n2 = 10;
  std::size_t n3 = 10;
  std::size_t num_samples = 100;
  std::uint64_t seed = 0;
  SourceSpec source;
  TableLabels labels;
};

// Throws InvalidArgument when a sample size exceeds its pool, a sample size
// is zero, or num_samples is zero.
void validate_config(const ExperimentConfig& config);

// Positions into each pool, in draw order. Canonical sample order is the
// group-1 block, then group-2, then concept.
struct Sample {
  std::vector<std::size_t> group1;
  std::vector<std::size_t> group2;
  std::vector<std::size_t> concept_items;

  std::size_t size() const {
    return group1.size() + group2.size() + concept_items.size();
  }
  bool operator==(const Sample&) const = default;
};

// splitmix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

// Seed of the generator that draws sample `index` from the pool `pool_name`.
std::uint64_t sample_stream_seed(std::uint64_t master_seed, std::size_t index,
                                 std::string_view pool_name);

// Uniform draw of k of n positions without replacement (partial
// Fisher-Yates).
std::vector<std::size_t> draw_without_replacement(std::uint64_t stream_seed,
                                                  std::size_t n, std::size_t k);

// Deterministic in (config.seed, index, pool names, pool sizes).
// Throws InvalidArgument when a pool is smaller than its requested size.
Sample draw_sample(const ExperimentConfig& config, std::size_t index);

// Items of a sample in canonical order, and the matching labels.
std::vector<Item> sample_items(const ExperimentConfig& config,
                               const Sample& sample);
RoleLabeling sample_labeling(const Sample& sample);

struct SampleRecord {
  std::size_t index = 0;
  std::vector<std::string> group1_ids;
  std::vector<std::string> group2_ids;
  std::vector<std::string> concept_ids;
  double s_hyp1 = 0.0;
  double s_hyp2 = 0.0;
};

struct SourceInfo {
  SourceSpec spec;
  std::string sha256;
  std::string label;
};

struct ExperimentResult {
  std::string name;
  nlohmann::json config;  // echo of the configuration as run
  SourceInfo source;
  TableLabels labels;     // resolved (never empty)
  std::vector<double> s_hyp1;
  std::vector<double> s_hyp2;
  Summary summary;
  std::vector<SampleRecord> samples;
};

struct RunOptions {
  // 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
};

// Raised when a single sample cannot be scored; carries the sample index.
class SampleError : public Error {
 public:
  SampleError(std::size_t index, const std::string& what);
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// Raised when item sets do not resolve against the source. Lists every
// unresolved target (tables) or id (contextual stores), per set.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::map<std::string, std::vector<std::string>> missing);
  const std::map<std::string, std::vector<std::string>>& missing() const {
    return missing_;
  }

 private:
  std::map<std::string, std::vector<std::string>> missing_;
};

// Missing items per set name; empty when every set resolves.
std::map<std::string, std::vector<std::string>> validate_experiment(
    const ExperimentConfig& config, SourceView source, bool case_fold);

// Runs the full procedure. The source info is echoed into the result.
// Throws ValidationError before sampling when items are missing,
// SampleError when a sample has an undefined correlation, and
// DegenerateTestError when every paired difference is zero.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const LoadedSource& source,
                                const RunOptions& options = {});
ExperimentResult run_experiment(const ExperimentConfig& config,
                                SourceView source, bool case_fold,
                                const SourceInfo& info,
                                const RunOptions& options = {});

// Loads each distinct source once.
class SourceCache {
 public:
  const LoadedSource& get(const SourceSpec& spec);

 private:
  std::map<std::pair<int, std::string>, std::unique_ptr<LoadedSource>> cache_;
};

struct SuiteRow {
  std::string name;
  TableLabels labels;
  std::optional<ExperimentResult> result;
  std::string error;  // set when result is empty
};

// Runs every config in order; a failing row records its error and the
// remaining rows still run.
std::vector<SuiteRow> run_suite(const std::vector<ExperimentConfig>& configs,
                                SourceCache& sources,
                                const RunOptions& options = {});

// Markdown table with columns Embedding | Group 1 | Group 2 | Concept |
// Group 1 + Con | Group 2 + Con | p | Direction; the larger mean is bold.
std::string render_markdown(const std::vector<SuiteRow>& rows);
// Same columns, tab-separated, no bolding.
std::string render_tsv(const std::vector<SuiteRow>& rows);

// ".375", "-.050": three decimals without the leading zero.
std::string format_mean(double v);

// Config files. Item-set references are built-in glossary names or paths
// to glossary JSON files, resolved relative to `base_dir`. See README for
// the schema.
ExperimentConfig config_from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::string& path);
// A suite file is {"source": {...}?, "experiments": [config, ...]}; the
// top-level source applies to experiments that do not name their own.
std::vector<ExperimentConfig> load_suite(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentResult& result);
ExperimentResult result_from_json(const nlohmann::json& j);

}  // namespace rsaprobe

#endif  // RSAPROBE_EXPERIMENT_HPP_
