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
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#include "rsaprobe/error.hpp"

namespace rsaprobe {
namespace {

using nlohmann::json;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::string> ids_of(const ItemSet& set,
                                const std::vector<std::size_t>& positions) {
  std::vector<std::string> ids;
  ids.reserve(positions.size());
  for (auto p : positions) ids.push_back(set.items()[p].id);
  return ids;
}

TableLabels resolve_labels(const ExperimentConfig& config,
                           const std::string& source_label) {
  TableLabels l = config.labels;
  if (l.embedding.empty()) l.embedding = source_label;
  if (l.group1.empty()) l.group1 = config.group1.name();
  if (l.group2.empty()) l.group2 = config.group2.name();
  if (l.concept_label.empty()) l.concept_label = config.concept_set.name();
  return l;
}

json labels_to_json(const TableLabels& l) {
  return {{"embedding", l.embedding},
          {"group1", l.group1},
          {"group2", l.group2},
          {"concept", l.concept_label}};
}

TableLabels labels_from_json(const json& j) {
  TableLabels l;
  l.embedding = j.value("embedding", "");
  l.group1 = j.value("group1", "");
  l.group2 = j.value("group2", "");
  l.concept_label = j.value("concept", "");
  return l;
}

json source_to_json(const SourceSpec& s) {
  json j = {{"kind", std::string(to_string(s.kind))}, {"path", s.path}};
  if (s.kind == SourceKind::kGlove) j["case_fold"] = s.case_fold;
  return j;
}

SourceSpec source_from_json(const json& j, const std::filesystem::path& base_dir) {
  SourceSpec s;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "glove") {
    s.kind = SourceKind::kGlove;
  } else if (kind == "contextual") {
    s.kind = SourceKind::kContextual;
  } else {
    throw InvalidArgument("unknown source kind '" + kind +
                          "' (expected glove or contextual)");
  }
  std::filesystem::path p = j.at("path").get<std::string>();
  if (p.is_relative() && !base_dir.empty()) p = (base_dir / p).lexically_normal();
  s.path = p.string();
  s.case_fold = j.value("case_fold", true);
  return s;
}

ItemSet resolve_set(const json& ref, const std::filesystem::path& base_dir) {
  if (ref.is_object()) return item_set_from_json(ref);
  if (!ref.is_string()) {
    throw InvalidArgument("item-set reference must be a name, a path or an object");
  }
  const auto name = ref.get<std::string>();
  if (auto builtin = find_builtin(name)) return *builtin;
  std::filesystem::path p = name;
  if (p.is_relative()) p = base_dir / p;
  if (!std::filesystem::exists(p)) {
    throw InvalidArgument("'" + name +
                          "' is neither a built-in glossary nor an existing file");
  }
  return load_item_set(p.string());
}

json set_ref(const ItemSet& set) {
  auto builtin = find_builtin(set.name());
  if (builtin && *builtin == set) return set.name();
  return to_json(set);
}

std::string format_p(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", p);
  return buf;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path, 0, e.what());
  }
}

}  // namespace

std::string_view to_string(SourceKind kind) {
  return kind == SourceKind::kGlove ? "glove" : "contextual";
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for checksum");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 initialisation failed");
  }
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) {
      EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

SourceView LoadedSource::view() const {
  if (const auto* t = std::get_if<EmbeddingTable>(&store)) return t;
  return &std::get<ContextualStore>(store);
}

std::string LoadedSource::default_label() const {
  if (std::holds_alternative<EmbeddingTable>(store)) return "GloVe";
  return std::get<ContextualStore>(store).provenance().model;
}

LoadedSource load_source(const SourceSpec& spec) {
  if (spec.kind == SourceKind::kGlove) {
    auto table = load_glove(spec.path);
    return LoadedSource{spec, std::move(table), sha256_file(spec.path)};
  }
  auto store = load_contextual(spec.path);
  return LoadedSource{spec, std::move(store), sha256_file(spec.path)};
}

void validate_config(const ExperimentConfig& config) {
  auto check = [](std::size_t want, const ItemSet& pool, const char* role) {
    if (want == 0) {
      throw InvalidArgument(std::string(role) + " sample size must be positive");
    }
    if (want > pool.size()) {
      throw InvalidArgument(std::string(role) + " sample size " +
                            std::to_string(want) + " exceeds pool '" +
                            pool.name() + "' of size " +
                            std::to_string(pool.size()));
    }
  };
  check(config.n1, config.group1, "group1");
  check(config.n2, config.group2, "group2");
  check(config.n3, config.concept_set, "concept");
  if (config.num_samples == 0) {
    throw InvalidArgument("num_samples must be at least 1");
  }
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t sample_stream_seed(std::uint64_t master_seed, std::size_t index,
                                 std::string_view pool_name) {
  return mix64(mix64(mix64(master_seed) ^ static_cast<std::uint64_t>(index)) ^
               fnv1a(pool_name));
}

std::vector<std::size_t> draw_without_replacement(std::uint64_t stream_seed,
                                                  std::size_t n, std::size_t k) {
  if (k > n) {
    throw InvalidArgument("cannot draw " + std::to_string(k) + " of " +
                          std::to_string(n) + " items without replacement");
  }
  std::mt19937_64 rng(stream_seed);
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  return pool;
}

Sample draw_sample(const ExperimentConfig& config, std::size_t index) {
  auto draw = [&](const ItemSet& pool, std::size_t k) {
    return draw_without_replacement(
        sample_stream_seed(config.seed, index, pool.name()), pool.size(), k);
  };
  return Sample{draw(config.group1, config.n1), draw(config.group2, config.n2),
                draw(config.concept_set, config.n3)};
}

std::vector<Item> sample_items(const ExperimentConfig& config,
                               const Sample& sample) {
  std::vector<Item> items;
  items.reserve(sample.size());
  for (auto p : sample.group1) items.push_back(config.group1.items()[p]);
  for (auto p : sample.group2) items.push_back(config.group2.items()[p]);
  for (auto p : sample.concept_items) items.push_back(config.concept_set.items()[p]);
  return items;
}

RoleLabeling sample_labeling(const Sample& sample) {
  return RoleLabeling::blocks(sample.group1.size(), sample.group2.size(),
                              sample.concept_items.size());
}

SampleError::SampleError(std::size_t index, const std::string& what)
    : Error("sample " + std::to_string(index) + ": " + what), index_(index) {}

namespace {

std::string validation_message(
    const std::map<std::string, std::vector<std::string>>& missing) {
  std::string msg = "items without embeddings:";
  for (const auto& [set, items] : missing) {
    msg += " " + set + " [";
    for (std::size_t i = 0; i < items.size(); ++i) {
      msg += (i ? ", " : "") + items[i];
    }
    msg += "]";
  }
  return msg;
}

}  // namespace

ValidationError::ValidationError(
    std::map<std::string, std::vector<std::string>> missing)
    : Error(validation_message(missing)), missing_(std::move(missing)) {}

std::map<std::string, std::vector<std::string>> validate_experiment(
    const ExperimentConfig& config, SourceView source, bool case_fold) {
  std::map<std::string, std::vector<std::string>> missing;
  for (const ItemSet* set :
       {&config.group1, &config.group2, &config.concept_set}) {
    auto report = std::visit(
        [&](const auto* store) {
          using T = std::decay_t<decltype(*store)>;
          if constexpr (std::is_same_v<T, EmbeddingTable>) {
            return validate_set(*set, *store, case_fold);
          } else {
            return validate_set(*set, *store);
          }
        },
        source);
    if (!report.empty()) missing[set->name()] = std::move(report);
  }
  return missing;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const LoadedSource& source,
                                const RunOptions& options) {
  return run_experiment(
      config, source.view(), source.spec.case_fold,
      SourceInfo{source.spec, source.sha256, source.default_label()}, options);
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                SourceView source, bool case_fold,
                                const SourceInfo& info,
                                const RunOptions& options) {
  validate_config(config);
  if (auto missing = validate_experiment(config, source, case_fold);
      !missing.empty()) {
    throw ValidationError(std::move(missing));
  }

  const auto labeling = RoleLabeling::blocks(config.n1, config.n2, config.n3);
  const Rdm hyp1 = hypothesis_rdm(labeling, Role::kGroup2);
  const Rdm hyp2 = hypothesis_rdm(labeling, Role::kGroup1);

  const std::size_t total = config.num_samples;
  std::vector<SampleRecord> records(total);
  std::vector<std::exception_ptr> failures(total);

  auto score = [&](std::size_t index) {
    try {
      const Sample sample = draw_sample(config, index);
      const auto items = sample_items(config, sample);
      const auto vectors = embed_items(items, source, case_fold);
      const Rdm ref = reference_rdm(vectors);
      SampleRecord& rec = records[index];
      rec.index = index;
      rec.group1_ids = ids_of(config.group1, sample.group1);
      rec.group2_ids = ids_of(config.group2, sample.group2);
      rec.concept_ids = ids_of(config.concept_set, sample.concept_items);
      rec.s_hyp1 = rsa_similarity(ref, hyp1);
      rec.s_hyp2 = rsa_similarity(ref, hyp2);
    } catch (...) {
      failures[index] = std::current_exception();
    }
  };

  unsigned threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  if (threads <= 1) {
    for (std::size_t i = 0; i < total; ++i) score(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < total; i = next++) score(i);
      });
    }
  }

  // Report the lowest failing index so the error does not depend on timing.
  for (std::size_t i = 0; i < total; ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const std::exception& e) {
      throw SampleError(i, e.what());
    }
  }

  ExperimentResult result;
  result.name = config.name;
  result.config = config_to_json(config);
  result.source = info;
  result.labels = resolve_labels(config, info.label);
  result.s_hyp1.reserve(total);
  result.s_hyp2.reserve(total);
  for (const auto& rec : records) {
    result.s_hyp1.push_back(rec.s_hyp1);
    result.s_hyp2.push_back(rec.s_hyp2);
  }
  result.summary = summarize(result.s_hyp1, result.s_hyp2);
  result.samples = std::move(records);
  return result;
}

const LoadedSource& SourceCache::get(const SourceSpec& spec) {
  auto key = std::make_pair(static_cast<int>(spec.kind), spec.path);
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    it = cache_.emplace(key, std::make_unique<LoadedSource>(load_source(spec))).first;
  }
  return *it->second;
}

std::vector<SuiteRow> run_suite(const std::vector<ExperimentConfig>& configs,
                                SourceCache& sources,
                                const RunOptions& options) {
  std::vector<SuiteRow> rows;
  rows.reserve(configs.size());
  for (const auto& config : configs) {
    SuiteRow row;
    row.name = config.name;
    row.labels = resolve_labels(
        config, config.source.kind == SourceKind::kGlove ? "GloVe" : "contextual");
    try {
      row.result = run_experiment(config, sources.get(config.source), options);
      row.labels = row.result->labels;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_mean(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  if (s.rfind("0.", 0) == 0) {
    s.erase(0, 1);
  } else if (s.rfind("-0.", 0) == 0) {
    s.erase(1, 1);
  }
  return s;
}

std::string render_markdown(const std::vector<SuiteRow>& rows) {
  std::ostringstream out;
  out << "| Embedding | Group 1 | Group 2 | Concept | Group 1 + Con | "
         "Group 2 + Con | p | Direction |\n";
  out << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& row : rows) {
    const auto& l = row.labels;
    out << "| " << l.embedding << " | " << l.group1 << " | " << l.group2
        << " | " << l.concept_label << " | ";
    if (!row.result) {
      out << "error | error | - | " << row.error << " |\n";
      continue;
    }
    const auto& s = row.result->summary;
    auto cell = [](double v, bool bold) {
      return bold ? "**" + format_mean(v) + "**" : format_mean(v);
    };
    out << cell(s.mean_s1, s.mean_s1 > s.mean_s2) << " | "
        << cell(s.mean_s2, s.mean_s2 > s.mean_s1) << " | "
        << format_p(s.sign_test.p_value) << " | "
        << to_string(s.sign_test.direction) << " |\n";
  }
  return out.str();
}

std::string render_tsv(const std::vector<SuiteRow>& rows) {
  std::ostringstream out;
  out << "Embedding\tGroup 1\tGroup 2\tConcept\tGroup 1 + Con\tGroup 2 + Con\t"
         "p\tDirection\n";
  for (const auto& row : rows) {
    const auto& l = row.labels;
    out << l.embedding << '\t' << l.group1 << '\t' << l.group2 << '\t'
        << l.concept_label << '\t';
    if (!row.result) {
      out << "error\terror\t-\t" << row.error << '\n';
      continue;
    }
    const auto& s = row.result->summary;
    out << format_mean(s.mean_s1) << '\t' << format_mean(s.mean_s2) << '\t'
        << format_p(s.sign_test.p_value) << '\t'
        << to_string(s.sign_test.direction) << '\n';
  }
  return out.str();
}

ExperimentConfig config_from_json(const json& j,
                                  const std::filesystem::path& base_dir) {
  try {
    ExperimentConfig c{
        .name = j.at("name").get<std::string>(),
        .group1 = resolve_set(j.at("group1"), base_dir),
        .group2 = resolve_set(j.at("group2"), base_dir),
        .concept_set = resolve_set(j.at("concept"), base_dir),
        .source = source_from_json(j.at("source"), base_dir),
        .labels = {},
    };
    c.n1 = j.value("n1", std::size_t{10});
    c.n2 = j.value("n2", std::size_t{10});
    c.n3 = j.value("n3", std::size_t{10});
    c.num_samples = j.value("num_samples", std::size_t{100});
    c.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("labels")) c.labels = labels_from_json(j.at("labels"));
    validate_config(c);
    return c;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed experiment config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  const auto j = read_json_file(path);
  return config_from_json(j, std::filesystem::path(path).parent_path());
}

std::vector<ExperimentConfig> load_suite(const std::string& path) {
  const auto j = read_json_file(path);
  const auto base = std::filesystem::path(path).parent_path();
  if (!j.contains("experiments") || !j.at("experiments").is_array()) {
    throw InvalidArgument("suite file '" + path + "' has no 'experiments' array");
  }
  std::vector<ExperimentConfig> configs;
  for (auto e : j.at("experiments")) {
    if (!e.contains("source") && j.contains("source")) e["source"] = j.at("source");
    if (!e.contains("seed") && j.contains("seed")) e["seed"] = j.at("seed");
    configs.push_back(config_from_json(e, base));
  }
  return configs;
}

json config_to_json(const ExperimentConfig& c) {
  json j = {{"name", c.name},
            {"group1", set_ref(c.group1)},
            {"group2", set_ref(c.group2)},
            {"concept", set_ref(c.concept_set)},
            {"n1", c.n1},
            {"n2", c.n2},
            {"n3", c.n3},
            {"num_samples", c.num_samples},
            {"seed", c.seed},
            {"source", source_to_json(c.source)}};
  const auto& l = c.labels;
  if (!l.embedding.empty() || !l.group1.empty() || !l.group2.empty() ||
      !l.concept_label.empty()) {
    j["labels"] = labels_to_json(l);
  }
  return j;
}

json to_json(const ExperimentResult& r) {
  json samples = json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"index", s.index},
                       {"group1", s.group1_ids},
                       {"group2", s.group2_ids},
                       {"concept", s.concept_ids},
                       {"s_hyp1", s.s_hyp1},
                       {"s_hyp2", s.s_hyp2}});
  }
  json source = source_to_json(r.source.spec);
  source["sha256"] = r.source.sha256;
  source["label"] = r.source.label;
  return {{"name", r.name},
          {"seed", r.config.value("seed", std::uint64_t{0})},
          {"config", r.config},
          {"source", std::move(source)},
          {"labels", labels_to_json(r.labels)},
          {"mean_s1", r.summary.mean_s1},
          {"mean_s2", r.summary.mean_s2},
          {"sign_test", to_json(r.summary.sign_test)},
          {"s_hyp1", r.s_hyp1},
          {"s_hyp2", r.s_hyp2},
          {"samples", std::move(samples)}};
}

ExperimentResult result_from_json(const json& j) {
  try {
    ExperimentResult r;
    r.name = j.at("name").get<std::string>();
    r.config = j.at("config");
    const auto& src = j.at("source");
    r.source.spec = source_from_json(src, {});
    r.source.sha256 = src.value("sha256", "");
    r.source.label = src.value("label", "");
    r.labels = labels_from_json(j.at("labels"));
    r.s_hyp1 = j.at("s_hyp1").get<std::vector<double>>();
    r.s_hyp2 = j.at("s_hyp2").get<std::vector<double>>();
    r.summary.mean_s1 = j.at("mean_s1").get<double>();
    r.summary.mean_s2 = j.at("mean_s2").get<double>();
    r.summary.sign_test = sign_test_from_json(j.at("sign_test"));
    for (const auto& s : j.at("samples")) {
      r.samples.push_back(SampleRecord{
          s.at("index").get<std::size_t>(),
          s.at("group1").get<std::vector<std::string>>(),
          s.at("group2").get<std::vector<std::string>>(),
          s.at("concept").get<std::vector<std::string>>(),
          s.at("s_hyp1").get<double>(), s.at("s_hyp2").get<double>()});
    }
    return r;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed result JSON: ") + e.what());
  }
}

}  // namespace rsaprobe
