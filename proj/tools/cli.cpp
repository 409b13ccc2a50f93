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

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rsaprobe/error.hpp"
#include "rsaprobe/experiment.hpp"
#include "rsaprobe/glossary.hpp"

namespace rsaprobe::cli {
namespace {

using nlohmann::json;

bool is_suite_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return json::parse(in).contains("experiments");
  } catch (const json::parse_error& e) {
    throw ParseError(path, 0, e.what());
  }
}

std::vector<ExperimentConfig> load_configs(const std::string& path) {
  if (is_suite_file(path)) return load_suite(path);
  return {load_config(path)};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
}

std::string summary_line(const ExperimentResult& r) {
  const auto& s = r.summary;
  std::ostringstream line;
  line.precision(6);
  line << std::fixed << s.mean_s1 << ' ' << s.mean_s2 << ' ';
  line.unsetf(std::ios::floatfield);
  line.precision(3);
  line << s.sign_test.p_value << ' ' << to_string(s.sign_test.direction);
  return line.str();
}

std::string safe_file_stem(const std::string& name) {
  std::string out;
  for (char c : name) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
            c == '.')
               ? c
               : '_';
  }
  return out.empty() ? "experiment" : out;
}

int cmd_validate(const std::string& config_path, bool as_json,
                 std::ostream& out) {
  const auto configs = load_configs(config_path);
  SourceCache sources;
  json report = json::array();
  bool clean = true;
  for (const auto& config : configs) {
    const auto& source = sources.get(config.source);
    const auto missing =
        validate_experiment(config, source.view(), config.source.case_fold);
    clean = clean && missing.empty();
    report.push_back({{"name", config.name},
                      {"source", config.source.path},
                      {"missing", missing}});
    if (!as_json) {
      out << config.name << ": "
          << (missing.empty() ? "ok" : "missing items") << '\n';
      for (const auto& [set, items] : missing) {
        out << "  " << set << ":";
        for (const auto& item : items) out << ' ' << item;
        out << '\n';
      }
    }
  }
  if (as_json) out << report.dump(2) << '\n';
  return clean ? kExitOk : kExitValidation;
}

int cmd_run(const std::string& config_path, const std::string& out_path,
            bool as_json, unsigned threads, std::ostream& out) {
  const auto config = load_config(config_path);
  const auto source = load_source(config.source);
  const auto result = run_experiment(config, source, RunOptions{threads});
  const auto j = to_json(result);
  if (!out_path.empty()) write_file(out_path, j.dump(2) + "\n");
  if (as_json) {
    out << j.dump(2) << '\n';
  } else {
    out << summary_line(result) << '\n';
  }
  return kExitOk;
}

int cmd_suite(const std::string& config_path, const std::string& out_dir,
              bool as_json, unsigned threads, std::ostream& out,
              std::ostream& err) {
  const auto configs = load_suite(config_path);
  SourceCache sources;
  const auto rows = run_suite(configs, sources, RunOptions{threads});

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  json index = json::array();
  bool ok = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (!row.result) {
      ok = false;
      err << "row " << i + 1 << " (" << row.name << "): " << row.error << '\n';
      index.push_back({{"name", row.name}, {"error", row.error}});
      continue;
    }
    char prefix[16];
    std::snprintf(prefix, sizeof(prefix), "%02zu_", i + 1);
    const auto file = std::string(prefix) + safe_file_stem(row.name) + ".json";
    write_file(dir / file, to_json(*row.result).dump(2) + "\n");
    index.push_back({{"name", row.name}, {"result", file}});
  }
  const auto markdown = render_markdown(rows);
  write_file(dir / "table.md", markdown);
  write_file(dir / "table.tsv", render_tsv(rows));
  write_file(dir / "index.json", index.dump(2) + "\n");
  if (as_json) {
    out << index.dump(2) << '\n';
  } else {
    out << markdown;
  }
  return ok ? kExitOk : kExitRuntime;
}

int cmd_templates(const std::string& spec, const std::string& out_path,
                  std::ostream& out, std::ostream& err) {
  if (spec.empty()) {
    err << "templates: --spec must name a template set\n";
    return kExitUsage;
  }
  const auto name = resolve_template_spec(spec);
  if (!name) {
    err << "templates: unknown spec '" << spec << "'\n";
    return kExitUsage;
  }
  const auto set = find_builtin(*name);
  std::string manifest;
  for (const auto& item : set->items()) {
    manifest += nlohmann::ordered_json{
                    {"id", item.id}, {"text", item.text}, {"target", item.target}}
                    .dump() +
                "\n";
  }
  write_file(out_path, manifest);
  out << "wrote " << set->size() << " items of " << *name << " to " << out_path
      << '\n';
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& paths, bool tsv,
               std::ostream& out) {
  std::vector<SuiteRow> rows;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ParseError(path, 0, e.what());
    }
    auto result = result_from_json(j);
    SuiteRow row;
    row.name = result.name;
    row.labels = result.labels;
    row.result = std::move(result);
    rows.push_back(std::move(row));
  }
  out << (tsv ? render_tsv(rows) : render_markdown(rows));
  return kExitOk;
}

}  // namespace

std::optional<std::string> resolve_template_spec(std::string_view spec) {
  static const std::map<std::string, std::string, std::less<>> aliases = {
      {"black-female", "black_female_sentences.race"},
      {"white-female", "white_female_sentences.race"},
      {"black-male", "black_male_sentences.race"},
      {"white-male", "white_male_sentences.race"},
      {"black-female.gender", "black_female_sentences.gender"},
      {"white-female.gender", "white_female_sentences.gender"},
      {"black-male.gender", "black_male_sentences.gender"},
      {"white-male.gender", "white_male_sentences.gender"},
      {"female-concept", "female_concept_sentences"},
      {"black-concept", "black_concept_sentences"},
  };
  if (auto it = aliases.find(spec); it != aliases.end()) return it->second;
  if (find_builtin(spec)) return std::string(spec);
  return std::nullopt;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Probe embedding spaces for differential association biases "
               "with representational similarity analysis"};
  app.name("rsaprobe");
  app.require_subcommand(1);

  std::string config_path, out_path, spec;
  std::vector<std::string> result_paths;
  bool as_json = false, tsv = false;
  unsigned threads = 0;

  auto* validate = app.add_subcommand("validate", "Check that every item resolves against its source");
  validate->add_option("--config", config_path, "Experiment or suite config")->required();
  validate->add_flag("--json", as_json, "Machine-readable output");

  auto* run_cmd = app.add_subcommand("run", "Run one experiment");
  run_cmd->add_option("--config", config_path, "Experiment config")->required();
  run_cmd->add_option("--out", out_path, "Write the result JSON here");
  run_cmd->add_flag("--json", as_json, "Print the full result JSON");
  run_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* suite = app.add_subcommand("suite", "Run a suite of experiments and render the results table");
  suite->add_option("--config", config_path, "Suite config")->required();
  suite->add_option("--out", out_path, "Output directory")->required();
  suite->add_option("--threads", threads, "Worker threads (0 = all cores)");
  suite->add_flag("--json", as_json, "Print the row index as JSON");

  auto* templates = app.add_subcommand("templates", "Write an extractor manifest of templated sentences");
  templates->add_option("--spec", spec, "Template set, e.g. black-female or female-concept")->required();
  templates->add_option("--out", out_path, "Manifest JSONL path")->required();

  auto* report = app.add_subcommand("report", "Render a comparison table from result files");
  report->add_option("results", result_paths, "Result JSON files")->required();
  report->add_flag("--tsv", tsv, "Tab-separated output");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size());
  for (auto it = args.rbegin(); it != args.rend(); ++it) argv_store.push_back(*it);
  try {
    app.parse(argv_store);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "rsaprobe: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(config_path, as_json, out);
    if (*run_cmd) return cmd_run(config_path, out_path, as_json, threads, out);
    if (*suite) return cmd_suite(config_path, out_path, as_json, threads, out, err);
    if (*templates) return cmd_templates(spec, out_path, out, err);
    if (*report) return cmd_report(result_paths, tsv, out);
  } catch (const ValidationError& e) {
    err << "rsaprobe: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "rsaprobe: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace rsaprobe::cli
