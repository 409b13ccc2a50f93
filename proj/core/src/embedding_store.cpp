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

#include "rsaprobe/embedding_store.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>
#include <utility>

#include <nlohmann/json.hpp>

#include "rsaprobe/error.hpp"

namespace rsaprobe {
namespace {

// Splits on single spaces, dropping empty fields.
void split_fields(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (start <= line.size()) {
    auto end = line.find(' ', start);
    if (end == std::string_view::npos) end = line.size();
    if (end > start) out.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

bool parse_float(std::string_view field, float& value) {
  const char* first = field.data();
  const char* last = first + field.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last && std::isfinite(value);
}

}  // namespace

std::string fold_case(std::string_view token) {
  std::string out(token);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

EmbeddingTable EmbeddingTable::from_rows(
    std::size_t dim, const std::vector<std::pair<std::string, Vector>>& rows) {
  if (dim == 0) throw InvalidArgument("embedding dimension must be positive");
  EmbeddingTable table(dim);
  table.reserve(rows.size());
  std::vector<float> buffer(dim);
  for (const auto& [token, values] : rows) {
    if (values.size() != dim) {
      throw InvalidArgument("row '" + token + "' has " +
                            std::to_string(values.size()) + " values, expected " +
                            std::to_string(dim));
    }
    for (std::size_t i = 0; i < dim; ++i) {
      buffer[i] = static_cast<float>(values[i]);
    }
    table.append(token, buffer);
  }
  return table;
}

bool EmbeddingTable::contains(std::string_view token) const {
  return index_.find(std::string(token)) != index_.end();
}

std::span<const float> EmbeddingTable::row(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) throw MissingTokenError({std::string(token)});
  return row_at(it->second);
}

std::span<const float> EmbeddingTable::row_at(std::size_t index) const {
  return {data_.data() + index * dim_, dim_};
}

void EmbeddingTable::append(std::string token, std::span<const float> values) {
  if (values.size() != dim_) {
    throw InvalidArgument("row '" + token + "' has " +
                          std::to_string(values.size()) + " values, expected " +
                          std::to_string(dim_));
  }
  auto [it, inserted] = index_.emplace(token, tokens_.size());
  if (!inserted) throw InvalidArgument("duplicate token '" + token + "'");
  tokens_.push_back(std::move(token));
  data_.insert(data_.end(), values.begin(), values.end());
}

void EmbeddingTable::reserve(std::size_t rows) {
  tokens_.reserve(rows);
  data_.reserve(rows * dim_);
  index_.reserve(rows);
}

EmbeddingTable load_glove(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return load_glove(in, path);
}

EmbeddingTable load_glove(std::istream& in, const std::string& name) {
  EmbeddingTable table;
  std::string line;
  std::vector<std::string_view> fields;
  std::vector<float> values;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    split_fields(line, fields);
    if (fields.empty()) {
      throw ParseError(name, line_no, "empty line");
    }
    if (fields.size() < 2) {
      throw ParseError(name, line_no,
                       "no vector values for token '" + std::string(fields[0]) +
                           "'");
    }
    const std::size_t dim = fields.size() - 1;
    if (table.dim_ == 0) {
      table.dim_ = dim;
    } else if (dim != table.dim_) {
      throw ParseError(name, line_no,
                       "ragged line: " + std::to_string(dim) +
                           " values, expected " + std::to_string(table.dim_));
    }
    values.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      if (!parse_float(fields[i + 1], values[i])) {
        throw ParseError(name, line_no,
                         "unparseable float '" + std::string(fields[i + 1]) +
                             "' in column " + std::to_string(i + 2));
      }
    }
    std::string token(fields[0]);
    if (table.contains(token)) {
      throw ParseError(name, line_no, "duplicate token '" + token + "'");
    }
    table.append(std::move(token), values);
  }
  if (in.bad()) throw ParseError(name, line_no, "read error");
  if (table.empty()) throw ParseError(name, 0, "empty file");
  return table;
}

void write_glove(const EmbeddingTable& table, std::ostream& out) {
  char buf[64];
  for (std::size_t r = 0; r < table.size(); ++r) {
    out << table.tokens()[r];
    for (float v : table.row_at(r)) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
}

void write_glove(const EmbeddingTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  write_glove(table, out);
}

Vector lookup(const EmbeddingTable& table, std::string_view token,
              bool case_fold) {
  const auto row =
      case_fold ? table.row(fold_case(token)) : table.row(token);
  return Vector(row.begin(), row.end());
}

bool ContextualStore::contains(std::string_view id) const {
  return vectors_.find(std::string(id)) != vectors_.end();
}

const Vector& ContextualStore::vector(std::string_view id) const {
  auto it = vectors_.find(std::string(id));
  if (it == vectors_.end()) throw MissingTokenError({std::string(id)});
  return it->second;
}

void ContextualStore::add(std::string id, Vector values) {
  if (values.size() != dim_) {
    throw InvalidArgument("vector for '" + id + "' has " +
                          std::to_string(values.size()) + " values, expected " +
                          std::to_string(dim_));
  }
  if (vectors_.count(id) != 0) {
    throw InvalidArgument("duplicate id '" + id + "'");
  }
  ids_.push_back(id);
  vectors_.emplace(std::move(id), std::move(values));
}

ContextualStore load_contextual(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return load_contextual(in, path);
}

ContextualStore load_contextual(std::istream& in, const std::string& name) {
  using nlohmann::json;
  std::string line;
  std::size_t line_no = 0;

  auto next_record = [&](json& record) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      try {
        record = json::parse(line);
      } catch (const json::parse_error& e) {
        throw ParseError(name, line_no, std::string("invalid JSON: ") + e.what());
      }
      if (!record.is_object()) {
        throw ParseError(name, line_no, "record is not a JSON object");
      }
      return true;
    }
    return false;
  };

  auto field = [&](const json& record, const char* key, json::value_t type) {
    auto it = record.find(key);
    if (it == record.end()) {
      throw ParseError(name, line_no, std::string("missing field '") + key + "'");
    }
    const bool ok = type == json::value_t::number_integer
                        ? it->is_number_integer()
                        : it->type() == type;
    if (!ok) {
      throw ParseError(name, line_no,
                       std::string("field '") + key + "' has the wrong type");
    }
    return *it;
  };

  json header;
  if (!next_record(header)) throw ParseError(name, 0, "empty file");
  const auto schema = field(header, "schema", json::value_t::string);
  if (schema.get<std::string>() != kContextualSchema) {
    throw ParseError(name, line_no,
                     "unsupported schema '" + schema.get<std::string>() + "'");
  }
  const auto dim_field = field(header, "dim", json::value_t::number_integer);
  if (dim_field.get<long long>() <= 0) {
    throw ParseError(name, line_no, "dim must be positive");
  }
  ContextualProvenance provenance;
  provenance.model = field(header, "model", json::value_t::string).get<std::string>();
  provenance.layer = field(header, "layer", json::value_t::number_integer).get<int>();
  provenance.pooling = field(header, "pooling", json::value_t::string).get<std::string>();
  if (provenance.pooling != "mean" && provenance.pooling != "first") {
    throw ParseError(name, line_no,
                     "pooling must be 'mean' or 'first', got '" +
                         provenance.pooling + "'");
  }

  ContextualStore store(static_cast<std::size_t>(dim_field.get<long long>()),
                        provenance);
  json record;
  while (next_record(record)) {
    auto id = field(record, "id", json::value_t::string).get<std::string>();
    field(record, "text", json::value_t::string);
    field(record, "target", json::value_t::string);
    const auto& values = field(record, "vector", json::value_t::array);
    if (values.size() != store.dim()) {
      throw ParseError(name, line_no,
                       "dimension mismatch for '" + id + "': " +
                           std::to_string(values.size()) + " values, expected " +
                           std::to_string(store.dim()));
    }
    Vector v;
    v.reserve(values.size());
    for (const auto& x : values) {
      if (!x.is_number()) {
        throw ParseError(name, line_no, "non-numeric vector entry for '" + id + "'");
      }
      v.push_back(x.get<double>());
    }
    if (store.contains(id)) {
      throw ParseError(name, line_no, "duplicate id '" + id + "'");
    }
    store.add(std::move(id), std::move(v));
  }
  if (in.bad()) throw ParseError(name, line_no, "read error");
  return store;
}

void write_contextual(const ContextualStore& store,
                      const std::vector<Item>& items, std::ostream& out) {
  // Key order follows the interchange format.
  using nlohmann::ordered_json;
  const auto& p = store.provenance();
  out << ordered_json{{"schema", kContextualSchema},
                      {"dim", store.dim()},
                      {"model", p.model},
                      {"layer", p.layer},
                      {"pooling", p.pooling}}
             .dump()
      << '\n';
  for (const auto& id : store.ids()) {
    std::string text, target;
    for (const auto& item : items) {
      if (item.id == id) {
        text = item.text;
        target = item.target;
        break;
      }
    }
    out << ordered_json{{"id", id},
                        {"text", text},
                        {"target", target},
                        {"vector", store.vector(id)}}
               .dump()
        << '\n';
  }
}

std::vector<Vector> embed_items(std::span<const Item> items,
                                const EmbeddingTable& table, bool case_fold) {
  std::vector<Vector> out;
  std::vector<std::string> missing;
  out.reserve(items.size());
  for (const auto& item : items) {
    const std::string key = case_fold ? fold_case(item.target) : item.target;
    if (!table.contains(key)) {
      missing.push_back(item.target);
      continue;
    }
    const auto row = table.row(key);
    out.emplace_back(row.begin(), row.end());
  }
  if (!missing.empty()) throw MissingTokenError(std::move(missing));
  return out;
}

std::vector<Vector> embed_items(std::span<const Item> items,
                                const ContextualStore& store) {
  std::vector<Vector> out;
  std::vector<std::string> missing;
  out.reserve(items.size());
  for (const auto& item : items) {
    if (!store.contains(item.id)) {
      missing.push_back(item.id);
      continue;
    }
    out.push_back(store.vector(item.id));
  }
  if (!missing.empty()) throw MissingTokenError(std::move(missing));
  return out;
}

std::vector<Vector> embed_items(std::span<const Item> items, SourceView source,
                                bool case_fold) {
  return std::visit(
      [&](const auto* store) {
        using T = std::decay_t<decltype(*store)>;
        if constexpr (std::is_same_v<T, EmbeddingTable>) {
          return embed_items(items, *store, case_fold);
        } else {
          return embed_items(items, *store);
        }
      },
      source);
}

}  // namespace rsaprobe
