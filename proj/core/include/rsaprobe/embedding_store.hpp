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

// Embedding sources. EmbeddingTable holds static word vectors read from
// GloVe text files; ContextualStore holds per-item vectors produced by an
// external contextual model and exchanged as JSONL.
//
// GloVe text format, one record per line, no header:
//   <token> <f1> <f2> ... <fd>
//
// Contextual interchange JSONL, header first:
//   {"schema":"ctx-emb/1","dim":768,"model":"bert-base-uncased",
//    "layer":12,"pooling":"mean"}
//   {"id":"...","text":"...","target":"...","vector":[...]}
//
// Vectors are stored in single precision; all arithmetic downstream is done
// in double.

#ifndef RSAPROBE_EMBEDDING_STORE_HPP_
#define RSAPROBE_EMBEDDING_STORE_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "rsaprobe/glossary.hpp"

namespace rsaprobe {

using Vector = std::vector<double>;

// Dense row-major token -> vector table with a uniform dimension.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  // Throws InvalidArgument when dim is zero, a row has the wrong length or a
  // token repeats.
  static EmbeddingTable from_rows(
      std::size_t dim, const std::vector<std::pair<std::string, Vector>>& rows);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  bool contains(std::string_view token) const;
  // nullptr-free access; throws MissingTokenError when absent.
  std::span<const float> row(std::string_view token) const;
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::span<const float> row_at(std::size_t index) const;

  // Appends one row. Used by the parser; throws InvalidArgument on a
  // duplicate token or wrong length.
  void append(std::string token, std::span<const float> values);
  void reserve(std::size_t rows);

 private:
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}
  friend EmbeddingTable load_glove(std::istream&, const std::string&);

  std::size_t dim_ = 0;
  std::vector<std::string> tokens_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Lower-cases ASCII letters; other bytes pass through unchanged.
std::string fold_case(std::string_view token);

// Parses a GloVe text file. Dimension is inferred from the first record.
// Throws ParseError (with 1-based line) on a ragged line, an unparseable
// float, a duplicate token, a line with no values or an empty file.
EmbeddingTable load_glove(const std::string& path);
EmbeddingTable load_glove(std::istream& in, const std::string& name);

// Writes `table` in GloVe text format using the shortest representation
// that reads back to the same float.
void write_glove(const EmbeddingTable& table, std::ostream& out);
void write_glove(const EmbeddingTable& table, const std::string& path);

// Returns the vector of `token`, lower-casing it first when case_fold is set.
// Throws MissingTokenError naming the token when absent.
Vector lookup(const EmbeddingTable& table, std::string_view token,
              bool case_fold);

struct ContextualProvenance {
  std::string model;
  int layer = -1;
  std::string pooling;  // "mean" | "first"

  bool operator==(const ContextualProvenance&) const = default;
};

// Item id -> vector, with the producing model recorded.
class ContextualStore {
 public:
  ContextualStore(std::size_t dim, ContextualProvenance provenance)
      : dim_(dim), provenance_(std::move(provenance)) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  const ContextualProvenance& provenance() const { return provenance_; }
  const std::vector<std::string>& ids() const { return ids_; }

  bool contains(std::string_view id) const;
  // Throws MissingTokenError naming the id when absent.
  const Vector& vector(std::string_view id) const;

  // Throws InvalidArgument on duplicate id or wrong length.
  void add(std::string id, Vector values);

 private:
  std::size_t dim_;
  ContextualProvenance provenance_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Vector> vectors_;
};

inline constexpr std::string_view kContextualSchema = "ctx-emb/1";

// Parses the interchange JSONL. Throws ParseError with line numbers on
// malformed JSON, schema violations, duplicate ids or dimension mismatch.
ContextualStore load_contextual(const std::string& path);
ContextualStore load_contextual(std::istream& in, const std::string& name);

// Writes a store (and the item texts/targets, when known) as interchange
// JSONL. Items without an entry in `items` get empty text and target.
void write_contextual(const ContextualStore& store,
                      const std::vector<Item>& items, std::ostream& out);

// Non-owning view over whichever kind of source an experiment runs against.
using SourceView = std::variant<const EmbeddingTable*, const ContextualStore*>;

// Resolves items to vectors in item order: by target token for tables, by
// id for contextual stores. Every unresolved item is collected into a single
// MissingTokenError.
std::vector<Vector> embed_items(std::span<const Item> items,
                                const EmbeddingTable& table, bool case_fold);
std::vector<Vector> embed_items(std::span<const Item> items,
                                const ContextualStore& store);
std::vector<Vector> embed_items(std::span<const Item> items, SourceView source,
                                bool case_fold);

}  // namespace rsaprobe

#endif  // RSAPROBE_EMBEDDING_STORE_HPP_
