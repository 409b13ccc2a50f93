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

// Probe stimuli: items, named item sets, the bundled name and concept word
// lists, and expansion of semantically bleached sentence templates.

#ifndef RSAPROBE_GLOSSARY_HPP_
#define RSAPROBE_GLOSSARY_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace rsaprobe {

class EmbeddingTable;
class ContextualStore;

// One probe stimulus. `target` is the word of `text` whose embedding stands
// for the whole item.
struct Item {
  std::string id;
  std::string text;
  std::string target;
  std::string set_name;

  bool operator==(const Item&) const = default;
};

enum class SetKind { kGroup, kConcept };

std::string_view to_string(SetKind kind);
SetKind set_kind_from_string(std::string_view s);

// A named, non-empty pool of items with distinct ids.
class ItemSet {
 public:
  // Throws InvalidArgument when items is empty, an id repeats, or a target
  // does not occur as a word of its text. Each item's set_name is
  // overwritten with `name`.
  ItemSet(std::string name, SetKind kind, std::vector<Item> items);

  const std::string& name() const { return name_; }
  SetKind kind() const { return kind_; }
  const std::vector<Item>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }

  const Item* find(std::string_view id) const;

  bool operator==(const ItemSet&) const = default;

 private:
  std::string name_;
  SetKind kind_;
  std::vector<Item> items_;
};

// True when `word` occurs in `text` bounded by non-alphanumeric characters
// (or the ends of the string).
bool contains_word(std::string_view text, std::string_view word);

enum class GrammaticalNumber { kSingular, kPlural };

// A carrier sentence with exactly one "<X>" slot.
struct TemplateSpec {
  std::string pattern;
  GrammaticalNumber number = GrammaticalNumber::kSingular;
};

inline constexpr std::string_view kSlotMarker = "<X>";

// A term inserted into templates. `target_word` selects which
// whitespace-separated word of the inserted form becomes the item target,
// e.g. 0 picks "Black" and 1 picks "woman" in "Black woman".
struct Filler {
  std::string singular;
  std::string plural;
  std::size_t target_word = 0;
};

// The fixed template inventory: five singular and two plural carrier
// sentences, used for every set.
const std::vector<TemplateSpec>& group_templates();
// group_templates() plus "<X> are people." (plural), used for concept sets.
const std::vector<TemplateSpec>& concept_templates();

// Fills every template with every filler, filler-major. Item ids are
// "<set_name>:<index>" with a zero-padded index. A slot at the start of a
// sentence has its first letter upper-cased.
// Throws InvalidArgument on empty inputs, a template without exactly one
// slot, or a target_word index past the end of a filler form.
std::vector<Item> expand_templates(const std::vector<Filler>& fillers,
                                   const std::vector<TemplateSpec>& templates,
                                   const std::string& set_name = "items");

// The bundled word and sentence sets:
//   black_female_names, black_male_names, white_female_names,
//   white_male_names (13 each), female_concept_words (11),
//   black_concept_words (12), and templated sentence sets
//   {black,white}_{female,male}_sentences.{race,gender},
//   female_concept_sentences, black_concept_sentences.
// The .race variants target the race word ("Black"/"White"); the .gender
// variants target the gender word ("woman", "men", ...).
const std::vector<ItemSet>& builtin_glossaries();

// Looks up a bundled set by name.
std::optional<ItemSet> find_builtin(std::string_view name);

// Lookup keys (targets, case-folded when `case_fold` is set) of `set` with
// no vector in `table`, in item order. Empty means the set is runnable.
std::vector<std::string> validate_set(const ItemSet& set,
                                      const EmbeddingTable& table,
                                      bool case_fold);
// Contextual stores are keyed by item id; reports the missing ids.
std::vector<std::string> validate_set(const ItemSet& set,
                                      const ContextualStore& store);

// {"name": str, "kind": "group"|"concept", "items": [{"id","text","target"}]}
nlohmann::json to_json(const ItemSet& set);
ItemSet item_set_from_json(const nlohmann::json& j);
ItemSet load_item_set(const std::string& path);
void save_item_set(const ItemSet& set, const std::string& path);

}  // namespace rsaprobe

#endif  // RSAPROBE_GLOSSARY_HPP_
