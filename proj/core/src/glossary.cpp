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

#include "rsaprobe/glossary.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "rsaprobe/embedding_store.hpp"
#include "rsaprobe/error.hpp"

namespace rsaprobe {
namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> words;
  std::istringstream in(s);
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

std::size_t count_slots(std::string_view pattern) {
  std::size_t count = 0;
  for (auto pos = pattern.find(kSlotMarker); pos != std::string_view::npos;
       pos = pattern.find(kSlotMarker, pos + kSlotMarker.size())) {
    ++count;
  }
  return count;
}

std::string capitalize_first(std::string s) {
  if (!s.empty()) {
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  }
  return s;
}

ItemSet word_set(const std::string& name, SetKind kind,
                 std::initializer_list<const char*> words) {
  std::vector<Item> items;
  items.reserve(words.size());
  for (const char* w : words) items.push_back(Item{w, w, w, name});
  return ItemSet(name, kind, std::move(items));
}

ItemSet sentence_set(const std::string& name, SetKind kind,
                     const std::vector<Filler>& fillers,
                     const std::vector<TemplateSpec>& templates) {
  return ItemSet(name, kind, expand_templates(fillers, templates, name));
}

std::vector<Filler> prefixed(const std::string& prefix,
                             const std::vector<Filler>& base,
                             std::size_t target_word) {
  std::vector<Filler> out;
  for (const auto& f : base) {
    out.push_back(Filler{prefix + " " + f.singular, prefix + " " + f.plural,
                         target_word});
  }
  return out;
}

const std::vector<Filler>& female_terms() {
  static const std::vector<Filler> terms = {
      {"woman", "women"}, {"female", "females"}, {"girl", "girls"}};
  return terms;
}

const std::vector<Filler>& male_terms() {
  static const std::vector<Filler> terms = {
      {"man", "men"}, {"male", "males"}, {"boy", "boys"}};
  return terms;
}

std::vector<ItemSet> make_builtins() {
  std::vector<ItemSet> sets;
  // Names; polysemous names and names absent from the GloVe 6B vocabulary
  // are already removed, and every group is trimmed to 13.
  sets.push_back(word_set("black_female_names", SetKind::kGroup,
                          {"Aisha", "Keisha", "Latonya", "Lakisha", "Latoya",
                           "Tamika", "Imani", "Shanice", "Aaliyah", "Nia",
                           "Latanya", "Latisha", "Deja"}));
  sets.push_back(word_set("black_male_names", SetKind::kGroup,
                          {"Darnell", "Hakim", "Jermaine", "Kareem", "Jamal",
                           "Leroy", "Rasheed", "DeShawn", "DeAndre", "Marquis",
                           "Terrell", "Malik", "Tyrone"}));
  sets.push_back(word_set("white_female_names", SetKind::kGroup,
                          {"Allison", "Anne", "Carrie", "Emily", "Jill",
                           "Laurie", "Kristen", "Meredith", "Molly", "Amy",
                           "Claire", "Madeline", "Emma"}));
  sets.push_back(word_set("white_male_names", SetKind::kGroup,
                          {"Brad", "Brendan", "Geoffrey", "Greg", "Brett",
                           "Jay", "Matthew", "Jake", "Connor", "Tanner",
                           "Wyatt", "Cody", "Dustin"}));
  sets.push_back(word_set("female_concept_words", SetKind::kConcept,
                          {"female", "woman", "girl", "sister", "she", "her",
                           "hers", "daughter", "aunt", "mother",
                           "grandmother"}));
  sets.push_back(word_set("black_concept_words", SetKind::kConcept,
                          {"Africa", "Black", "Jamaica", "Haiti", "Nigeria",
                           "Ethiopia", "Somalia", "Ghana", "Barbados", "Kenya",
                           "Liberia", "Bahamas"}));

  struct GroupSpec {
    const char* stem;
    const char* race;
    const std::vector<Filler>& terms;
  };
  const GroupSpec groups[] = {{"black_female", "Black", female_terms()},
                              {"white_female", "White", female_terms()},
                              {"black_male", "Black", male_terms()},
                              {"white_male", "White", male_terms()}};
  for (const auto& g : groups) {
    const std::string stem = std::string(g.stem) + "_sentences";
    sets.push_back(sentence_set(stem + ".race", SetKind::kGroup,
                                prefixed(g.race, g.terms, 0),
                                group_templates()));
    sets.push_back(sentence_set(stem + ".gender", SetKind::kGroup,
                                prefixed(g.race, g.terms, 1),
                                group_templates()));
  }
  sets.push_back(sentence_set("female_concept_sentences", SetKind::kConcept,
                              female_terms(), concept_templates()));
  // One phrase pair gives only 8 sentences, fewer than a sample of 10, so
  // the relative-clause form is added as a second filler.
  sets.push_back(sentence_set("black_concept_sentences", SetKind::kConcept,
                              {{"Black person", "Black people", 0},
                               {"person who is Black", "people who are Black", 3}},
                              concept_templates()));
  return sets;
}

}  // namespace

std::string_view to_string(SetKind kind) {
  return kind == SetKind::kGroup ? "group" : "concept";
}

SetKind set_kind_from_string(std::string_view s) {
  if (s == "group") return SetKind::kGroup;
  if (s == "concept") return SetKind::kConcept;
  throw InvalidArgument("unknown set kind '" + std::string(s) +
                        "' (expected group or concept)");
}

bool contains_word(std::string_view text, std::string_view word) {
  if (word.empty()) return false;
  for (auto pos = text.find(word); pos != std::string_view::npos;
       pos = text.find(word, pos + 1)) {
    const bool left_ok = pos == 0 || !is_word_char(text[pos - 1]);
    const auto end = pos + word.size();
    const bool right_ok = end == text.size() || !is_word_char(text[end]);
    if (left_ok && right_ok) return true;
  }
  return false;
}

ItemSet::ItemSet(std::string name, SetKind kind, std::vector<Item> items)
    : name_(std::move(name)), kind_(kind), items_(std::move(items)) {
  if (items_.empty()) {
    throw InvalidArgument("item set '" + name_ + "' is empty");
  }
  std::set<std::string_view> seen;
  for (auto& item : items_) {
    if (item.id.empty()) {
      throw InvalidArgument("item set '" + name_ + "' has an empty item id");
    }
    if (!seen.insert(item.id).second) {
      throw InvalidArgument("item set '" + name_ + "' repeats id '" + item.id +
                            "'");
    }
    if (!contains_word(item.text, item.target)) {
      throw InvalidArgument("item '" + item.id + "': target '" + item.target +
                            "' does not occur as a word in '" + item.text +
                            "'");
    }
    item.set_name = name_;
  }
}

const Item* ItemSet::find(std::string_view id) const {
  auto it = std::find_if(items_.begin(), items_.end(),
                         [&](const Item& item) { return item.id == id; });
  return it == items_.end() ? nullptr : &*it;
}

const std::vector<TemplateSpec>& group_templates() {
  using enum GrammaticalNumber;
  static const std::vector<TemplateSpec> templates = {
      {"This is a <X>.", kSingular},   {"That is a <X>.", kSingular},
      {"The <X> is here.", kSingular}, {"The <X> is there.", kSingular},
      {"Here is a <X>.", kSingular},   {"They are <X>.", kPlural},
      {"These are <X>.", kPlural},
  };
  return templates;
}

const std::vector<TemplateSpec>& concept_templates() {
  static const std::vector<TemplateSpec> templates = [] {
    auto t = group_templates();
    t.push_back({"<X> are people.", GrammaticalNumber::kPlural});
    return t;
  }();
  return templates;
}

std::vector<Item> expand_templates(const std::vector<Filler>& fillers,
                                   const std::vector<TemplateSpec>& templates,
                                   const std::string& set_name) {
  if (fillers.empty()) throw InvalidArgument("no template fillers given");
  if (templates.empty()) throw InvalidArgument("no templates given");
  for (const auto& t : templates) {
    const auto slots = count_slots(t.pattern);
    if (slots != 1) {
      throw InvalidArgument("template '" + t.pattern + "' has " +
                            std::to_string(slots) + " slots, expected 1");
    }
  }

  const std::size_t width = std::to_string(fillers.size() * templates.size()).size();
  std::vector<Item> items;
  items.reserve(fillers.size() * templates.size());
  for (const auto& filler : fillers) {
    for (const auto& t : templates) {
      const bool plural = t.number == GrammaticalNumber::kPlural;
      std::string form = plural ? filler.plural : filler.singular;
      const auto slot = t.pattern.find(kSlotMarker);
      if (slot == 0) form = capitalize_first(form);

      const auto words = split_words(form);
      if (filler.target_word >= words.size()) {
        throw InvalidArgument("filler '" + form + "' has no word " +
                              std::to_string(filler.target_word));
      }
      std::string text = t.pattern;
      text.replace(slot, kSlotMarker.size(), form);

      std::string index = std::to_string(items.size());
      index.insert(0, width - index.size(), '0');
      items.push_back(Item{set_name + ":" + index, std::move(text),
                           words[filler.target_word], set_name});
    }
  }
  return items;
}

const std::vector<ItemSet>& builtin_glossaries() {
  static const std::vector<ItemSet> sets = make_builtins();
  return sets;
}

std::optional<ItemSet> find_builtin(std::string_view name) {
  for (const auto& set : builtin_glossaries()) {
    if (set.name() == name) return set;
  }
  return std::nullopt;
}

std::vector<std::string> validate_set(const ItemSet& set,
                                      const EmbeddingTable& table,
                                      bool case_fold) {
  std::vector<std::string> missing;
  for (const auto& item : set.items()) {
    auto key = case_fold ? fold_case(item.target) : item.target;
    if (!table.contains(key)) missing.push_back(std::move(key));
  }
  return missing;
}

std::vector<std::string> validate_set(const ItemSet& set,
                                      const ContextualStore& store) {
  std::vector<std::string> missing;
  for (const auto& item : set.items()) {
    if (!store.contains(item.id)) missing.push_back(item.id);
  }
  return missing;
}

nlohmann::json to_json(const ItemSet& set) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& item : set.items()) {
    items.push_back(
        {{"id", item.id}, {"text", item.text}, {"target", item.target}});
  }
  return {{"name", set.name()},
          {"kind", std::string(to_string(set.kind()))},
          {"items", std::move(items)}};
}

ItemSet item_set_from_json(const nlohmann::json& j) {
  try {
    const auto name = j.at("name").get<std::string>();
    const auto kind = set_kind_from_string(j.at("kind").get<std::string>());
    std::vector<Item> items;
    for (const auto& e : j.at("items")) {
      items.push_back(Item{e.at("id").get<std::string>(),
                           e.at("text").get<std::string>(),
                           e.at("target").get<std::string>(), name});
    }
    return ItemSet(name, kind, std::move(items));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed glossary JSON: ") + e.what());
  }
}

ItemSet load_item_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open glossary file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path, 0, e.what());
  }
  return item_set_from_json(j);
}

void save_item_set(const ItemSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write glossary file '" + path + "'");
  out << to_json(set).dump(2) << '\n';
}

}  // namespace rsaprobe
