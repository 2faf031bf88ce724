// Copyright 2026 The Codeco Authors.
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

// Chart internals shared by the parser front end and the generators.
//
// An item does not keep its rule instance and binding environment
// separately.  It stores the residual: the head and the not yet recognized
// part of the body, fully resolved, with variables renumbered 0..k-1 in
// order of first occurrence.  Two items with equal residuals behave the same
// from here on, so they are merged and their derivations packed as ways.
//
// Items predicted for a category are tied to the prediction key of their
// parent: the expected category (canonical) plus the parent's accessibility
// list.  Completion hands a finished item back only to parents that
// registered under the same key.

#ifndef CODECO_SRC_CHART_HPP
#define CODECO_SRC_CHART_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "codeco/core.hpp"
#include "codeco/parser.hpp"

namespace codeco::detail {

inline constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

std::size_t hash_category(const Category& c);

struct CompiledGrammar {
  Grammar grammar;
  ParserOptions options;
  std::unordered_map<std::string, std::vector<std::uint32_t>> rules_by_head;
  std::unordered_map<std::string, std::vector<std::uint32_t>> lexical_by_head;
  // preterminal -> token -> lexical rule indices
  std::unordered_map<std::string,
                     std::unordered_map<std::string, std::vector<std::uint32_t>>>
      lexical_by_token;

  explicit CompiledGrammar(Grammar g, ParserOptions o);
};

enum class WayKind : std::uint8_t {
  Predict,
  Scan,
  Lexical,
  Complete,
  Fwd,
  Bwd,
  Scope,
};

// One way of arriving at an item.  pred is the item before the step; child
// is the completed item for Complete; lexical indexes lexical_rules() for
// Lexical; antecedent indexes ItemSet::antecedents for Fwd and Bwd.
struct Way {
  WayKind kind = WayKind::Predict;
  std::uint32_t pred_set = kNone;
  std::uint32_t pred_item = kNone;
  std::uint32_t child_set = kNone;
  std::uint32_t child_item = kNone;
  std::uint32_t lexical = kNone;
  std::uint32_t antecedent = kNone;

  bool operator==(const Way&) const = default;
};

struct Item {
  std::uint32_t rule = 0;  // index into grammar.rules()
  std::uint32_t dot = 0;
  std::uint32_t origin = 0;
  std::uint32_t key = 0;   // prediction key in set `origin`
  Category head;
  std::vector<Category> rest;
  AccessList access;
  std::size_t hash = 0;
  std::vector<Way> ways;

  bool complete() const { return rest.empty(); }
};

struct PredKey {
  Category expected;
  AccessList access;
  std::size_t hash = 0;
};

struct ItemSet {
  std::size_t position = 0;
  std::vector<Item> items;
  std::unordered_map<std::size_t, std::vector<std::uint32_t>> index;
  std::vector<PredKey> keys;
  std::unordered_map<std::size_t, std::vector<std::uint32_t>> key_index;
  // key id -> items in this set waiting for a category under that key
  std::vector<std::vector<std::uint32_t>> waiting;
  // key id -> completed items of this set whose origin is this set
  std::vector<std::vector<std::uint32_t>> completed;
  // items whose next symbol is a terminal or a preterminal
  std::vector<std::uint32_t> scanners;
  std::vector<Antecedent> antecedents;
};

using Chart = std::vector<std::shared_ptr<const ItemSet>>;

// Restricts a scan.  With no token, every scanner advances over every
// terminal and every unifiable lexical rule (wildcard scan).
struct ScanFilter {
  std::optional<std::string> token;
  // When set, only scans producing exactly this option are taken.
  const TokenOption* option = nullptr;
};

// Builds one item set on top of a finished chart prefix.
class SetBuilder {
 public:
  SetBuilder(const CompiledGrammar& g, const Chart& prior, bool record_ways);

  void init_root(const std::string& start);
  void scan(const ScanFilter& filter);
  void closure();
  std::shared_ptr<ItemSet> finish() { return std::move(set_); }

  // Number of items created (for budgets).
  std::size_t created() const { return set_->items.size(); }

 private:
  const ItemSet& set_at(std::uint32_t s) const {
    return s == current_ ? *set_ : *prior_[s];
  }
  std::uint32_t intern_key(Category expected, const AccessList& access,
                           bool& inserted);
  void add(Item item, const Way& way);
  void process(std::uint32_t i);
  void predict(std::uint32_t i);
  void complete(std::uint32_t child);
  void combine(std::uint32_t parent_set, std::uint32_t parent,
               std::uint32_t child);
  // Advances item `from` (in set from_set) by one body symbol under env.
  void step(std::uint32_t from_set, std::uint32_t from, const BindingEnv& env,
            AccessList access, Way way);

  const CompiledGrammar& g_;
  const Chart& prior_;
  std::uint32_t current_;
  bool record_ways_;
  std::shared_ptr<ItemSet> set_;
  std::vector<std::uint32_t> agenda_;
};

// Renumbers variables of the given categories to 0..k-1 by first occurrence.
void canonicalize(Category& head, std::vector<Category>& rest);
Category canonical(const Category& c);
// Adds offset to every variable id.
Category shift_variables(const Category& c, VarId offset);
VarId variable_bound(const std::vector<Category>& cats);

bool has_complete_root(const ItemSet& set);

// Options the scanners of a set could consume, deduplicated, sorted.
std::vector<TokenOption> scan_options(const CompiledGrammar& g,
                                      const ItemSet& set);
// Options one scanner item could consume.
void item_options(const CompiledGrammar& g, const Item& item,
                  std::vector<TokenOption>& out);

struct LookaheadCache {
  std::mutex mu;
  std::optional<std::vector<TokenOption>> options;
  std::map<std::string, std::shared_ptr<const ItemSet>, std::less<>> scans;
};

struct StateAccess {
  static ParseState make(std::shared_ptr<const ParserGrammar> g,
                         std::string start, std::vector<std::string> tokens,
                         Chart sets);
};

// Scans token on top of chart (unfiltered) and closes the new set.
std::shared_ptr<const ItemSet> scan_token(const CompiledGrammar& g,
                                          const Chart& chart,
                                          std::string_view token,
                                          const TokenOption* option = nullptr);

// True if the chart, whose last set is the frontier, can be extended to a
// complete parse.  Gives up (returning true) after `horizon` wildcard
// steps.
bool completable(const CompiledGrammar& g, const Chart& chart,
                 std::size_t horizon);

}  // namespace codeco::detail

#endif  // CODECO_SRC_CHART_HPP
