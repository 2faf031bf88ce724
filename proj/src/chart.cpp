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

#include "chart.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

namespace codeco::detail {

namespace {

inline void mix(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

std::size_t hash_item(const Item& it) {
  std::size_t h = it.rule;
  mix(h, it.dot);
  mix(h, it.origin);
  mix(h, it.key);
  mix(h, hash_category(it.head));
  for (const Category& c : it.rest) mix(h, hash_category(c));
  mix(h, it.access.hash());
  return h;
}

bool same_item(const Item& a, const Item& b) {
  return a.rule == b.rule && a.dot == b.dot && a.origin == b.origin &&
         a.key == b.key && a.head == b.head && a.rest == b.rest &&
         a.access == b.access;
}

void renumber(Category& c, std::vector<std::pair<VarId, VarId>>& map) {
  for (auto& [name, value] : c.features().entries()) {
    if (!value.is_var()) continue;
    VarId id = value.variable().id;
    auto it = std::find_if(map.begin(), map.end(),
                           [&](const auto& p) { return p.first == id; });
    VarId to;
    if (it == map.end()) {
      to = static_cast<VarId>(map.size());
      map.emplace_back(id, to);
    } else {
      to = it->second;
    }
    value = FeatureValue::var(to, value.variable().name);
  }
}

bool option_matches(const TokenOption& opt, const Category& produced) {
  return opt.category == produced;
}

}  // namespace

std::size_t hash_category(const Category& c) {
  std::size_t h = static_cast<std::size_t>(c.kind());
  mix(h, std::hash<std::string>{}(c.name()));
  for (const auto& [name, value] : c.features()) {
    mix(h, std::hash<std::string>{}(name));
    if (value.is_atom()) {
      mix(h, std::hash<std::string>{}(value.text()));
    } else {
      mix(h, 0x51ed270b27e5f3b1ULL + value.variable().id);
    }
  }
  return h;
}

CompiledGrammar::CompiledGrammar(Grammar g, ParserOptions o)
    : grammar(std::move(g)), options(o) {
  const auto& rules = grammar.rules();
  for (std::uint32_t i = 0; i < rules.size(); ++i) {
    if (rules[i].head.is_named()) rules_by_head[rules[i].head.name()].push_back(i);
  }
  const auto& lex = grammar.lexical_rules();
  for (std::uint32_t i = 0; i < lex.size(); ++i) {
    if (!lex[i].head.is_named() || !lex[i].is_lexical()) continue;
    lexical_by_head[lex[i].head.name()].push_back(i);
    lexical_by_token[lex[i].head.name()][lex[i].body[0].token()].push_back(i);
  }
}

void canonicalize(Category& head, std::vector<Category>& rest) {
  std::vector<std::pair<VarId, VarId>> map;
  renumber(head, map);
  for (Category& c : rest) renumber(c, map);
}

Category canonical(const Category& c) {
  Category out = c;
  std::vector<std::pair<VarId, VarId>> map;
  renumber(out, map);
  return out;
}

Category shift_variables(const Category& c, VarId offset) {
  if (offset == 0) return c;
  Category out = c;
  for (auto& [name, value] : out.features().entries()) {
    if (value.is_var()) {
      value = FeatureValue::var(value.variable().id + offset, value.variable().name);
    }
  }
  return out;
}

VarId variable_bound(const std::vector<Category>& cats) {
  VarId bound = 0;
  for (const Category& c : cats) bound = std::max(bound, codeco::variable_bound(c));
  return bound;
}

namespace {

VarId item_bound(const Item& it) {
  return std::max(codeco::variable_bound(it.head), variable_bound(it.rest));
}

}  // namespace

// ---------------------------------------------------------------------------

SetBuilder::SetBuilder(const CompiledGrammar& g, const Chart& prior,
                       bool record_ways)
    : g_(g),
      prior_(prior),
      current_(static_cast<std::uint32_t>(prior.size())),
      record_ways_(record_ways),
      set_(std::make_shared<ItemSet>()) {
  set_->position = current_;
}

std::uint32_t SetBuilder::intern_key(Category expected,
                                     const AccessList& access, bool& inserted) {
  std::size_t h = hash_category(expected);
  mix(h, access.hash());
  auto& bucket = set_->key_index[h];
  for (std::uint32_t k : bucket) {
    const PredKey& pk = set_->keys[k];
    if (pk.expected == expected && pk.access == access) {
      inserted = false;
      return k;
    }
  }
  auto id = static_cast<std::uint32_t>(set_->keys.size());
  set_->keys.push_back({std::move(expected), access, h});
  set_->waiting.emplace_back();
  set_->completed.emplace_back();
  bucket.push_back(id);
  inserted = true;
  return id;
}

void SetBuilder::add(Item item, const Way& way) {
  item.hash = hash_item(item);
  auto& bucket = set_->index[item.hash];
  for (std::uint32_t i : bucket) {
    Item& existing = set_->items[i];
    if (same_item(existing, item)) {
      if (record_ways_ && way.kind != WayKind::Predict) {
        existing.ways.push_back(way);
      }
      return;
    }
  }
  auto id = static_cast<std::uint32_t>(set_->items.size());
  if (record_ways_) item.ways.push_back(way);
  set_->items.push_back(std::move(item));
  bucket.push_back(id);
  agenda_.push_back(id);
}

void SetBuilder::init_root(const std::string& start) {
  bool inserted = false;
  std::uint32_t key = intern_key(Category::nonterminal(start), AccessList{}, inserted);
  const auto it = g_.rules_by_head.find(start);
  if (it == g_.rules_by_head.end()) return;
  for (std::uint32_t r : it->second) {
    const Rule& rule = g_.grammar.rules()[r];
    Item n;
    n.rule = r;
    n.origin = current_;
    n.key = key;
    n.head = rule.head;
    n.rest = rule.body;
    canonicalize(n.head, n.rest);
    add(std::move(n), Way{});
  }
}

void SetBuilder::step(std::uint32_t from_set, std::uint32_t from,
                      const BindingEnv& env, AccessList access, Way way) {
  const Item& src = set_at(from_set).items[from];
  Item n;
  n.rule = src.rule;
  n.dot = src.dot + 1;
  n.origin = src.origin;
  n.key = src.key;
  n.head = resolve(src.head, env);
  n.rest.reserve(src.rest.size() - 1);
  for (std::size_t i = 1; i < src.rest.size(); ++i) {
    n.rest.push_back(resolve(src.rest[i], env));
  }
  canonicalize(n.head, n.rest);
  if (n.rest.empty() && g_.grammar.rules()[n.rule].scope_closing) {
    std::size_t start = set_at(n.origin).keys[n.key].access.size();
    access = access.close_scopes_from(start);
  }
  n.access = std::move(access);
  add(std::move(n), way);
}

void SetBuilder::predict(std::uint32_t i) {
  const Item& src = set_->items[i];
  Category expected = canonical(src.rest.front());
  AccessList access = src.access;
  bool inserted = false;
  std::uint32_t key = intern_key(expected, access, inserted);
  set_->waiting[key].push_back(i);

  if (inserted) {
    auto it = g_.rules_by_head.find(expected.name());
    if (it != g_.rules_by_head.end()) {
      VarId offset = codeco::variable_bound(expected);
      for (std::uint32_t r : it->second) {
        const Rule& rule = g_.grammar.rules()[r];
        Category head = shift_variables(rule.head, offset);
        auto env = unify_categories(expected, head, BindingEnv{});
        if (!env) continue;
        Item n;
        n.rule = r;
        n.origin = current_;
        n.key = key;
        n.head = resolve(head, *env);
        n.rest.reserve(rule.body.size());
        for (const Category& c : rule.body) {
          n.rest.push_back(resolve(shift_variables(c, offset), *env));
        }
        canonicalize(n.head, n.rest);
        n.access = access;
        add(std::move(n), Way{});
      }
    }
  }

  // Children that already completed here (empty yield).
  std::vector<std::uint32_t> done = set_->completed[key];
  for (std::uint32_t c : done) combine(current_, i, c);
}

void SetBuilder::complete(std::uint32_t c) {
  const Item& child = set_->items[c];
  std::uint32_t origin = child.origin;
  std::uint32_t key = child.key;
  if (origin == current_) set_->completed[key].push_back(c);
  std::vector<std::uint32_t> parents = set_at(origin).waiting[key];
  for (std::uint32_t p : parents) combine(origin, p, c);
}

void SetBuilder::combine(std::uint32_t parent_set, std::uint32_t parent,
                         std::uint32_t child) {
  const Item& p = set_at(parent_set).items[parent];
  const Item& ch = set_->items[child];
  Category head = shift_variables(ch.head, item_bound(p));
  auto env = unify_categories(p.rest.front(), head, BindingEnv{});
  if (!env) return;
  AccessList access = ch.access;
  step(parent_set, parent, *env, std::move(access),
       Way{WayKind::Complete, parent_set, parent, current_, child});
}

void SetBuilder::process(std::uint32_t i) {
  const Item& item = set_->items[i];
  if (item.complete()) {
    complete(i);
    return;
  }
  const Category& sym = item.rest.front();
  switch (sym.kind()) {
    case CategoryKind::Nonterminal:
      predict(i);
      return;
    case CategoryKind::Preterminal:
    case CategoryKind::Terminal:
      set_->scanners.push_back(i);
      return;
    case CategoryKind::FwdRef: {
      Antecedent ant = make_antecedent(sym, BindingEnv{}, current_,
                                       item.access.scope_depth());
      AccessList access = item.access.push(ant);
      Way way{WayKind::Fwd, current_, i};
      if (record_ways_) {
        way.antecedent = static_cast<std::uint32_t>(set_->antecedents.size());
        set_->antecedents.push_back(std::move(ant));
      }
      step(current_, i, BindingEnv{}, std::move(access), way);
      return;
    }
    case CategoryKind::ScopeOpener: {
      AccessList access = item.access.push(ScopeMark{current_});
      step(current_, i, BindingEnv{}, std::move(access),
           Way{WayKind::Scope, current_, i});
      return;
    }
    case CategoryKind::BwdRef: {
      auto resolved = resolve_backward_ref(sym, item.access, BindingEnv{});
      if (!resolved) return;  // the item dies
      Way way{WayKind::Bwd, current_, i};
      if (record_ways_) {
        way.antecedent = static_cast<std::uint32_t>(set_->antecedents.size());
        set_->antecedents.push_back(resolved->first);
      }
      AccessList access = item.access;
      step(current_, i, resolved->second, std::move(access), way);
      return;
    }
  }
}

void SetBuilder::closure() {
  for (std::size_t next = 0; next < agenda_.size(); ++next) {
    process(agenda_[next]);
  }
  agenda_.clear();
}

void SetBuilder::scan(const ScanFilter& filter) {
  const std::uint32_t prev_index = current_ - 1;
  const ItemSet& prev = *prior_[prev_index];
  for (std::uint32_t s : prev.scanners) {
    const Item& item = prev.items[s];
    const Category& sym = item.rest.front();
    if (sym.kind() == CategoryKind::Terminal) {
      if (filter.token && *filter.token != sym.token()) continue;
      if (filter.option && !option_matches(*filter.option, sym)) continue;
      step(prev_index, s, BindingEnv{}, item.access,
           Way{WayKind::Scan, prev_index, s});
      continue;
    }
    // Preterminal: lexical rules.
    const std::vector<std::uint32_t>* candidates = nullptr;
    if (filter.token) {
      auto by_head = g_.lexical_by_token.find(sym.name());
      if (by_head == g_.lexical_by_token.end()) continue;
      auto by_token = by_head->second.find(*filter.token);
      if (by_token == by_head->second.end()) continue;
      candidates = &by_token->second;
    } else {
      auto by_head = g_.lexical_by_head.find(sym.name());
      if (by_head == g_.lexical_by_head.end()) continue;
      candidates = &by_head->second;
    }
    VarId offset = item_bound(item);
    for (std::uint32_t l : *candidates) {
      const Rule& lex = g_.grammar.lexical_rules()[l];
      Category head = shift_variables(lex.head, offset);
      auto env = unify_categories(sym, head, BindingEnv{});
      if (!env) continue;
      if (filter.option) {
        Category produced = canonical(resolve(head, *env));
        if (filter.option->token != lex.body[0].token() ||
            !option_matches(*filter.option, produced)) {
          continue;
        }
      }
      Way way{WayKind::Lexical, prev_index, s};
      way.lexical = l;
      step(prev_index, s, *env, item.access, way);
    }
  }
}

// ---------------------------------------------------------------------------

bool has_complete_root(const ItemSet& set) {
  return std::any_of(set.items.begin(), set.items.end(), [](const Item& it) {
    return it.complete() && it.origin == 0 && it.key == 0;
  });
}

void item_options(const CompiledGrammar& g, const Item& item,
                  std::vector<TokenOption>& out) {
  const Category& sym = item.rest.front();
  if (sym.kind() == CategoryKind::Terminal) {
    out.push_back({sym.token(), sym, {}});
    return;
  }
  auto by_head = g.lexical_by_head.find(sym.name());
  if (by_head == g.lexical_by_head.end()) return;
  VarId offset = item_bound(item);
  for (std::uint32_t l : by_head->second) {
    const Rule& lex = g.grammar.lexical_rules()[l];
    Category head = shift_variables(lex.head, offset);
    auto env = unify_categories(sym, head, BindingEnv{});
    if (!env) continue;
    Category produced = canonical(resolve(head, *env));
    FeatureStructure fs = produced.features();
    out.push_back({lex.body[0].token(), std::move(produced), std::move(fs)});
  }
}

std::vector<TokenOption> scan_options(const CompiledGrammar& g,
                                      const ItemSet& set) {
  std::vector<TokenOption> out;
  for (std::uint32_t s : set.scanners) item_options(g, set.items[s], out);
  std::vector<std::tuple<std::string, std::string, std::size_t>> keys;
  keys.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    keys.emplace_back(out[i].token, to_string(out[i].category), i);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end(),
                         [](const auto& a, const auto& b) {
                           return std::get<0>(a) == std::get<0>(b) &&
                                  std::get<1>(a) == std::get<1>(b);
                         }),
             keys.end());
  std::vector<TokenOption> sorted;
  sorted.reserve(keys.size());
  for (const auto& k : keys) sorted.push_back(std::move(out[std::get<2>(k)]));
  return sorted;
}

std::shared_ptr<const ItemSet> scan_token(const CompiledGrammar& g,
                                          const Chart& chart,
                                          std::string_view token,
                                          const TokenOption* option) {
  SetBuilder b(g, chart, true);
  b.scan(ScanFilter{std::string(token), option});
  b.closure();
  return b.finish();
}

bool completable(const CompiledGrammar& g, const Chart& chart,
                 std::size_t horizon) {
  if (has_complete_root(*chart.back())) return true;
  Chart probe = chart;
  for (std::size_t step = 0; step < horizon; ++step) {
    if (probe.back()->scanners.empty()) return false;
    SetBuilder b(g, probe, false);
    b.scan(ScanFilter{});
    b.closure();
    std::shared_ptr<const ItemSet> next = b.finish();
    if (next->items.empty()) return false;
    if (has_complete_root(*next)) return true;
    probe.push_back(std::move(next));
  }
  return true;
}

}  // namespace codeco::detail
