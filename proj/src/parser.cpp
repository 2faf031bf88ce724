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

#include "codeco/parser.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <tuple>

#include "chart.hpp"

namespace codeco {

using detail::Chart;
using detail::Item;
using detail::ItemSet;
using detail::Way;
using detail::WayKind;

// ---------------------------------------------------------------------------
// Accessibility lists

namespace {

std::size_t hash_element(const AccessElement& e) {
  if (const auto* mark = std::get_if<ScopeMark>(&e)) {
    return 0x2545f4914f6cdd1dULL ^ (mark->position * 0x9e3779b97f4a7c15ULL);
  }
  const auto& ant = std::get<Antecedent>(e);
  std::size_t h = detail::hash_category(Category::fwd_ref(ant.features));
  h ^= ant.position + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

AccessList AccessList::push(AccessElement e) const {
  auto n = std::make_shared<Node>();
  n->parent = node_;
  n->size = size() + 1;
  n->marks = scope_depth() + (std::holds_alternative<ScopeMark>(e) ? 1 : 0);
  std::size_t h = hash();
  h ^= hash_element(e) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  n->hash = h;
  n->element = std::move(e);
  return AccessList(std::move(n));
}

AccessList AccessList::truncate(std::size_t n) const {
  std::shared_ptr<const Node> cur = node_;
  while (cur && cur->size > n) cur = cur->parent;
  return AccessList(std::move(cur));
}

AccessList AccessList::close_scopes_from(std::size_t from) const {
  const Node* first_mark = nullptr;
  for (const Node* n = node_.get(); n != nullptr && n->size > from;
       n = n->parent.get()) {
    if (std::holds_alternative<ScopeMark>(n->element)) first_mark = n;
  }
  if (first_mark == nullptr) return *this;
  return AccessList(first_mark->parent);
}

std::vector<AccessElement> AccessList::elements() const {
  std::vector<AccessElement> out;
  for_each_newest_first([&](const AccessElement& e) {
    out.push_back(e);
    return true;
  });
  std::reverse(out.begin(), out.end());
  return out;
}

bool AccessList::operator==(const AccessList& o) const {
  if (node_ == o.node_) return true;
  if (size() != o.size() || hash() != o.hash()) return false;
  const Node* a = node_.get();
  const Node* b = o.node_.get();
  while (a != b) {
    if (!(a->element == b->element)) return false;
    a = a->parent.get();
    b = b->parent.get();
  }
  return true;
}

Antecedent make_antecedent(const Category& fwd_ref, const BindingEnv& env,
                           std::size_t position, std::size_t scope_depth) {
  Antecedent ant;
  ant.position = position;
  ant.scope_depth = scope_depth;
  for (const auto& [name, value] : fwd_ref.features()) {
    FeatureValue v = resolve(value, env);
    if (v.is_atom()) ant.features.push_back(name, std::move(v));
  }
  return ant;
}

std::optional<std::pair<Antecedent, BindingEnv>> resolve_backward_ref(
    const Category& ref, const AccessList& access, const BindingEnv& env) {
  std::optional<std::pair<Antecedent, BindingEnv>> found;
  access.for_each_newest_first([&](const AccessElement& e) {
    const auto* ant = std::get_if<Antecedent>(&e);
    if (ant == nullptr) return true;
    if (auto unified = unify_features(ref.features(), ant->features, env)) {
      found.emplace(*ant, std::move(*unified));
      return false;
    }
    return true;
  });
  return found;
}

// ---------------------------------------------------------------------------
// Sessions

ParserGrammar::ParserGrammar(Grammar g, ParserOptions options)
    : compiled_(std::make_unique<detail::CompiledGrammar>(std::move(g), options)) {}

ParserGrammar::~ParserGrammar() = default;

const Grammar& ParserGrammar::grammar() const { return compiled_->grammar; }
const ParserOptions& ParserGrammar::options() const { return compiled_->options; }

const Grammar& ParseState::grammar() const { return grammar_->grammar(); }

std::size_t ParseState::live_items() const {
  return sets_.empty() ? 0 : sets_.back()->items.size();
}

ParseState detail::StateAccess::make(std::shared_ptr<const ParserGrammar> g,
                                     std::string start,
                                     std::vector<std::string> tokens,
                                     Chart sets) {
  ParseState st;
  st.grammar_ = std::move(g);
  st.start_ = std::move(start);
  st.tokens_ = std::move(tokens);
  st.sets_ = std::move(sets);
  st.cache_ = std::make_shared<detail::LookaheadCache>();
  return st;
}

ParseState new_session(std::shared_ptr<const ParserGrammar> g,
                       std::string_view start) {
  const auto& compiled = g->compiled();
  if (!compiled.rules_by_head.contains(std::string(start))) {
    if (compiled.lexical_by_head.contains(std::string(start))) {
      throw Error("start category '" + std::string(start) +
                  "' is a preterminal; it must head a production rule");
    }
    throw Error("unknown start category '" + std::string(start) + "'");
  }
  Chart empty;
  detail::SetBuilder b(compiled, empty, true);
  b.init_root(std::string(start));
  b.closure();
  Chart sets{b.finish()};
  return detail::StateAccess::make(std::move(g), std::string(start), {},
                                   std::move(sets));
}

ParseState new_session(const Grammar& g, std::string_view start) {
  return new_session(std::make_shared<const ParserGrammar>(g), start);
}

ParseState new_session(const Grammar& g) { return new_session(g, g.start()); }

namespace {

std::shared_ptr<const ItemSet> cached_scan(const ParseState& st,
                                           std::string_view token) {
  auto& cache = st.cache();
  {
    std::lock_guard lock(cache.mu);
    auto it = cache.scans.find(token);
    if (it != cache.scans.end()) return it->second;
  }
  auto set = detail::scan_token(st.parser_grammar()->compiled(), st.sets(), token);
  std::lock_guard lock(cache.mu);
  cache.scans.emplace(std::string(token), set);
  return set;
}

ParseState extend(const ParseState& st, std::string_view token,
                  std::shared_ptr<const ItemSet> set) {
  Chart sets = st.sets();
  sets.push_back(std::move(set));
  std::vector<std::string> tokens = st.tokens();
  tokens.emplace_back(token);
  return detail::StateAccess::make(st.parser_grammar(), st.start(),
                                   std::move(tokens), std::move(sets));
}

}  // namespace

std::optional<ParseState> advance(const ParseState& st, std::string_view token) {
  auto set = cached_scan(st, token);
  if (set->items.empty()) return std::nullopt;
  return extend(st, token, std::move(set));
}

std::optional<ParseState> parse_tokens(const ParseState& initial,
                                       const std::vector<std::string>& tokens) {
  ParseState st = initial;
  for (const std::string& t : tokens) {
    auto next = codeco::advance(st, t);
    if (!next) return std::nullopt;
    st = std::move(*next);
  }
  return st;
}

std::vector<TokenOption> next_tokens(const ParseState& st) {
  auto& cache = st.cache();
  {
    std::lock_guard lock(cache.mu);
    if (cache.options) return *cache.options;
  }
  const auto& g = st.parser_grammar()->compiled();
  const std::size_t horizon = g.options.completion_horizon;
  std::vector<TokenOption> candidates = detail::scan_options(g, *st.sets().back());

  std::vector<TokenOption> result;
  std::size_t i = 0;
  while (i < candidates.size()) {
    std::size_t j = i;
    while (j < candidates.size() && candidates[j].token == candidates[i].token) ++j;
    const std::string& token = candidates[i].token;

    Chart chart = st.sets();
    chart.push_back(cached_scan(st, token));
    bool viable = !chart.back()->items.empty() &&
                  detail::completable(g, chart, horizon);
    if (viable && j - i == 1) {
      result.push_back(candidates[i]);
    } else if (viable) {
      // Several readings of the same token: check each on its own.
      for (std::size_t k = i; k < j; ++k) {
        Chart one = st.sets();
        one.push_back(detail::scan_token(g, st.sets(), token, &candidates[k]));
        if (!one.back()->items.empty() && detail::completable(g, one, horizon)) {
          result.push_back(candidates[k]);
        }
      }
    }
    i = j;
  }

  std::lock_guard lock(cache.mu);
  cache.options = result;
  return result;
}

std::vector<std::string> candidate_tokens(const ParseState& st) {
  std::vector<TokenOption> options =
      detail::scan_options(st.parser_grammar()->compiled(), *st.sets().back());
  std::vector<std::string> out;
  for (auto& o : options) {
    if (out.empty() || out.back() != o.token) out.push_back(std::move(o.token));
  }
  return out;
}

FeedResult feed_token(const ParseState& st, std::string_view token) {
  FeedResult r;
  r.token = std::string(token);
  std::vector<TokenOption> options = next_tokens(st);
  bool offered = std::any_of(options.begin(), options.end(),
                             [&](const TokenOption& o) { return o.token == token; });
  if (!offered) {
    r.state = st;
    r.options = std::move(options);
    return r;
  }
  r.accepted = true;
  r.state = extend(st, token, cached_scan(st, token));
  return r;
}

bool is_complete(const ParseState& st) {
  return detail::has_complete_root(*st.sets().back());
}

std::vector<Antecedent> accessible_antecedents(const ParseState& st) {
  const auto& g = st.parser_grammar()->compiled();
  const ItemSet& set = *st.sets().back();
  std::vector<TokenOption> offered = next_tokens(st);

  std::vector<const AccessList*> lists;
  for (std::uint32_t s : set.scanners) {
    std::vector<TokenOption> own;
    detail::item_options(g, set.items[s], own);
    bool live = std::any_of(own.begin(), own.end(), [&](const TokenOption& o) {
      return std::find(offered.begin(), offered.end(), o) != offered.end();
    });
    if (live) lists.push_back(&set.items[s].access);
  }
  for (const Item& it : set.items) {
    if (it.complete() && it.origin == 0 && it.key == 0) lists.push_back(&it.access);
  }

  std::vector<Antecedent> out;
  for (const AccessList* l : lists) {
    l->for_each_newest_first([&](const AccessElement& e) {
      if (const auto* ant = std::get_if<Antecedent>(&e)) {
        if (std::find(out.begin(), out.end(), *ant) == out.end()) out.push_back(*ant);
      }
      return true;
    });
  }
  std::sort(out.begin(), out.end(), [](const Antecedent& a, const Antecedent& b) {
    return std::make_pair(a.position, to_string(a.features)) <
           std::make_pair(b.position, to_string(b.features));
  });
  return out;
}

// ---------------------------------------------------------------------------
// Derivations

namespace {

struct ItemRef {
  std::uint32_t set;
  std::uint32_t item;
  auto operator<=>(const ItemRef&) const = default;
};

class DerivationWalker {
 public:
  DerivationWalker(const ParseState& st, std::size_t limit)
      : st_(st), g_(st.parser_grammar()->compiled()), limit_(limit) {}

  const Item& item(ItemRef r) const { return st_.sets()[r.set]->items[r.item]; }

  // Child sequences for the recognized part of item r's body.
  const std::vector<std::vector<SyntaxTree>>& partial(ItemRef r) {
    auto it = partial_.find(r);
    if (it != partial_.end()) return it->second;
    if (active_.contains(r)) return empty_;
    active_.insert(r);
    std::vector<std::vector<SyntaxTree>> out;
    const Item& self = item(r);
    for (const Way& w : self.ways) {
      if (out.size() >= limit_) break;
      if (w.kind == WayKind::Predict) {
        out.emplace_back();
        continue;
      }
      ItemRef pred{w.pred_set, w.pred_item};
      std::vector<SyntaxTree> tails = last_children(r, w);
      if (tails.empty()) continue;
      const auto& heads = partial(pred);
      for (const auto& h : heads) {
        for (const auto& t : tails) {
          if (out.size() >= limit_) break;
          std::vector<SyntaxTree> seq = h;
          seq.push_back(t);
          out.push_back(std::move(seq));
        }
      }
    }
    active_.erase(r);
    return partial_.emplace(r, std::move(out)).first->second;
  }

  std::vector<SyntaxTree> complete_trees(ItemRef r) {
    const Item& self = item(r);
    const Rule& rule = g_.grammar.rules()[self.rule];
    std::vector<SyntaxTree> out;
    for (const auto& seq : partial(r)) {
      SyntaxTree node;
      node.kind = SyntaxTree::Kind::Node;
      node.label = self.head;
      node.label.set_kind(rule.head.kind());
      node.rule_index = self.rule;
      node.scope_closing = rule.scope_closing;
      node.children = seq;
      out.push_back(std::move(node));
    }
    return out;
  }

  std::uint64_t count(ItemRef r) {
    auto it = counts_.find(r);
    if (it != counts_.end()) return it->second;
    if (active_.contains(r)) return 0;
    active_.insert(r);
    std::uint64_t total = 0;
    for (const Way& w : item(r).ways) {
      std::uint64_t ways = 1;
      if (w.kind != WayKind::Predict) {
        ways = count({w.pred_set, w.pred_item});
        if (w.kind == WayKind::Complete) {
          ways = mul(ways, count({w.child_set, w.child_item}));
        }
      }
      total = add(total, ways);
    }
    active_.erase(r);
    counts_.emplace(r, total);
    return total;
  }

 private:
  static std::uint64_t add(std::uint64_t a, std::uint64_t b) {
    return a > UINT64_MAX - b ? UINT64_MAX : a + b;
  }
  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
    return a * b;
  }

  // The subtree(s) contributed by the last step of way w into item r.
  std::vector<SyntaxTree> last_children(ItemRef r, const Way& w) {
    const Item& pred = item({w.pred_set, w.pred_item});
    const Category& sym = pred.rest.front();
    std::size_t pos = r.set;
    switch (w.kind) {
      case WayKind::Scan: {
        SyntaxTree leaf;
        leaf.kind = SyntaxTree::Kind::Token;
        leaf.label = sym;
        leaf.start = pos - 1;
        leaf.end = pos;
        return {leaf};
      }
      case WayKind::Lexical: {
        const Rule& lex = g_.grammar.lexical_rules()[w.lexical];
        VarId offset = std::max(variable_bound(pred.head),
                                detail::variable_bound(pred.rest));
        Category head = detail::shift_variables(lex.head, offset);
        auto env = unify_categories(sym, head, BindingEnv{});
        SyntaxTree leaf;
        leaf.kind = SyntaxTree::Kind::Token;
        leaf.label = lex.body[0];
        leaf.start = pos - 1;
        leaf.end = pos;
        SyntaxTree node;
        node.kind = SyntaxTree::Kind::Node;
        node.label = detail::canonical(env ? resolve(head, *env) : head);
        node.rule_index = g_.grammar.rules().size() + w.lexical;
        node.lexical = true;
        node.scope_closing = lex.scope_closing;
        node.children.push_back(std::move(leaf));
        return {node};
      }
      case WayKind::Complete:
        return complete_trees({w.child_set, w.child_item});
      case WayKind::Fwd:
      case WayKind::Bwd: {
        SyntaxTree leaf;
        leaf.kind = w.kind == WayKind::Fwd ? SyntaxTree::Kind::FwdRef
                                           : SyntaxTree::Kind::BwdRef;
        leaf.label = sym;
        leaf.start = leaf.end = pos;
        leaf.antecedent = st_.sets()[r.set]->antecedents[w.antecedent];
        return {leaf};
      }
      case WayKind::Scope: {
        SyntaxTree leaf;
        leaf.kind = SyntaxTree::Kind::ScopeOpener;
        leaf.label = Category::scope_opener();
        leaf.start = leaf.end = pos;
        return {leaf};
      }
      case WayKind::Predict:
        break;
    }
    return {};
  }

  const ParseState& st_;
  const detail::CompiledGrammar& g_;
  std::size_t limit_;
  std::map<ItemRef, std::vector<std::vector<SyntaxTree>>> partial_;
  std::map<ItemRef, std::uint64_t> counts_;
  std::set<ItemRef> active_;
  const std::vector<std::vector<SyntaxTree>> empty_;
};

// Fills in spans and the scopes each scope-closing node closes.  Returns the
// positions of scopes opened in t and still open at its end.
std::vector<std::size_t> annotate(SyntaxTree& t, std::size_t& pos) {
  switch (t.kind) {
    case SyntaxTree::Kind::Token:
      t.start = pos;
      t.end = ++pos;
      return {};
    case SyntaxTree::Kind::ScopeOpener:
      t.start = t.end = pos;
      return {pos};
    case SyntaxTree::Kind::FwdRef:
    case SyntaxTree::Kind::BwdRef:
      t.start = t.end = pos;
      return {};
    case SyntaxTree::Kind::Node:
      break;
  }
  t.start = pos;
  std::vector<std::size_t> open;
  for (SyntaxTree& c : t.children) {
    auto inner = annotate(c, pos);
    open.insert(open.end(), inner.begin(), inner.end());
  }
  t.end = pos;
  if (t.scope_closing) {
    for (std::size_t p : open) t.closed_scopes.emplace_back(p, t.end);
    open.clear();
  }
  return open;
}

std::vector<ItemRef> root_items(const ParseState& st) {
  std::vector<ItemRef> out;
  auto last = static_cast<std::uint32_t>(st.sets().size() - 1);
  const ItemSet& set = *st.sets().back();
  for (std::uint32_t i = 0; i < set.items.size(); ++i) {
    const Item& it = set.items[i];
    if (it.complete() && it.origin == 0 && it.key == 0) out.push_back({last, i});
  }
  return out;
}

}  // namespace

std::vector<std::string> SyntaxTree::leaves() const {
  std::vector<std::string> out;
  std::function<void(const SyntaxTree&)> walk = [&](const SyntaxTree& t) {
    if (t.kind == Kind::Token) out.push_back(t.label.token());
    for (const auto& c : t.children) walk(c);
  };
  walk(*this);
  return out;
}

std::vector<SyntaxTree> extract_trees(const ParseState& st, std::size_t limit) {
  std::vector<SyntaxTree> out;
  DerivationWalker walker(st, limit);
  for (ItemRef r : root_items(st)) {
    for (SyntaxTree& t : walker.complete_trees(r)) {
      if (out.size() >= limit) break;
      std::size_t pos = 0;
      annotate(t, pos);
      out.push_back(std::move(t));
    }
  }
  return out;
}

std::uint64_t count_derivations(const ParseState& st) {
  DerivationWalker walker(st, 0);
  std::uint64_t total = 0;
  for (ItemRef r : root_items(st)) {
    std::uint64_t c = walker.count(r);
    total = total > UINT64_MAX - c ? UINT64_MAX : total + c;
  }
  return total;
}

}  // namespace codeco
