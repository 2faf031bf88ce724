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

#include "codeco/core.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "codeco/text.hpp"

namespace codeco {

const FeatureValue* FeatureStructure::find(std::string_view name) const {
  for (const auto& [n, v] : entries_) {
    if (n == name) return &v;
  }
  return nullptr;
}

void FeatureStructure::set(std::string name, FeatureValue value) {
  for (auto& [n, v] : entries_) {
    if (n == name) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(name), std::move(value));
}

std::optional<std::string> FeatureStructure::duplicate_name() const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (entries_[i].first == entries_[j].first) return entries_[i].first;
    }
  }
  return std::nullopt;
}

const char* to_string(CategoryKind kind) {
  switch (kind) {
    case CategoryKind::Nonterminal: return "nonterminal";
    case CategoryKind::Preterminal: return "preterminal";
    case CategoryKind::Terminal: return "terminal";
    case CategoryKind::FwdRef: return "forward reference";
    case CategoryKind::BwdRef: return "backward reference";
    case CategoryKind::ScopeOpener: return "scope opener";
  }
  return "?";
}

Category Category::nonterminal(std::string name, FeatureStructure fs) {
  return {CategoryKind::Nonterminal, std::move(name), std::move(fs)};
}
Category Category::preterminal(std::string name, FeatureStructure fs) {
  return {CategoryKind::Preterminal, std::move(name), std::move(fs)};
}
Category Category::terminal(std::string token) {
  return {CategoryKind::Terminal, std::move(token), {}};
}
Category Category::fwd_ref(FeatureStructure fs) {
  return {CategoryKind::FwdRef, {}, std::move(fs)};
}
Category Category::bwd_ref(FeatureStructure fs) {
  return {CategoryKind::BwdRef, {}, std::move(fs)};
}
Category Category::scope_opener() {
  return {CategoryKind::ScopeOpener, {}, {}};
}

Grammar Grammar::from_rules(std::string start, std::vector<Rule> rules) {
  // name -> all rules lexical?
  std::map<std::string, bool, std::less<>> lexical_only;
  for (const Rule& r : rules) {
    if (!r.head.is_named()) continue;
    auto [it, inserted] = lexical_only.emplace(r.head.name(), true);
    it->second = it->second && r.is_lexical();
  }
  // The start category always heads production rules, so that a parse
  // has a rule to start from.
  if (auto it = lexical_only.find(start); it != lexical_only.end()) {
    it->second = false;
  }
  auto classify = [&](Category& c) {
    if (!c.is_named()) return;
    auto it = lexical_only.find(c.name());
    c.set_kind(it != lexical_only.end() && it->second
                   ? CategoryKind::Preterminal
                   : CategoryKind::Nonterminal);
  };

  std::vector<Rule> normal;
  std::vector<Rule> lexical;
  for (Rule& r : rules) {
    classify(r.head);
    for (Category& c : r.body) classify(c);
    if (r.head.kind() == CategoryKind::Preterminal) {
      lexical.push_back(std::move(r));
    } else {
      normal.push_back(std::move(r));
    }
  }
  return Grammar(std::move(start), std::move(normal), std::move(lexical));
}

bool Grammar::defines(std::string_view name) const {
  auto heads = [&](const std::vector<Rule>& rs) {
    return std::any_of(rs.begin(), rs.end(), [&](const Rule& r) {
      return r.head.is_named() && r.head.name() == name;
    });
  };
  return heads(rules_) || heads(lexical_rules_);
}

// ---------------------------------------------------------------------------
// Bindings and unification

const FeatureValue* BindingEnv::lookup(VarId id) const {
  auto it = std::lower_bound(
      bindings_.begin(), bindings_.end(), id,
      [](const auto& entry, VarId key) { return entry.first < key; });
  if (it == bindings_.end() || it->first != id) return nullptr;
  return &it->second;
}

FeatureValue BindingEnv::walk(const FeatureValue& v) const {
  const FeatureValue* cur = &v;
  while (cur->is_var()) {
    const FeatureValue* next = lookup(cur->variable().id);
    if (next == nullptr) break;
    cur = next;
  }
  return *cur;
}

void BindingEnv::bind(VarId id, FeatureValue value) {
  auto it = std::lower_bound(
      bindings_.begin(), bindings_.end(), id,
      [](const auto& entry, VarId key) { return entry.first < key; });
  bindings_.insert(it, {id, std::move(value)});
}

std::optional<BindingEnv> unify_values(const FeatureValue& a,
                                       const FeatureValue& b,
                                       const BindingEnv& env) {
  FeatureValue ra = env.walk(a);
  FeatureValue rb = env.walk(b);
  if (ra.is_var() && rb.is_var()) {
    if (ra.variable().id == rb.variable().id) return env;
    BindingEnv out = env;
    // Bind the younger variable to the older one; both are unbound so no
    // cycle can form.
    if (ra.variable().id > rb.variable().id) {
      out.bind(ra.variable().id, rb);
    } else {
      out.bind(rb.variable().id, ra);
    }
    return out;
  }
  if (ra.is_var()) {
    BindingEnv out = env;
    out.bind(ra.variable().id, rb);
    return out;
  }
  if (rb.is_var()) {
    BindingEnv out = env;
    out.bind(rb.variable().id, ra);
    return out;
  }
  if (ra.text() == rb.text()) return env;
  return std::nullopt;
}

std::optional<BindingEnv> unify_features(const FeatureStructure& a,
                                         const FeatureStructure& b,
                                         const BindingEnv& env) {
  std::optional<BindingEnv> cur = env;
  for (const auto& [name, va] : a) {
    const FeatureValue* vb = b.find(name);
    if (vb == nullptr) continue;
    cur = unify_values(va, *vb, *cur);
    if (!cur) return std::nullopt;
  }
  return cur;
}

std::optional<BindingEnv> unify_categories(const Category& a,
                                           const Category& b,
                                           const BindingEnv& env) {
  if (a.is_named() && b.is_named()) {
    if (a.name() != b.name()) return std::nullopt;
    return unify_features(a.features(), b.features(), env);
  }
  auto is_ref = [](const Category& c) {
    return c.kind() == CategoryKind::FwdRef || c.kind() == CategoryKind::BwdRef;
  };
  if (is_ref(a) && is_ref(b)) {
    return unify_features(a.features(), b.features(), env);
  }
  if (a.kind() != b.kind()) return std::nullopt;
  if (a.kind() == CategoryKind::Terminal) {
    if (a.token() != b.token()) return std::nullopt;
    return env;
  }
  // Scope openers carry nothing.
  return env;
}

FeatureValue resolve(const FeatureValue& v, const BindingEnv& env) {
  return env.walk(v);
}

FeatureStructure resolve(const FeatureStructure& fs, const BindingEnv& env) {
  if (env.empty()) return fs;
  FeatureStructure out = fs;
  for (auto& [name, value] : out.entries()) value = env.walk(value);
  return out;
}

Category resolve(const Category& cat, const BindingEnv& env) {
  if (cat.features().empty() || env.empty()) return cat;
  Category out = cat;
  out.features() = resolve(cat.features(), env);
  return out;
}

Rule fresh_rule_instance(const Rule& r, InstanceCounter& counter) {
  std::unordered_map<VarId, VarId> renaming;
  auto rename = [&](Category& c) {
    for (auto& [name, value] : c.features().entries()) {
      if (!value.is_var()) continue;
      auto [it, inserted] = renaming.emplace(value.variable().id, 0);
      if (inserted) it->second = counter.next();
      value = FeatureValue::var(it->second, value.variable().name);
    }
  };
  Rule out = r;
  rename(out.head);
  for (Category& c : out.body) rename(c);
  return out;
}

VarId variable_bound(const Category& cat) {
  VarId bound = 0;
  for (const auto& [name, value] : cat.features()) {
    if (value.is_var()) bound = std::max(bound, value.variable().id + 1);
  }
  return bound;
}

VarId variable_bound(const Rule& rule) {
  VarId bound = variable_bound(rule.head);
  for (const Category& c : rule.body) bound = std::max(bound, variable_bound(c));
  return bound;
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Diagnostic> validate_grammar(const Grammar& g) {
  std::vector<Diagnostic> out;
  if (!g.defines(g.start())) {
    out.push_back({std::nullopt,
                   "start category '" + g.start() + "' heads no rule"});
  }

  std::set<std::string, std::less<>> preterminals;
  for (const Rule& r : g.lexical_rules()) {
    if (r.head.is_named()) preterminals.insert(r.head.name());
  }

  auto check_features = [&](std::size_t index, const Category& c) {
    if (auto dup = c.features().duplicate_name()) {
      out.push_back({index, "feature '" + *dup + "' appears twice in " +
                                to_string(c)});
    }
  };

  std::size_t index = 0;
  auto check_rule = [&](const Rule& r, bool lexical_list) {
    if (!r.head.is_named()) {
      out.push_back({index, std::string(to_string(r.head.kind())) +
                                " cannot head a rule"});
    } else if (!lexical_list && (r.head.kind() == CategoryKind::Preterminal ||
                                 preterminals.contains(r.head.name()))) {
      out.push_back({index, "preterminal '" + r.head.name() +
                                "' heads a non-lexical rule"});
    } else if (lexical_list && (!r.is_lexical() ||
                                r.head.kind() != CategoryKind::Preterminal)) {
      out.push_back({index, "lexical rule for '" + r.head.name() +
                                "' must rewrite a preterminal to one terminal"});
    }
    check_features(index, r.head);
    for (const Category& c : r.body) check_features(index, c);
    ++index;
  };
  for (const Rule& r : g.rules()) check_rule(r, false);
  for (const Rule& r : g.lexical_rules()) check_rule(r, true);
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

std::string to_string(const FeatureValue& v) {
  if (v.is_atom()) return text::quote_atom(v.text());
  const Variable& var = v.variable();
  if (var.name.empty()) return "$_" + std::to_string(var.id);
  return "$" + var.name;
}

std::string to_string(const FeatureStructure& fs) {
  std::string out;
  for (const auto& [name, value] : fs) {
    if (!out.empty()) out += ", ";
    out += name;
    out += ':';
    out += to_string(value);
  }
  return out;
}

std::string to_string(const Category& cat) {
  auto with_features = [&](std::string prefix) {
    if (cat.features().empty()) return prefix;
    return prefix + "(" + to_string(cat.features()) + ")";
  };
  switch (cat.kind()) {
    case CategoryKind::Nonterminal:
    case CategoryKind::Preterminal:
      return with_features(cat.name());
    case CategoryKind::Terminal:
      return text::quote_terminal(cat.token());
    case CategoryKind::FwdRef:
      return with_features(">");
    case CategoryKind::BwdRef:
      return with_features("<");
    case CategoryKind::ScopeOpener:
      return "//";
  }
  return "?";
}

std::string to_string(const Rule& rule) {
  std::string out = to_string(rule.head);
  out += rule.scope_closing ? " ~>" : " =>";
  if (rule.body.empty()) return out + " .";
  for (const Category& c : rule.body) {
    out += ' ';
    out += to_string(c);
  }
  return out;
}

}  // namespace codeco
