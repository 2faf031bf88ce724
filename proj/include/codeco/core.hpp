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

#ifndef CODECO_CORE_HPP
#define CODECO_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace codeco {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an exhaustive procedure runs past its configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

using VarId = std::uint32_t;

struct Atom {
  std::string text;
  bool operator==(const Atom&) const = default;
};

// Variables are rule-local.  The name is kept for printing only; identity
// is the id.
struct Variable {
  VarId id = 0;
  std::string name;
  bool operator==(const Variable& o) const { return id == o.id; }
};

class FeatureValue {
 public:
  FeatureValue() : v_(Atom{}) {}
  FeatureValue(Atom a) : v_(std::move(a)) {}
  FeatureValue(Variable v) : v_(std::move(v)) {}

  static FeatureValue atom(std::string text) { return Atom{std::move(text)}; }
  static FeatureValue var(VarId id, std::string name = {}) {
    return Variable{id, std::move(name)};
  }

  bool is_atom() const { return std::holds_alternative<Atom>(v_); }
  bool is_var() const { return std::holds_alternative<Variable>(v_); }
  const std::string& text() const { return std::get<Atom>(v_).text; }
  const Variable& variable() const { return std::get<Variable>(v_); }

  bool operator==(const FeatureValue& o) const { return v_ == o.v_; }

 private:
  std::variant<Atom, Variable> v_;
};

// Flat feature structure.  Entries keep their written order so that
// serialization reproduces the source; lookup is linear (structures are
// small).  Duplicate names are representable so that the validator can
// report them, but every operation assumes there are none.
class FeatureStructure {
 public:
  using Entry = std::pair<std::string, FeatureValue>;

  FeatureStructure() = default;
  FeatureStructure(std::initializer_list<Entry> entries) : entries_(entries) {}
  explicit FeatureStructure(std::vector<Entry> entries)
      : entries_(std::move(entries)) {}

  const FeatureValue* find(std::string_view name) const;
  void set(std::string name, FeatureValue value);
  void push_back(std::string name, FeatureValue value) {
    entries_.emplace_back(std::move(name), std::move(value));
  }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<Entry>& entries() { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  // Name of the first feature that occurs twice, if any.
  std::optional<std::string> duplicate_name() const;

  bool operator==(const FeatureStructure&) const = default;

 private:
  std::vector<Entry> entries_;
};

enum class CategoryKind {
  Nonterminal,
  Preterminal,
  Terminal,
  FwdRef,
  BwdRef,
  ScopeOpener,
};

const char* to_string(CategoryKind kind);

class Category {
 public:
  Category() = default;

  static Category nonterminal(std::string name, FeatureStructure fs = {});
  static Category preterminal(std::string name, FeatureStructure fs = {});
  static Category terminal(std::string token);
  static Category fwd_ref(FeatureStructure fs);
  static Category bwd_ref(FeatureStructure fs);
  static Category scope_opener();

  CategoryKind kind() const { return kind_; }
  // Category name for Nonterminal/Preterminal, token for Terminal, empty
  // otherwise.
  const std::string& name() const { return name_; }
  const std::string& token() const { return name_; }
  const FeatureStructure& features() const { return features_; }
  FeatureStructure& features() { return features_; }

  bool is_named() const {
    return kind_ == CategoryKind::Nonterminal ||
           kind_ == CategoryKind::Preterminal;
  }
  // Zero-width categories consume no token.
  bool is_zero_width() const {
    return kind_ == CategoryKind::FwdRef || kind_ == CategoryKind::BwdRef ||
           kind_ == CategoryKind::ScopeOpener;
  }
  void set_kind(CategoryKind kind) { kind_ = kind; }

  bool operator==(const Category&) const = default;

 private:
  Category(CategoryKind kind, std::string name, FeatureStructure fs)
      : kind_(kind), name_(std::move(name)), features_(std::move(fs)) {}

  CategoryKind kind_ = CategoryKind::Nonterminal;
  std::string name_;
  FeatureStructure features_;
};

struct Rule {
  Category head;
  std::vector<Category> body;
  bool scope_closing = false;

  // A lexical rule rewrites its head to exactly one terminal.
  bool is_lexical() const {
    return body.size() == 1 && body[0].kind() == CategoryKind::Terminal;
  }
  bool operator==(const Rule&) const = default;
};

// Immutable collection of production and lexical rules.
//
// Construct through from_rules(), which classifies every category name: a
// name other than the start category is a preterminal iff all rules with
// that head are lexical.  Body occurrences are relabeled to match.
class Grammar {
 public:
  Grammar() = default;
  Grammar(std::string start, std::vector<Rule> rules,
          std::vector<Rule> lexical_rules)
      : start_(std::move(start)),
        rules_(std::move(rules)),
        lexical_rules_(std::move(lexical_rules)) {}

  static Grammar from_rules(std::string start, std::vector<Rule> rules);

  const std::string& start() const { return start_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const std::vector<Rule>& lexical_rules() const { return lexical_rules_; }
  std::size_t rule_count() const {
    return rules_.size() + lexical_rules_.size();
  }

  bool defines(std::string_view name) const;

  bool operator==(const Grammar&) const = default;

 private:
  std::string start_;
  std::vector<Rule> rules_;
  std::vector<Rule> lexical_rules_;
};

// Substitution produced by unification.  Bindings may chain through other
// variables; no chain is ever cyclic.  Values are kept sorted by id.
class BindingEnv {
 public:
  // Follows the chain from v to an atom or an unbound variable.
  FeatureValue walk(const FeatureValue& v) const;
  const FeatureValue* lookup(VarId id) const;
  // Caller guarantees id is unbound and binding it creates no cycle.
  void bind(VarId id, FeatureValue value);

  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::vector<std::pair<VarId, FeatureValue>>& bindings() const {
    return bindings_;
  }

 private:
  std::vector<std::pair<VarId, FeatureValue>> bindings_;
};

// Unifies two values; returns the extended environment or nullopt.
std::optional<BindingEnv> unify_values(const FeatureValue& a,
                                       const FeatureValue& b,
                                       const BindingEnv& env);

// Features present on only one side are unconstrained.
std::optional<BindingEnv> unify_features(const FeatureStructure& a,
                                         const FeatureStructure& b,
                                         const BindingEnv& env);

// Named categories unify when their names agree (nonterminal and
// preterminal occurrences of a name are interchangeable).  A forward and a
// backward reference unify by features.  Terminals require equal tokens.
std::optional<BindingEnv> unify_categories(const Category& a,
                                           const Category& b,
                                           const BindingEnv& env);

FeatureValue resolve(const FeatureValue& v, const BindingEnv& env);
FeatureStructure resolve(const FeatureStructure& fs, const BindingEnv& env);
Category resolve(const Category& cat, const BindingEnv& env);

// Issues variable ids for rule instances.
class InstanceCounter {
 public:
  explicit InstanceCounter(VarId first = 0) : next_(first) {}
  VarId next() { return next_++; }
  VarId peek() const { return next_; }

 private:
  VarId next_;
};

// Copy of r with every variable renamed to an id never handed out before.
// Sharing is preserved.
Rule fresh_rule_instance(const Rule& r, InstanceCounter& counter);

// Largest variable id in the category plus one (0 if it has none).
VarId variable_bound(const Category& cat);
VarId variable_bound(const Rule& rule);

struct Diagnostic {
  // Index into rules() followed by lexical_rules(); nullopt for
  // grammar-level problems.
  std::optional<std::size_t> rule_index;
  std::string message;
  bool operator==(const Diagnostic&) const = default;
};

std::vector<Diagnostic> validate_grammar(const Grammar& g);

// Rendering used by diagnostics, the CLI, and tests.  Variables print as
// $name (or $_id when anonymous).
std::string to_string(const FeatureValue& v);
std::string to_string(const FeatureStructure& fs);
std::string to_string(const Category& cat);
std::string to_string(const Rule& rule);

}  // namespace codeco

#endif  // CODECO_CORE_HPP
