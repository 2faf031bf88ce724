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

// Incremental chart parser for Codeco grammars.
//
// A ParseState is an immutable Earley chart over the tokens fed so far.
// Every chart item carries the accessibility list of its left context:
// forward references append antecedents, scope openers append scope marks,
// and completing an item of a scope-closing rule removes the first scope
// mark opened inside the item together with everything after it.  Backward
// references resolve eagerly against the most recent accessible antecedent
// that unifies.
//
// Lookahead is exact: a candidate token is offered only if the chart after
// scanning it can still be completed to a full sentence.

#ifndef CODECO_PARSER_HPP
#define CODECO_PARSER_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "codeco/core.hpp"

namespace codeco {

struct Antecedent {
  FeatureStructure features;
  std::size_t position = 0;     // token index of the forward reference
  std::size_t scope_depth = 0;  // scopes open when it was created
  bool operator==(const Antecedent&) const = default;
};

struct ScopeMark {
  std::size_t position = 0;
  bool operator==(const ScopeMark&) const = default;
};

using AccessElement = std::variant<Antecedent, ScopeMark>;

// Persistent list of antecedents and scope marks, oldest first.  Copies
// share structure; push and truncate never modify existing lists.
class AccessList {
 public:
  AccessList() = default;

  AccessList push(AccessElement e) const;
  // Keeps the first n elements.
  AccessList truncate(std::size_t n) const;
  // Removes the first scope mark at index >= from and everything after it.
  AccessList close_scopes_from(std::size_t from) const;

  std::size_t size() const { return node_ ? node_->size : 0; }
  bool empty() const { return node_ == nullptr; }
  std::size_t hash() const { return node_ ? node_->hash : 0; }
  std::size_t scope_depth() const { return node_ ? node_->marks : 0; }
  std::vector<AccessElement> elements() const;

  template <typename F>
  void for_each_newest_first(F&& f) const {
    for (const Node* n = node_.get(); n != nullptr; n = n->parent.get()) {
      if (!f(n->element)) return;
    }
  }

  bool operator==(const AccessList& o) const;

 private:
  struct Node {
    std::shared_ptr<const Node> parent;
    AccessElement element;
    std::size_t size;
    std::size_t marks;
    std::size_t hash;
  };
  explicit AccessList(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Feature snapshot stored for a forward reference: features are resolved
// under env and features still bound to a variable are dropped.
Antecedent make_antecedent(const Category& fwd_ref, const BindingEnv& env,
                           std::size_t position, std::size_t scope_depth);

// Scans from the most recent antecedent to the oldest and returns the
// first one whose features unify with the reference, together with the
// extended environment.
std::optional<std::pair<Antecedent, BindingEnv>> resolve_backward_ref(
    const Category& ref, const AccessList& access, const BindingEnv& env);

struct TokenOption {
  std::string token;
  Category category;  // the terminal, or the preterminal with its features
  FeatureStructure features;
  bool operator==(const TokenOption&) const = default;
};

struct SyntaxTree {
  enum class Kind { Node, Token, FwdRef, BwdRef, ScopeOpener };

  Kind kind = Kind::Node;
  // Node: resolved head.  Token: the terminal.  References: the resolved
  // reference category.  Scope opener: //.
  Category label;
  std::size_t start = 0;  // token span [start, end)
  std::size_t end = 0;
  std::vector<SyntaxTree> children;
  // Node only.
  std::optional<std::size_t> rule_index;
  bool lexical = false;
  bool scope_closing = false;
  // Scopes closed by this node, as [opened at, closed at) token intervals.
  std::vector<std::pair<std::size_t, std::size_t>> closed_scopes;
  // FwdRef: the antecedent created.  BwdRef: the antecedent linked to.
  std::optional<Antecedent> antecedent;

  std::vector<std::string> leaves() const;
};

namespace detail {
struct CompiledGrammar;
struct ItemSet;
struct LookaheadCache;
struct StateAccess;
}  // namespace detail

struct ParserOptions {
  // Maximum number of wildcard steps the lookahead explores when checking
  // that a candidate token can still lead to a complete sentence.  When the
  // horizon is reached without a verdict the candidate is kept.
  std::size_t completion_horizon = 12;
};

// Grammar preprocessed for parsing; immutable and shareable.
class ParserGrammar {
 public:
  explicit ParserGrammar(Grammar g, ParserOptions options = {});
  ~ParserGrammar();
  ParserGrammar(const ParserGrammar&) = delete;
  ParserGrammar& operator=(const ParserGrammar&) = delete;

  const Grammar& grammar() const;
  const ParserOptions& options() const;
  const detail::CompiledGrammar& compiled() const { return *compiled_; }

 private:
  std::unique_ptr<detail::CompiledGrammar> compiled_;
};

class ParseState {
 public:
  ParseState() = default;

  const Grammar& grammar() const;
  const std::string& start() const { return start_; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t position() const { return tokens_.size(); }

  // Number of chart items in the current item set.
  std::size_t live_items() const;

  // Internal access for the lookahead and generators.
  const std::shared_ptr<const ParserGrammar>& parser_grammar() const {
    return grammar_;
  }
  const std::vector<std::shared_ptr<const detail::ItemSet>>& sets() const {
    return sets_;
  }
  detail::LookaheadCache& cache() const { return *cache_; }

 private:
  friend struct detail::StateAccess;

  std::shared_ptr<const ParserGrammar> grammar_;
  std::string start_;
  std::vector<std::string> tokens_;
  std::vector<std::shared_ptr<const detail::ItemSet>> sets_;
  std::shared_ptr<detail::LookaheadCache> cache_;
};

// Throws Error if start heads no rule.
ParseState new_session(std::shared_ptr<const ParserGrammar> g,
                       std::string_view start);
ParseState new_session(const Grammar& g, std::string_view start);
ParseState new_session(const Grammar& g);

struct FeedResult {
  bool accepted = false;
  ParseState state;                   // unchanged when rejected
  std::string token;                  // the token that was offered
  std::vector<TokenOption> options;   // valid options when rejected
};

// Scans token if it is one of next_tokens(st).
FeedResult feed_token(const ParseState& st, std::string_view token);

// Scans token without consulting the lookahead.  Returns nullopt when no
// chart item survives the scan.  Used by exhaustive generation.
std::optional<ParseState> advance(const ParseState& st, std::string_view token);

// Exact continuation set, sorted by token, then category.
std::vector<TokenOption> next_tokens(const ParseState& st);

// Every token some chart item could scan next, without the completability
// check.  Sorted and distinct.
std::vector<std::string> candidate_tokens(const ParseState& st);

// Antecedents reachable from the live items of the current position,
// sorted by position.
std::vector<Antecedent> accessible_antecedents(const ParseState& st);

bool is_complete(const ParseState& st);

// All derivations of the token sequence, at most `limit` of them.
std::vector<SyntaxTree> extract_trees(const ParseState& st,
                                      std::size_t limit = 10000);

// Number of derivations (saturates at UINT64_MAX).  Cyclic derivations
// through unit or epsilon loops are not counted.
std::uint64_t count_derivations(const ParseState& st);

// Convenience: feeds all tokens (without the lookahead) and returns the
// resulting state, or nullopt at the first token no item can scan.
std::optional<ParseState> parse_tokens(const ParseState& initial,
                                       const std::vector<std::string>& tokens);

}  // namespace codeco

#endif  // CODECO_PARSER_HPP
