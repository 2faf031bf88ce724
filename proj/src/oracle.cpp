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

#include "codeco/oracle.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <unordered_map>
#include <variant>

namespace codeco {
namespace {

struct Ant {
  FeatureStructure features;
};
struct Mark {};
using Element = std::variant<Ant, Mark>;

// A pending goal: a category to derive, or the end of a scope-closing
// rule whose expansion began when the list had `start` elements.
struct Goal {
  Category cat;
  bool end_scope = false;
  std::size_t start = 0;
  std::size_t depth = 0;
};

struct State {
  BindingEnv env;
  std::vector<Goal> goals;  // top is back()
  std::vector<Element> access;
  std::vector<std::string> tokens;
};

constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max() / 4;

class Expander {
 public:
  Expander(const Grammar& g, const OracleConfig& cfg,
           const std::vector<std::string>* prefix)
      : g_(g), cfg_(cfg), prefix_(prefix), counter_(0) {
    for (const Rule& r : g.rules()) {
      all_.push_back(&r);
      counter_ = InstanceCounter(std::max(counter_.peek(), variable_bound(r)));
    }
    for (const Rule& r : g.lexical_rules()) all_.push_back(&r);
    compute_min_yield();
  }

  // emit receives the yield of each finished derivation; a branch is
  // abandoned as soon as skip returns true for its tokens so far.
  template <typename Emit, typename Skip>
  void run(std::string_view start, Emit&& emit, Skip&& skip) {
    State s;
    s.goals.push_back({Category::nonterminal(std::string(start)), false, 0, 0});
    expand(std::move(s), emit, skip);
  }

 private:
  std::size_t min_yield(const Category& c) const {
    switch (c.kind()) {
      case CategoryKind::Terminal:
        return 1;
      case CategoryKind::Nonterminal:
      case CategoryKind::Preterminal: {
        auto it = min_.find(c.name());
        return it == min_.end() ? kUnreachable : it->second;
      }
      default:
        return 0;
    }
  }

  void compute_min_yield() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Rule* r : all_) {
        std::size_t total = 0;
        for (const Category& c : r->body) total += min_yield(c);
        if (total >= kUnreachable) continue;
        auto [it, inserted] = min_.emplace(r->head.name(), total);
        if (inserted || total < it->second) {
          it->second = total;
          changed = true;
        }
      }
    }
  }

  bool fits(const State& s) const {
    std::size_t need = s.tokens.size();
    for (const Goal& goal : s.goals) {
      if (!goal.end_scope) need += min_yield(goal.cat);
    }
    return need <= cfg_.max_tokens;
  }

  template <typename Emit, typename Skip>
  void expand(State s, Emit& emit, Skip& skip) {
    // Process goals that need no branching.
    while (!s.goals.empty()) {
      if (skip(s.tokens)) return;
      Goal goal = std::move(s.goals.back());
      s.goals.pop_back();
      if (goal.end_scope) {
        for (std::size_t i = goal.start; i < s.access.size(); ++i) {
          if (std::holds_alternative<Mark>(s.access[i])) {
            s.access.resize(i);
            break;
          }
        }
        continue;
      }
      const Category& c = goal.cat;
      switch (c.kind()) {
        case CategoryKind::Terminal: {
          std::size_t pos = s.tokens.size();
          if (pos >= cfg_.max_tokens) return;
          if (prefix_ && pos < prefix_->size() && (*prefix_)[pos] != c.token()) {
            return;
          }
          s.tokens.push_back(c.token());
          continue;
        }
        case CategoryKind::FwdRef: {
          Ant ant;
          for (const auto& [name, value] : c.features()) {
            FeatureValue v = resolve(value, s.env);
            if (v.is_atom()) ant.features.push_back(name, v);
          }
          s.access.emplace_back(std::move(ant));
          continue;
        }
        case CategoryKind::ScopeOpener:
          s.access.emplace_back(Mark{});
          continue;
        case CategoryKind::BwdRef: {
          std::optional<BindingEnv> found;
          for (auto it = s.access.rbegin(); it != s.access.rend() && !found; ++it) {
            if (const Ant* ant = std::get_if<Ant>(&*it)) {
              found = unify_features(c.features(), ant->features, s.env);
            }
          }
          if (!found) return;
          s.env = std::move(*found);
          continue;
        }
        case CategoryKind::Nonterminal:
        case CategoryKind::Preterminal:
          branch(std::move(s), goal, emit, skip);
          return;
      }
    }
    emit(s.tokens);
  }

  template <typename Emit, typename Skip>
  void branch(State s, const Goal& goal, Emit& emit, Skip& skip) {
    if (goal.depth + 1 > cfg_.max_depth) return;
    for (const Rule* r : all_) {
      if (r->head.name() != goal.cat.name()) continue;
      if (++expansions_ > cfg_.expansion_budget) {
        throw BudgetExceeded("oracle expansion budget exceeded");
      }
      Rule inst = fresh_rule_instance(*r, counter_);
      auto env = unify_categories(goal.cat, inst.head, s.env);
      if (!env) continue;
      State next;
      next.env = std::move(*env);
      next.goals = s.goals;
      if (inst.scope_closing) {
        next.goals.push_back({Category(), true, s.access.size(), goal.depth});
      }
      for (auto it = inst.body.rbegin(); it != inst.body.rend(); ++it) {
        next.goals.push_back({*it, false, 0, goal.depth + 1});
      }
      next.access = s.access;
      next.tokens = s.tokens;
      if (!fits(next)) continue;
      expand(std::move(next), emit, skip);
    }
  }

  const Grammar& g_;
  const OracleConfig& cfg_;
  const std::vector<std::string>* prefix_;
  InstanceCounter counter_;
  std::vector<const Rule*> all_;
  std::unordered_map<std::string, std::size_t> min_;
  std::uint64_t expansions_ = 0;
};

}  // namespace

SentenceCounts enumerate_naive(const Grammar& g, std::string_view start,
                               const OracleConfig& cfg) {
  SentenceCounts out;
  Expander x(g, cfg, nullptr);
  x.run(
      start, [&](const std::vector<std::string>& s) { ++out[s]; },
      [](const std::vector<std::string>&) { return false; });
  return out;
}

std::uint64_t recognize_naive(const Grammar& g, std::string_view start,
                              const std::vector<std::string>& tokens,
                              OracleConfig cfg) {
  cfg.max_tokens = tokens.size();
  std::uint64_t count = 0;
  Expander x(g, cfg, &tokens);
  x.run(
      start,
      [&](const std::vector<std::string>& s) {
        if (s == tokens) ++count;
      },
      [](const std::vector<std::string>&) { return false; });
  return count;
}

std::set<std::string> continuations_naive(const Grammar& g,
                                          std::string_view start,
                                          const std::vector<std::string>& prefix,
                                          const OracleConfig& cfg) {
  std::set<std::string> out;
  const std::size_t n = prefix.size();
  Expander x(g, cfg, &prefix);
  x.run(
      start,
      [&](const std::vector<std::string>& s) {
        if (s.size() > n) out.insert(s[n]);
      },
      // Once a token is known to continue the prefix, other ways through
      // it add nothing.
      [&](const std::vector<std::string>& s) {
        return s.size() > n && out.contains(s[n]);
      });
  return out;
}

}  // namespace codeco
