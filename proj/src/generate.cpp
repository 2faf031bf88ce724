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

#include "codeco/generate.hpp"

#include <memory>
#include <optional>
#include <unordered_map>

namespace codeco {
namespace {

using Clock = std::chrono::steady_clock;

class Budget {
 public:
  explicit Budget(std::uint64_t limit) : limit_(limit) {}
  void charge() {
    if (++used_ > limit_) {
      throw BudgetExceeded("generation budget of " + std::to_string(limit_) +
                           " chart extensions exceeded");
    }
  }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

// Depth-first walk over the prefixes of exactly `length` tokens.
template <typename Visit>
void walk(const ParseState& st, std::size_t length, Budget& budget,
          Visit& visit) {
  if (st.position() == length) {
    if (is_complete(st)) visit(st);
    return;
  }
  for (const std::string& t : candidate_tokens(st)) {
    budget.charge();
    if (auto next = codeco::advance(st, t)) walk(*next, length, budget, visit);
  }
}

template <typename Visit>
void walk_sentences(const Grammar& g, std::string_view start,
                    const GenerateOptions& options, Visit&& visit) {
  auto pg = std::make_shared<const ParserGrammar>(g);
  ParseState root = new_session(pg, start);
  Budget budget(options.budget);
  // Iterative deepening gives the length-first order without holding a
  // whole level of states in memory.
  for (std::size_t len = 0; len <= options.max_tokens; ++len) {
    walk(root, len, budget, visit);
  }
}

struct SentenceHash {
  std::size_t operator()(const Sentence& s) const {
    std::size_t h = 0;
    for (const std::string& t : s) {
      h ^= std::hash<std::string>{}(t) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace

std::string join_tokens(const Sentence& s) {
  std::string out;
  for (const std::string& t : s) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

void generate(const Grammar& g, std::string_view start,
              const GenerateOptions& options, const DerivationSink& sink) {
  auto visit = [&](const ParseState& st) {
    for (const SyntaxTree& t : extract_trees(st)) sink(st.tokens(), t);
  };
  walk_sentences(g, start, options, visit);
}

void generate_counts(
    const Grammar& g, std::string_view start, const GenerateOptions& options,
    const std::function<void(const Sentence&, std::uint64_t)>& sink) {
  auto visit = [&](const ParseState& st) {
    sink(st.tokens(), count_derivations(st));
  };
  walk_sentences(g, start, options, visit);
}

GenerationReport check_ambiguity(const Grammar& g, std::string_view start,
                                 const GenerateOptions& options) {
  const auto t0 = Clock::now();
  GenerationReport report;
  report.bound = options.max_tokens;
  std::unordered_map<Sentence, std::uint64_t, SentenceHash> seen;
  std::vector<const Sentence*> order;
  generate_counts(g, start, options, [&](const Sentence& s, std::uint64_t n) {
    auto [it, inserted] = seen.try_emplace(s, 0);
    if (inserted) order.push_back(&it->first);
    it->second += n;
    report.derivation_count += n;
  });
  report.sentence_count = seen.size();
  for (const Sentence* s : order) {
    std::uint64_t n = seen.at(*s);
    if (n >= 2) report.duplicate_groups.emplace_back(*s, n);
  }
  report.elapsed = Clock::now() - t0;
  return report;
}

namespace {

struct SubsetWalk {
  Budget& budget;
  SubsetReport& report;

  void run(const ParseState& a, const std::optional<ParseState>& b,
           std::size_t length) {
    if (a.position() == length) {
      if (!is_complete(a)) return;
      ++report.checked_count;
      if (!b || !is_complete(*b)) report.counterexamples.push_back(a.tokens());
      return;
    }
    for (const std::string& t : candidate_tokens(a)) {
      budget.charge();
      auto next_a = codeco::advance(a, t);
      if (!next_a) continue;
      std::optional<ParseState> next_b;
      if (b) {
        budget.charge();
        next_b = codeco::advance(*b, t);
      }
      run(*next_a, next_b, length);
    }
  }
};

}  // namespace

SubsetReport check_subset(const Grammar& a, const Grammar& b,
                          std::string_view start_a, std::string_view start_b,
                          const GenerateOptions& options) {
  const auto t0 = Clock::now();
  SubsetReport report;
  report.bound = options.max_tokens;
  ParseState root_a = new_session(std::make_shared<const ParserGrammar>(a), start_a);
  std::optional<ParseState> root_b =
      new_session(std::make_shared<const ParserGrammar>(b), start_b);
  Budget budget(options.budget);
  SubsetWalk w{budget, report};
  for (std::size_t len = 0; len <= options.max_tokens; ++len) {
    w.run(root_a, root_b, len);
  }
  report.elapsed = Clock::now() - t0;
  return report;
}

}  // namespace codeco
