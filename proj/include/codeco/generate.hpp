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

// Exhaustive generation up to a token bound, with ambiguity and subset
// checks built on it.
//
// Generation walks the tree of sentence prefixes depth first, extending each
// prefix by every token the chart could scan next and dropping prefixes on
// which no item survives.  Reference and scope handling is therefore exactly
// the parser's.  Sentences come out ordered by length, then by token
// sequence; each is emitted once per derivation.

#ifndef CODECO_GENERATE_HPP
#define CODECO_GENERATE_HPP

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "codeco/core.hpp"
#include "codeco/parser.hpp"

namespace codeco {

using Sentence = std::vector<std::string>;

struct GenerateOptions {
  std::size_t max_tokens = 8;
  // Maximum number of chart extensions; BudgetExceeded beyond it.
  std::uint64_t budget = 10'000'000;
};

using DerivationSink =
    std::function<void(const Sentence& sentence, const SyntaxTree& tree)>;

// Calls sink once per derivation of every sentence within the bound.
void generate(const Grammar& g, std::string_view start,
              const GenerateOptions& options, const DerivationSink& sink);

// Calls sink once per sentence with its derivation count.
void generate_counts(
    const Grammar& g, std::string_view start, const GenerateOptions& options,
    const std::function<void(const Sentence&, std::uint64_t)>& sink);

struct GenerationReport {
  std::size_t bound = 0;
  std::uint64_t sentence_count = 0;    // distinct sentences
  std::uint64_t derivation_count = 0;
  // Sentences with two or more derivations, in generation order.
  std::vector<std::pair<Sentence, std::uint64_t>> duplicate_groups;
  std::chrono::duration<double> elapsed{};
};

GenerationReport check_ambiguity(const Grammar& g, std::string_view start,
                                 const GenerateOptions& options);

struct SubsetReport {
  std::size_t bound = 0;
  std::uint64_t checked_count = 0;  // distinct sentences of the first grammar
  std::vector<Sentence> counterexamples;
  std::chrono::duration<double> elapsed{};
};

// Sentences of a within the bound that b does not accept.
SubsetReport check_subset(const Grammar& a, const Grammar& b,
                          std::string_view start_a, std::string_view start_b,
                          const GenerateOptions& options);

std::string join_tokens(const Sentence& s);

}  // namespace codeco

#endif  // CODECO_GENERATE_HPP
