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

// Brute-force reference recognizer.
//
// Expands derivations top down, left to right, and keeps the antecedent
// list as a plain vector while walking the yield.  Shares nothing with the
// chart parser except the core types, and is only meant as a baseline for
// differential tests.  Slow by design.

#ifndef CODECO_ORACLE_HPP
#define CODECO_ORACLE_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "codeco/core.hpp"

namespace codeco {

struct OracleConfig {
  std::size_t max_tokens = 8;
  // Maximum derivation tree depth.  Guards against unit and epsilon cycles.
  std::size_t max_depth = 64;
  std::uint64_t expansion_budget = 10'000'000;
};

// Sentence -> number of derivations.
using SentenceCounts = std::map<std::vector<std::string>, std::uint64_t>;

// All derivations with at most cfg.max_tokens tokens.  Throws
// BudgetExceeded.
SentenceCounts enumerate_naive(const Grammar& g, std::string_view start,
                               const OracleConfig& cfg);

// Number of derivations of exactly `tokens`.
std::uint64_t recognize_naive(const Grammar& g, std::string_view start,
                              const std::vector<std::string>& tokens,
                              OracleConfig cfg = {});

// Tokens t such that prefix + t extends to a sentence of at most
// cfg.max_tokens tokens.
std::set<std::string> continuations_naive(const Grammar& g,
                                          std::string_view start,
                                          const std::vector<std::string>& prefix,
                                          const OracleConfig& cfg);

}  // namespace codeco

#endif  // CODECO_ORACLE_HPP
