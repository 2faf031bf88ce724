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

#include <gtest/gtest.h>

#include "codeco/oracle.hpp"
#include "support/test_support.hpp"

namespace codeco {
namespace {

using testing::grammar_from;
using testing::load_grammar;

TEST(EnumerateNaive, FiniteLanguage) {
  Grammar g = grammar_from("start: s\ns => [a]\ns => [a] [b]\n");
  OracleConfig cfg;
  cfg.max_tokens = 2;
  SentenceCounts expected = {{{"a"}, 1}, {{"a", "b"}, 1}};
  EXPECT_EQ(enumerate_naive(g, "s", cfg), expected);
  cfg.max_tokens = 1;
  EXPECT_EQ(enumerate_naive(g, "s", cfg).size(), 1u);
}

TEST(EnumerateNaive, PlantedAmbiguity) {
  Grammar g = load_grammar("grammars/planted-ambiguity.codeco");
  SentenceCounts expected = {{{"x"}, 2}};
  EXPECT_EQ(enumerate_naive(g, "s", {}), expected);
}

TEST(EnumerateNaive, BudgetExceeded) {
  Grammar g = load_grammar("tests/corpus/c08-attachment.codeco");
  OracleConfig cfg;
  cfg.max_tokens = 9;
  cfg.expansion_budget = 100;
  EXPECT_THROW(enumerate_naive(g, "s", cfg), BudgetExceeded);
}

TEST(EnumerateNaive, ScopesHideAntecedents) {
  Grammar g = load_grammar("tests/corpus/c07-blocks.codeco");
  OracleConfig cfg;
  cfg.max_tokens = 7;
  SentenceCounts all = enumerate_naive(g, "s", cfg);
  EXPECT_TRUE(all.contains({"let", "x", "block", "use", "x", "done"}));
  EXPECT_TRUE(all.contains({"block", "let", "x", "use", "x", "done"}));
  EXPECT_FALSE(all.contains({"block", "let", "x", "done", "use", "x"}));
  EXPECT_FALSE(all.contains({"use", "x"}));
}

TEST(RecognizeNaive, Examples) {
  Grammar demo = load_grammar("grammars/demo.codeco");
  EXPECT_EQ(recognize_naive(demo, "s", {"every", "man", "waits"}), 1u);
  EXPECT_EQ(recognize_naive(demo, "s", {"the", "man", "waits"}), 0u);
  EXPECT_EQ(recognize_naive(demo, "s", {"every", "man"}), 0u);
  EXPECT_EQ(recognize_naive(load_grammar("grammars/planted-ambiguity.codeco"), "s", {"x"}),
            2u);
}

TEST(ContinuationsNaive, Examples) {
  Grammar demo = load_grammar("grammars/demo.codeco");
  OracleConfig cfg;
  cfg.max_tokens = 14;
  std::vector<std::string> prefix = {"every", "man", "protects", "a", "house",
                                     "from", "every", "enemy", "and", "does",
                                     "not", "destroy", "the"};
  EXPECT_EQ(continuations_naive(demo, "s", prefix, cfg),
            (std::set<std::string>{"man", "house"}));
  Grammar a = grammar_from("start: s\ns => [a]\n");
  EXPECT_EQ(continuations_naive(a, "s", {}, cfg), std::set<std::string>{"a"});
  EXPECT_TRUE(continuations_naive(a, "s", {"b"}, cfg).empty());
  EXPECT_TRUE(continuations_naive(a, "s", {"a"}, cfg).empty());
}

TEST(ContinuationsNaive, BoundedByMaxTokens) {
  Grammar demo = load_grammar("grammars/demo.codeco");
  OracleConfig cfg;
  cfg.max_tokens = 3;
  // "every man" needs at least one more token, so within three tokens only
  // one-token verb phrases are possible.
  EXPECT_EQ(continuations_naive(demo, "s", {"every", "man"}, cfg),
            std::set<std::string>{"waits"});
}

}  // namespace
}  // namespace codeco
