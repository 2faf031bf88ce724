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

#include <map>

#include "codeco/generate.hpp"
#include "codeco/oracle.hpp"
#include "support/test_support.hpp"

namespace codeco {
namespace {

using testing::grammar_from;
using testing::load_grammar;

std::vector<Sentence> stream(const Grammar& g, std::size_t bound) {
  std::vector<Sentence> out;
  GenerateOptions opts;
  opts.max_tokens = bound;
  generate(g, g.start(), opts,
           [&](const Sentence& s, const SyntaxTree& t) {
             EXPECT_EQ(t.leaves(), s);
             out.push_back(s);
           });
  return out;
}

TEST(Generate, SmallLanguageInCanonicalOrder) {
  Grammar g = grammar_from("start: s\ns => [a]\ns => [a] [b]\n");
  EXPECT_EQ(stream(g, 2), (std::vector<Sentence>{{"a"}, {"a", "b"}}));
  EXPECT_EQ(stream(g, 1), (std::vector<Sentence>{{"a"}}));
  EXPECT_TRUE(stream(g, 0).empty());
}

TEST(Generate, PlantedAmbiguityEmitsTwice) {
  Grammar g = load_grammar("grammars/planted-ambiguity.codeco");
  EXPECT_EQ(stream(g, 1), (std::vector<Sentence>{{"x"}, {"x"}}));
}

TEST(Generate, EpsilonLanguage) {
  Grammar g = grammar_from("start: s\ns => .\n");
  EXPECT_EQ(stream(g, 3), (std::vector<Sentence>{{}}));
}

TEST(Generate, MatchesOracleOnCorpus) {
  for (const std::string& file : testing::corpus_files()) {
    Grammar g = load_grammar(file);
    OracleConfig cfg;
    cfg.max_tokens = 7;
    SentenceCounts expected = enumerate_naive(g, g.start(), cfg);
    SentenceCounts got;
    GenerateOptions opts;
    opts.max_tokens = 7;
    Sentence prev;
    bool first = true;
    generate_counts(g, g.start(), opts, [&](const Sentence& s, std::uint64_t n) {
      if (!first) {
        EXPECT_TRUE(prev.size() < s.size() || (prev.size() == s.size() && prev < s))
            << file;
      }
      first = false;
      prev = s;
      got[s] += n;
    });
    EXPECT_EQ(got, expected) << file;
  }
}

TEST(Generate, BoundMonotonicityAndDeterminism) {
  Grammar g = load_grammar("grammars/demo.codeco");
  std::vector<Sentence> six = stream(g, 6);
  std::vector<Sentence> seven = stream(g, 7);
  EXPECT_EQ(stream(g, 6), six);
  std::set<Sentence> big(seven.begin(), seven.end());
  for (const Sentence& s : six) EXPECT_TRUE(big.contains(s));
}

TEST(Generate, BudgetExceeded) {
  GenerateOptions opts;
  opts.max_tokens = 8;
  opts.budget = 50;
  Grammar g = load_grammar("grammars/demo.codeco");
  EXPECT_THROW(check_ambiguity(g, "s", opts), BudgetExceeded);
}

TEST(CheckAmbiguity, DemoCoreIsUnambiguous) {
  Grammar g = load_grammar("grammars/demo-core.codeco");
  GenerationReport r = check_ambiguity(g, "s", {});
  EXPECT_EQ(r.bound, 8u);
  EXPECT_GT(r.sentence_count, 0u);
  EXPECT_EQ(r.sentence_count, r.derivation_count);
  EXPECT_TRUE(r.duplicate_groups.empty());
}

TEST(CheckAmbiguity, PlantedGrammars) {
  GenerationReport r =
      check_ambiguity(load_grammar("grammars/planted-ambiguity.codeco"), "s", {});
  ASSERT_EQ(r.duplicate_groups.size(), 1u);
  EXPECT_EQ(r.duplicate_groups[0].first, Sentence{"x"});
  EXPECT_EQ(r.duplicate_groups[0].second, 2u);
  EXPECT_EQ(r.sentence_count, 1u);

  r = check_ambiguity(load_grammar("grammars/planted-attachment.codeco"), "s", {});
  ASSERT_EQ(r.duplicate_groups.size(), 1u);
  EXPECT_EQ(r.duplicate_groups[0].first, (Sentence{"see", "n", "with", "n"}));
  EXPECT_EQ(r.duplicate_groups[0].second, 2u);
}

TEST(CheckAmbiguity, DuplicatesAgreeWithTreeCounts) {
  Grammar g = load_grammar("tests/corpus/c08-attachment.codeco");
  GenerateOptions opts;
  opts.max_tokens = 7;
  GenerationReport r = check_ambiguity(g, "s", opts);
  std::set<Sentence> dup;
  for (const auto& [s, n] : r.duplicate_groups) dup.insert(s);
  generate_counts(g, "s", opts, [&](const Sentence& s, std::uint64_t) {
    auto st = parse_tokens(new_session(g), s);
    ASSERT_TRUE(st);
    EXPECT_EQ(extract_trees(*st).size() >= 2, dup.contains(s));
  });
  EXPECT_FALSE(dup.empty());
}

TEST(CheckSubset, Examples) {
  Grammar demo = load_grammar("grammars/demo.codeco");
  Grammar core = load_grammar("grammars/demo-core.codeco");
  EXPECT_TRUE(check_subset(demo, demo, "s", "s", {}).counterexamples.empty());
  SubsetReport r = check_subset(core, demo, "s", "s", {});
  EXPECT_TRUE(r.counterexamples.empty());
  EXPECT_GT(r.checked_count, 0u);

  Grammar ab = grammar_from("start: s\ns => [a]\ns => [b]\n");
  Grammar a = grammar_from("start: s\ns => [a]\n");
  r = check_subset(ab, a, "s", "s", {});
  EXPECT_EQ(r.counterexamples, (std::vector<Sentence>{{"b"}}));
  EXPECT_EQ(r.checked_count, 2u);
  EXPECT_FALSE(check_subset(demo, core, "s", "s", {}).counterexamples.empty());
}

}  // namespace
}  // namespace codeco
