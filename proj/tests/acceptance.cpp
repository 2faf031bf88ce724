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

// Acceptance suite.  Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "codeco/generate.hpp"
#include "codeco/notation.hpp"
#include "codeco/oracle.hpp"
#include "codeco/parser.hpp"
#include "support/test_support.hpp"

namespace codeco {
namespace {

using Clock = std::chrono::steady_clock;
using testing::load_grammar;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::set<std::string> option_tokens(const std::vector<TokenOption>& options) {
  std::set<std::string> out;
  for (const TokenOption& o : options) out.insert(o.token);
  return out;
}

std::string show(const std::set<std::string>& s) {
  std::string out = "{";
  for (const std::string& t : s) out += (out.size() > 1 ? ", " : "") + t;
  return out + "}";
}

const std::vector<std::string> kPartial = {
    "every", "man", "protects", "a", "house", "from", "every", "enemy",
    "and", "does", "not", "destroy"};

Outcome running_example() {
  Outcome o;
  const auto t0 = Clock::now();
  Grammar g = load_grammar("grammars/demo.codeco");
  ParseState st = new_session(g);
  for (const std::string& t : kPartial) {
    FeedResult r = feed_token(st, t);
    if (!r.accepted) {
      o.fail("token '" + t + "' rejected");
      return o;
    }
    st = std::move(r.state);
  }
  if (!option_tokens(next_tokens(st)).contains("the")) o.fail("'the' not offered");
  std::set<std::string> ants;
  for (const Antecedent& a : accessible_antecedents(st)) {
    const FeatureValue* noun = a.features.find("noun");
    ants.insert(noun ? noun->text() : to_string(a.features));
  }
  if (ants != std::set<std::string>{"man", "house"}) {
    o.fail("antecedents " + show(ants));
  }
  FeedResult the = feed_token(st, "the");
  if (!the.accepted) {
    o.fail("'the' rejected");
    return o;
  }
  std::set<std::string> nouns = option_tokens(next_tokens(the.state));
  if (nouns != std::set<std::string>{"man", "house"}) {
    o.fail("after 'the': " + show(nouns));
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (secs >= 1.0) o.fail("took " + std::to_string(secs) + " s");
  if (o.pass) o.detail = "after 'the': " + show(nouns) + ", antecedents " + show(ants);
  return o;
}

Outcome lookahead_exactness() {
  Outcome o;
  const std::size_t kBound = 8;
  // Continuations are unbounded in the parser; the oracle's bounded ground
  // truth agrees once it may run kSlack tokens past the continuation.
  const std::size_t kSlack = 8;
  std::size_t grammars = 0, prefixes = 0;
  for (const std::string& file : testing::corpus_files()) {
    Grammar g = load_grammar(file);
    ++grammars;
    OracleConfig cfg;
    cfg.max_tokens = kBound;
    std::set<Sentence> prefix_set;
    for (const auto& [s, n] : enumerate_naive(g, g.start(), cfg)) {
      for (std::size_t k = 0; k <= s.size(); ++k) {
        prefix_set.emplace(s.begin(), s.begin() + static_cast<long>(k));
      }
    }
    auto pg = std::make_shared<const ParserGrammar>(g);
    for (const Sentence& p : prefix_set) {
      ++prefixes;
      auto st = parse_tokens(new_session(pg, g.start()), p);
      if (!st) {
        o.fail(file + ": prefix '" + join_tokens(p) + "' rejected by the parser");
        continue;
      }
      OracleConfig c = cfg;
      c.max_tokens = p.size() + 1 + kSlack;
      std::set<std::string> expected = continuations_naive(g, g.start(), p, c);
      std::set<std::string> got = option_tokens(next_tokens(*st));
      if (got != expected) {
        o.fail(file + ": after '" + join_tokens(p) + "' parser " + show(got) +
               " oracle " + show(expected));
      }
    }
  }
  if (grammars < 10) o.fail("corpus has only " + std::to_string(grammars) + " grammars");
  if (o.pass) {
    o.detail = std::to_string(grammars) + " grammars, " + std::to_string(prefixes) +
               " prefixes";
  }
  return o;
}

Outcome derivation_counts() {
  Outcome o;
  const std::size_t kBound = 7;
  std::size_t grammars = 0;
  std::uint64_t sequences = 0;
  for (const std::string& file : testing::corpus_files()) {
    Grammar g = load_grammar(file);
    ++grammars;
    OracleConfig cfg;
    cfg.max_tokens = kBound;
    SentenceCounts oracle = enumerate_naive(g, g.start(), cfg);
    std::set<Sentence> oracle_prefixes;
    for (const auto& [s, n] : oracle) {
      for (std::size_t k = 0; k <= s.size(); ++k) {
        oracle_prefixes.emplace(s.begin(), s.begin() + static_cast<long>(k));
      }
    }
    std::vector<std::string> lexicon = testing::lexicon(g);
    auto pg = std::make_shared<const ParserGrammar>(g);

    // Every sequence over the lexicon is visited unless both sides have
    // already ruled out all its extensions: the parser because no chart
    // item survived, the oracle because no sentence has it as a prefix.
    std::function<void(Sentence&, const std::optional<ParseState>&)> visit =
        [&](Sentence& seq, const std::optional<ParseState>& st) {
          ++sequences;
          std::uint64_t parser = 0;
          if (st && is_complete(*st)) {
            parser = count_derivations(*st);
            if (parser <= 1000 && extract_trees(*st).size() != parser) {
              o.fail(file + ": tree count differs from derivation count for '" +
                     join_tokens(seq) + "'");
            }
          }
          auto it = oracle.find(seq);
          std::uint64_t expected = it == oracle.end() ? 0 : it->second;
          if (parser != expected) {
            o.fail(file + ": '" + join_tokens(seq) + "' parser " +
                   std::to_string(parser) + " oracle " + std::to_string(expected));
          }
          if (seq.size() == kBound) return;
          for (const std::string& t : lexicon) {
            std::optional<ParseState> next;
            if (st) next = codeco::advance(*st, t);
            seq.push_back(t);
            if (next || oracle_prefixes.contains(seq)) visit(seq, next);
            seq.pop_back();
          }
        };
    Sentence seq;
    visit(seq, new_session(pg, g.start()));
  }
  if (o.pass) {
    o.detail = std::to_string(grammars) + " grammars, " + std::to_string(sequences) +
               " sequences";
  }
  return o;
}

Outcome ambiguity_check() {
  Outcome o;
  GenerateOptions opts;
  opts.max_tokens = 8;
  GenerationReport core =
      check_ambiguity(load_grammar("grammars/demo-core.codeco"), "s", opts);
  if (!core.duplicate_groups.empty()) {
    o.fail("demo-core: " + join_tokens(core.duplicate_groups[0].first));
  }
  struct Planted {
    std::string file;
    std::vector<std::pair<Sentence, std::uint64_t>> expected;
  };
  std::vector<Planted> planted = {
      {"grammars/planted-ambiguity.codeco", {{{"x"}, 2}}},
      {"grammars/planted-attachment.codeco", {{{"see", "n", "with", "n"}, 2}}},
  };
  for (const Planted& p : planted) {
    GenerationReport r = check_ambiguity(load_grammar(p.file), "s", opts);
    if (r.duplicate_groups != p.expected) o.fail(p.file + ": wrong duplicate groups");
  }
  if (o.pass) {
    o.detail = "demo-core: " + std::to_string(core.sentence_count) +
               " sentences, 0 duplicates; planted groups found exactly";
  }
  return o;
}

Outcome subset_check() {
  Outcome o;
  GenerateOptions opts;
  opts.max_tokens = 8;
  Grammar core = load_grammar("grammars/demo-core.codeco");
  Grammar full = load_grammar("grammars/demo.codeco");
  SubsetReport r = check_subset(core, full, "s", "s", opts);
  if (!r.counterexamples.empty()) {
    o.fail("counterexample: " + join_tokens(r.counterexamples[0]));
  }
  // Removing any lexical rule the core uses must be detected.
  std::size_t mutants = 0;
  for (std::size_t i = 0; i < full.lexical_rules().size(); ++i) {
    const Rule& removed = full.lexical_rules()[i];
    bool in_core = std::find(core.lexical_rules().begin(), core.lexical_rules().end(),
                             removed) != core.lexical_rules().end();
    if (!in_core) continue;
    std::vector<Rule> rules = full.rules();
    for (std::size_t j = 0; j < full.lexical_rules().size(); ++j) {
      if (j != i) rules.push_back(full.lexical_rules()[j]);
    }
    Grammar mutant = Grammar::from_rules(full.start(), rules);
    ++mutants;
    if (check_subset(core, mutant, "s", "s", opts).counterexamples.empty()) {
      o.fail("mutant without '" + to_string(removed) + "' not detected");
    }
  }
  if (o.pass) {
    o.detail = std::to_string(r.checked_count) + " sentences checked; " +
               std::to_string(mutants) + " mutants each yield counterexamples";
  }
  return o;
}

Outcome round_trip() {
  Outcome o;
  testing::RandomGrammarGenerator gen(20261018);
  for (int i = 0; i < 1000; ++i) {
    Grammar g = gen.next();
    std::string text = serialize_grammar(g);
    GrammarParse p = parse_grammar(text);
    if (!p.ok()) {
      o.fail("grammar " + std::to_string(i) + " does not re-parse");
      continue;
    }
    if (!testing::same_modulo_variables(g, p.grammar())) {
      o.fail("grammar " + std::to_string(i) + " differs after round trip");
    }
  }
  if (o.pass) o.detail = "1000 random grammars";
  return o;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

Outcome performance() {
  Outcome o;
  Grammar g = load_grammar("grammars/demo.codeco");
  const Sentence sentence = {"every", "man", "protects", "a", "house", "from",
                             "every", "enemy", "and", "does", "not", "destroy",
                             "the", "house", "and", "waits", "and", "protects",
                             "the", "man"};
  auto pg = std::make_shared<const ParserGrammar>(g);
  std::vector<double> lookahead;
  std::vector<double> parses;
  for (int rep = 0; rep < 5; ++rep) {
    ParseState st = new_session(pg, "s");
    for (std::size_t i = 0; i <= sentence.size(); ++i) {
      // Fresh state: no cached lookahead.
      auto fresh = parse_tokens(new_session(pg, "s"), {sentence.begin(),
                                                       sentence.begin() + static_cast<long>(i)});
      const auto t0 = Clock::now();
      std::vector<TokenOption> opts = next_tokens(*fresh);
      lookahead.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
      if (i < sentence.size() && !option_tokens(opts).contains(sentence[i])) {
        o.fail("'" + sentence[i] + "' not offered at " + std::to_string(i));
        return o;
      }
    }
    const auto t0 = Clock::now();
    auto done = parse_tokens(new_session(pg, "s"), sentence);
    bool complete = done && is_complete(*done);
    parses.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    if (!complete) {
      o.fail("sentence not complete");
      return o;
    }
  }
  double la = median(lookahead);
  double full = median(parses);
  if (la >= 50.0) o.fail("median next_tokens " + std::to_string(la) + " ms");
  if (full >= 20.0) o.fail("median full parse " + std::to_string(full) + " ms");
  char buf[160];
  std::snprintf(buf, sizeof buf, "median next_tokens %.3f ms (max %.3f ms), full parse %.3f ms",
                la, *std::max_element(lookahead.begin(), lookahead.end()), full);
  if (o.pass) o.detail = buf;
  return o;
}

}  // namespace
}  // namespace codeco

int main() {
  using namespace codeco;
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"running example reproduction", running_example},
      {"lookahead exactness", lookahead_exactness},
      {"parser/oracle derivation counts", derivation_counts},
      {"ambiguity check", ambiguity_check},
      {"subset check", subset_check},
      {"notation round trip", round_trip},
      {"performance budget", performance},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("%s  %-34s %8.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.name, secs,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
