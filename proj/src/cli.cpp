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

#include "codeco/cli.hpp"

#include <algorithm>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "codeco/generate.hpp"
#include "codeco/notation.hpp"
#include "codeco/oracle.hpp"
#include "codeco/parser.hpp"
#include "codeco/service.hpp"
#include "codeco/wire.hpp"

namespace codeco {
namespace {

// Thrown to leave a command with a given status after printing to err.
struct Exit {
  int status;
};

struct Options {
  std::string grammar;
  std::string other_grammar;
  std::string start;
  std::string other_start;
  std::vector<std::string> tokens;
  bool read_stdin = false;
  bool trees = false;
  bool categories = false;
  std::string format = "text";
  std::size_t max_tokens = 8;
  std::uint64_t budget = 10'000'000;
  bool continuations = false;
  // serve
  std::string host = "127.0.0.1";
  int port = 8080;
  int ttl_minutes = 30;
};

class Commands {
 public:
  Commands(Options& o, std::istream& in, std::ostream& out, std::ostream& err)
      : o_(o), in_(in), out_(out), err_(err) {}

  int validate() {
    read_or_exit(o_.grammar);
    GrammarParse full = parse_grammar(read_file(o_.grammar));
    if (!full.ok()) {
      print_diagnostics(full.diagnostics(), o_.grammar);
      return kExitNegative;
    }
    out_ << o_.grammar << ": ok, " << full.grammar().rule_count() << " rules\n";
    return kExitOk;
  }

  int complete() {
    ParseState st = session(load(o_.grammar), o_.start);
    for (const std::string& t : tokens()) {
      FeedResult r = feed_token(st, t);
      if (!r.accepted) {
        err_ << "token '" << t << "' at position " << st.position()
             << " cannot continue the sentence\n";
        return kExitNegative;
      }
      st = std::move(r.state);
    }
    std::vector<TokenOption> options = next_tokens(st);
    if (o_.format == "json") {
      out_ << options_to_json(options).dump(2) << '\n';
    } else if (o_.categories) {
      for (const TokenOption& opt : options) {
        out_ << opt.token << '\t' << to_string(opt.category) << '\n';
      }
    } else {
      std::string last;
      for (const TokenOption& opt : options) {
        if (opt.token != last) out_ << opt.token << '\n';
        last = opt.token;
      }
    }
    return kExitOk;
  }

  int parse() {
    ParseState st = session(load(o_.grammar), o_.start);
    std::vector<std::string> toks = tokens();
    std::optional<ParseState> end = parse_tokens(st, toks);
    bool complete = end && is_complete(*end);
    std::vector<SyntaxTree> trees;
    std::uint64_t count = 0;
    if (complete) {
      count = count_derivations(*end);
      if (o_.trees || o_.format == "json") trees = extract_trees(*end);
    }
    if (o_.format == "json") {
      nlohmann::json j = {{"tokens", toks}, {"complete", complete},
                          {"derivations", count}};
      nlohmann::json arr = nlohmann::json::array();
      for (const SyntaxTree& t : trees) arr.push_back(tree_to_json(t));
      j["trees"] = arr;
      out_ << j.dump(2) << '\n';
    } else if (complete) {
      out_ << "complete: " << count << (count == 1 ? " derivation\n" : " derivations\n");
      for (std::size_t i = 0; i < trees.size(); ++i) {
        out_ << "tree " << i + 1 << ":\n" << tree_to_text(trees[i]);
      }
    } else if (end) {
      out_ << "incomplete\n";
    } else {
      out_ << "rejected\n";
    }
    return complete ? kExitOk : kExitNegative;
  }

  int generate_cmd() {
    Grammar g = load(o_.grammar);
    std::uint64_t sentences = 0, derivations = 0;
    codeco::generate_counts(g, start_of(g, o_.start), gen_options(),
                            [&](const Sentence& s, std::uint64_t n) {
                              ++sentences;
                              derivations += n;
                              for (std::uint64_t i = 0; i < n; ++i) {
                                out_ << join_tokens(s) << '\n';
                              }
                            });
    err_ << sentences << " sentences, " << derivations << " derivations\n";
    return kExitOk;
  }

  int check_ambiguity_cmd() {
    Grammar g = load(o_.grammar);
    GenerationReport r = check_ambiguity(g, start_of(g, o_.start), gen_options());
    out_ << "bound: " << r.bound << "\nsentences: " << r.sentence_count
         << "\nderivations: " << r.derivation_count
         << "\nduplicates: " << r.duplicate_groups.size() << '\n';
    for (const auto& [s, n] : r.duplicate_groups) {
      out_ << n << '\t' << join_tokens(s) << '\n';
    }
    return r.duplicate_groups.empty() ? kExitOk : kExitNegative;
  }

  int check_subset_cmd() {
    Grammar a = load(o_.grammar);
    Grammar b = load(o_.other_grammar);
    SubsetReport r = check_subset(a, b, start_of(a, o_.start),
                                  start_of(b, o_.other_start), gen_options());
    out_ << "bound: " << r.bound << "\nchecked: " << r.checked_count
         << "\ncounterexamples: " << r.counterexamples.size() << '\n';
    for (const Sentence& s : r.counterexamples) out_ << join_tokens(s) << '\n';
    return r.counterexamples.empty() ? kExitOk : kExitNegative;
  }

  int serve_cmd() {
    ServiceOptions so;
    so.session_ttl = std::chrono::minutes(o_.ttl_minutes);
    Service service(so);
    try {
      service.load_directory(o_.grammar);
    } catch (const Error& e) {
      err_ << e.what() << '\n';
      return kExitUsage;
    }
    HttpFrontEnd http(service);
    int port = http.bind(o_.host, o_.port);
    if (port < 0) {
      err_ << "cannot listen on " << o_.host << ':' << o_.port << '\n';
      return kExitUsage;
    }
    err_ << "listening on http://" << o_.host << ':' << port << '\n';
    http.run();
    return kExitOk;
  }

  int oracle_cmd() {
    Grammar g = load(o_.grammar);
    OracleConfig cfg;
    cfg.max_tokens = o_.max_tokens;
    cfg.expansion_budget = o_.budget;
    std::string start = start_of(g, o_.start);
    if (o_.continuations) {
      for (const std::string& t : continuations_naive(g, start, tokens(), cfg)) {
        out_ << t << '\n';
      }
      return kExitOk;
    }
    for (const auto& [s, n] : enumerate_naive(g, start, cfg)) {
      out_ << n << '\t' << join_tokens(s) << '\n';
    }
    return kExitOk;
  }

 private:
  GrammarParse read_or_exit(const std::string& path) {
    std::string text;
    try {
      text = read_file(path);
    } catch (const Error& e) {
      err_ << e.what() << '\n';
      throw Exit{kExitUsage};
    }
    GrammarParse syntax = read_grammar(text);
    if (!syntax.ok()) {
      print_diagnostics(syntax.diagnostics(), path);
      throw Exit{kExitUsage};
    }
    return syntax;
  }

  Grammar load(const std::string& path) {
    read_or_exit(path);
    GrammarParse full = parse_grammar(read_file(path));
    if (!full.ok()) {
      print_diagnostics(full.diagnostics(), path);
      throw Exit{kExitUsage};
    }
    return full.grammar();
  }

  void print_diagnostics(const std::vector<ParseDiagnostic>& ds,
                         const std::string& path) {
    for (const ParseDiagnostic& d : ds) err_ << format_diagnostic(d, path) << '\n';
  }

  std::string start_of(const Grammar& g, const std::string& override_start) {
    return override_start.empty() ? g.start() : override_start;
  }

  ParseState session(const Grammar& g, const std::string& override_start) {
    try {
      return new_session(g, start_of(g, override_start));
    } catch (const Error& e) {
      err_ << e.what() << '\n';
      throw Exit{kExitUsage};
    }
  }

  std::vector<std::string> tokens() {
    std::vector<std::string> out = o_.tokens;
    if (o_.read_stdin) {
      std::copy(std::istream_iterator<std::string>(in_),
                std::istream_iterator<std::string>(), std::back_inserter(out));
      o_.read_stdin = false;
      o_.tokens = out;
    }
    return out;
  }

  GenerateOptions gen_options() const {
    GenerateOptions g;
    g.max_tokens = o_.max_tokens;
    g.budget = o_.budget;
    return g;
  }

  Options& o_;
  std::istream& in_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in,
            std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Codeco grammar toolkit", "codeco"};
  app.require_subcommand(1);
  app.add_option("--start", o.start, "start category (default: the grammar's)");

  auto tokens_opts = [&](CLI::App* cmd) {
    cmd->add_option("tokens", o.tokens, "tokens of the partial sentence");
    cmd->add_flag("--stdin", o.read_stdin, "read whitespace-separated tokens from stdin");
  };
  auto bound_opts = [&](CLI::App* cmd) {
    cmd->add_option("--max-tokens", o.max_tokens, "sentence length bound")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--budget", o.budget, "maximum number of chart extensions")
        ->check(CLI::PositiveNumber);
  };

  auto* validate = app.add_subcommand("validate", "check a grammar file");
  validate->add_option("grammar", o.grammar)->required();

  auto* complete = app.add_subcommand("complete", "list possible next tokens");
  complete->add_option("grammar", o.grammar)->required();
  tokens_opts(complete);
  complete->add_flag("--categories", o.categories, "print token and category per option");
  complete->add_option("--format", o.format)->check(CLI::IsMember({"text", "json"}));

  auto* parse = app.add_subcommand("parse", "parse a sentence");
  parse->add_option("grammar", o.grammar)->required();
  tokens_opts(parse);
  parse->add_flag("--trees", o.trees, "print syntax trees");
  parse->add_option("--format", o.format)->check(CLI::IsMember({"text", "json"}));

  auto* generate = app.add_subcommand("generate", "print every sentence up to a bound");
  generate->add_option("grammar", o.grammar)->required();
  bound_opts(generate);

  auto* ambiguity = app.add_subcommand("check-ambiguity", "find ambiguous sentences");
  ambiguity->add_option("grammar", o.grammar)->required();
  bound_opts(ambiguity);

  auto* subset = app.add_subcommand(
      "check-subset", "find sentences of the first grammar the second rejects");
  subset->add_option("grammar_a", o.grammar)->required();
  subset->add_option("grammar_b", o.other_grammar)->required();
  subset->add_option("--start-b", o.other_start, "start category of the second grammar");
  bound_opts(subset);

  auto* serve = app.add_subcommand("serve", "run the completion service");
  serve->add_option("grammar_dir", o.grammar)->required();
  serve->add_option("--port", o.port)->check(CLI::Range(1, 65535));
  serve->add_option("--host", o.host);
  serve->add_option("--session-ttl", o.ttl_minutes, "idle minutes before a session expires")
      ->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle", "brute-force reference enumerator");
  oracle->group("");
  oracle->add_option("grammar", o.grammar)->required();
  tokens_opts(oracle);
  oracle->add_flag("--continuations", o.continuations, "print continuations of the tokens");
  bound_opts(oracle);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Commands c(o, in, out, err);
  try {
    if (*validate) return c.validate();
    if (*complete) return c.complete();
    if (*parse) return c.parse();
    if (*generate) return c.generate_cmd();
    if (*ambiguity) return c.check_ambiguity_cmd();
    if (*subset) return c.check_subset_cmd();
    if (*serve) return c.serve_cmd();
    if (*oracle) return c.oracle_cmd();
  } catch (const Exit& e) {
    return e.status;
  } catch (const BudgetExceeded& e) {
    err << e.what() << '\n';
    return kExitBudget;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace codeco
