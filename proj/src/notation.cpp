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

#include "codeco/notation.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "codeco/text.hpp"

namespace codeco {

namespace {

enum class Lex {
  Word,     // bare identifier or atom
  Quoted,   // '...'
  Var,      // $Name
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Colon,
  Arrow,        // =>
  ScopeArrow,   // ~>
  ScopeOpener,  // //
  Fwd,          // >
  Bwd,          // <
};

struct Lexeme {
  Lex kind;
  std::string text;
  int column;  // 1-based
  int length;
};

struct SyntaxError {
  int column;
  int length;
  std::string message;
};

// Splits one line (comments already removed by the caller) into lexemes.
std::vector<Lexeme> lex_line(std::string_view line, std::vector<SyntaxError>& errors) {
  std::vector<Lexeme> out;
  std::size_t i = 0;
  auto col = [](std::size_t pos) { return static_cast<int>(pos) + 1; };
  while (i < line.size()) {
    unsigned char c = static_cast<unsigned char>(line[i]);
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    std::size_t start = i;
    auto single = [&](Lex kind) {
      out.push_back({kind, std::string(1, line[i]), col(i), 1});
      ++i;
    };
    switch (c) {
      case '(': single(Lex::LParen); continue;
      case ')': single(Lex::RParen); continue;
      case '[': single(Lex::LBracket); continue;
      case ']': single(Lex::RBracket); continue;
      case ',': single(Lex::Comma); continue;
      case ':': single(Lex::Colon); continue;
      case '>': single(Lex::Fwd); continue;
      case '<': single(Lex::Bwd); continue;
      default: break;
    }
    if ((c == '=' || c == '~') && i + 1 < line.size() && line[i + 1] == '>') {
      out.push_back({c == '=' ? Lex::Arrow : Lex::ScopeArrow,
                     std::string(line.substr(i, 2)), col(i), 2});
      i += 2;
      continue;
    }
    if (c == '/' && i + 1 < line.size() && line[i + 1] == '/') {
      out.push_back({Lex::ScopeOpener, "//", col(i), 2});
      i += 2;
      continue;
    }
    if (c == '$') {
      ++i;
      while (i < line.size() &&
             text::is_ident_char(static_cast<unsigned char>(line[i]))) {
        ++i;
      }
      std::string name(line.substr(start + 1, i - start - 1));
      if (!text::is_identifier(name)) {
        errors.push_back({col(start), static_cast<int>(i - start),
                          "malformed variable name"});
        continue;
      }
      out.push_back({Lex::Var, name, col(start), static_cast<int>(i - start)});
      continue;
    }
    if (c == '\'') {
      std::string value;
      ++i;
      bool closed = false;
      while (i < line.size()) {
        char d = line[i];
        if (d == '\'') {
          closed = true;
          ++i;
          break;
        }
        if (d == '\\' && i + 1 < line.size()) {
          char e = line[i + 1];
          switch (e) {
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            case 'r': value += '\r'; break;
            case '\\': value += '\\'; break;
            case '\'': value += '\''; break;
            default:
              errors.push_back({col(i), 2, "unknown escape sequence"});
              value += e;
          }
          i += 2;
          continue;
        }
        value += d;
        ++i;
      }
      if (!closed) {
        errors.push_back({col(start), static_cast<int>(line.size() - start),
                          "unterminated quoted string"});
        break;
      }
      out.push_back(
          {Lex::Quoted, std::move(value), col(start), static_cast<int>(i - start)});
      continue;
    }
    if (text::is_word_char(c)) {
      while (i < line.size() &&
             text::is_word_char(static_cast<unsigned char>(line[i]))) {
        ++i;
      }
      out.push_back({Lex::Word, std::string(line.substr(start, i - start)),
                     col(start), static_cast<int>(i - start)});
      continue;
    }
    errors.push_back({col(i), 1, std::string("unexpected character '") +
                                     static_cast<char>(c) + "'"});
    ++i;
  }
  return out;
}

// Position of a '#' that starts a comment, i.e. one outside quotes.
std::size_t comment_start(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '\\') {
        ++i;
      } else if (c == '\'') {
        quoted = false;
      }
    } else if (c == '\'') {
      quoted = true;
    } else if (c == '#') {
      return i;
    }
  }
  return line.size();
}

class LineParser {
 public:
  LineParser(const std::vector<Lexeme>& lexemes, int line_length)
      : lx_(lexemes), line_length_(line_length) {}

  bool at_end() const { return pos_ >= lx_.size(); }
  const Lexeme* peek(std::size_t ahead = 0) const {
    return pos_ + ahead < lx_.size() ? &lx_[pos_ + ahead] : nullptr;
  }
  const Lexeme& next() { return lx_[pos_++]; }

  [[noreturn]] void fail(std::string message) const {
    if (const Lexeme* l = peek()) throw SyntaxError{l->column, l->length, std::move(message)};
    throw SyntaxError{line_length_ + 1, 0, std::move(message)};
  }

  const Lexeme& expect(Lex kind, const char* what) {
    if (at_end() || peek()->kind != kind) fail(std::string("expected ") + what);
    return next();
  }

  FeatureValue value() {
    if (at_end()) fail("expected feature value");
    const Lexeme& l = next();
    switch (l.kind) {
      case Lex::Word:
      case Lex::Quoted:
        if (l.text.empty()) {
          throw SyntaxError{l.column, l.length, "atoms must not be empty"};
        }
        return FeatureValue::atom(l.text);
      case Lex::Var: {
        auto [it, inserted] =
            vars_.emplace(l.text, static_cast<VarId>(vars_.size()));
        return FeatureValue::var(it->second, l.text);
      }
      default:
        throw SyntaxError{l.column, l.length, "expected feature value"};
    }
  }

  FeatureStructure features() {
    FeatureStructure fs;
    expect(Lex::LParen, "'('");
    if (peek() && peek()->kind == Lex::RParen) {
      next();
      return fs;
    }
    while (true) {
      const Lexeme& name = expect(Lex::Word, "feature name");
      if (!text::is_identifier(name.text)) {
        throw SyntaxError{name.column, name.length,
                          "feature name must be an identifier"};
      }
      if (fs.find(name.text) != nullptr) {
        throw SyntaxError{name.column, name.length,
                          "feature '" + name.text + "' appears twice"};
      }
      expect(Lex::Colon, "':'");
      FeatureValue v = value();
      fs.push_back(name.text, std::move(v));
      if (at_end()) fail("expected ',' or ')'");
      const Lexeme& sep = next();
      if (sep.kind == Lex::RParen) break;
      if (sep.kind != Lex::Comma) {
        throw SyntaxError{sep.column, sep.length, "expected ',' or ')'"};
      }
    }
    return fs;
  }

  bool starts_category() const {
    if (at_end()) return false;
    switch (peek()->kind) {
      case Lex::Word:
      case Lex::LBracket:
      case Lex::Fwd:
      case Lex::Bwd:
      case Lex::ScopeOpener:
        return true;
      default:
        return false;
    }
  }

  Category category() {
    if (at_end()) fail("expected category");
    const Lexeme& l = next();
    auto optional_features = [&] {
      if (peek() && peek()->kind == Lex::LParen) return features();
      return FeatureStructure{};
    };
    switch (l.kind) {
      case Lex::Word:
        if (!text::is_identifier(l.text)) {
          throw SyntaxError{l.column, l.length,
                            "'" + l.text + "' is not a category name"};
        }
        return Category::nonterminal(l.text, optional_features());
      case Lex::Fwd:
        return Category::fwd_ref(optional_features());
      case Lex::Bwd:
        return Category::bwd_ref(optional_features());
      case Lex::ScopeOpener:
        return Category::scope_opener();
      case Lex::LBracket: {
        if (at_end()) fail("expected token");
        const Lexeme& t = next();
        if (t.kind != Lex::Word && t.kind != Lex::Quoted) {
          throw SyntaxError{t.column, t.length, "expected token"};
        }
        if (t.text.empty()) {
          throw SyntaxError{t.column, t.length, "terminal token must not be empty"};
        }
        expect(Lex::RBracket, "']' (one token per terminal)");
        return Category::terminal(t.text);
      }
      default:
        throw SyntaxError{l.column, l.length, "expected category"};
    }
  }

  Rule rule() {
    Rule r;
    r.head = category();
    if (at_end()) fail("expected '=>' or '~>'");
    const Lexeme& arrow = next();
    if (arrow.kind != Lex::Arrow && arrow.kind != Lex::ScopeArrow) {
      throw SyntaxError{arrow.column, arrow.length, "expected '=>' or '~>'"};
    }
    r.scope_closing = arrow.kind == Lex::ScopeArrow;
    if (peek() && peek()->kind == Lex::Word && peek()->text == ".") {
      next();
      if (!at_end()) fail("nothing may follow the empty-body marker '.'");
      return r;
    }
    if (at_end()) fail("empty body must be written as '.'");
    while (!at_end()) {
      if (!starts_category()) fail("expected category");
      r.body.push_back(category());
    }
    return r;
  }

 private:
  const std::vector<Lexeme>& lx_;
  int line_length_;
  std::size_t pos_ = 0;
  std::map<std::string, VarId> vars_;
};

struct RawGrammar {
  std::optional<std::string> start;
  int start_line = 0;
  int start_length = 0;
  std::vector<Rule> rules;
  std::vector<int> rule_lines;
  std::vector<int> rule_lengths;
};

std::variant<RawGrammar, std::vector<ParseDiagnostic>> read_raw(std::string_view text) {
  RawGrammar raw;
  std::vector<ParseDiagnostic> diags;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    ++line_no;
    pos = nl + 1;
    line = line.substr(0, comment_start(line));

    std::vector<SyntaxError> lex_errors;
    std::vector<Lexeme> lexemes = lex_line(line, lex_errors);
    auto report = [&](const SyntaxError& e) {
      diags.push_back({{line_no, e.column, e.length}, e.message, Severity::Error});
    };
    if (!lex_errors.empty()) {
      for (const auto& e : lex_errors) report(e);
      continue;
    }
    if (lexemes.empty()) continue;

    if (lexemes.size() >= 2 && lexemes[0].kind == Lex::Word &&
        lexemes[0].text == "start" && lexemes[1].kind == Lex::Colon) {
      if (lexemes.size() != 3 || lexemes[2].kind != Lex::Word ||
          !text::is_identifier(lexemes[2].text)) {
        const Lexeme& at = lexemes.size() > 2 ? lexemes[2] : lexemes[1];
        report({at.column, at.length, "expected 'start: <category name>'"});
        continue;
      }
      if (raw.start) {
        report({lexemes[0].column, lexemes[0].length,
                "duplicate start declaration"});
        continue;
      }
      raw.start = lexemes[2].text;
      raw.start_line = line_no;
      raw.start_length = static_cast<int>(line.size());
      continue;
    }

    LineParser p(lexemes, static_cast<int>(line.size()));
    try {
      raw.rules.push_back(p.rule());
      raw.rule_lines.push_back(line_no);
      raw.rule_lengths.push_back(static_cast<int>(line.size()));
    } catch (const SyntaxError& e) {
      report(e);
    }
  }
  if (!diags.empty()) return diags;
  return raw;
}

}  // namespace

std::string format_diagnostic(const ParseDiagnostic& d,
                              std::string_view source_name) {
  std::ostringstream out;
  if (!source_name.empty()) out << source_name << ':';
  out << d.span.line << ':' << d.span.column << ": "
      << (d.severity == Severity::Error ? "error" : "warning") << ": "
      << d.message;
  return out.str();
}

GrammarParse read_grammar(std::string_view text) {
  auto raw = read_raw(text);
  if (auto* diags = std::get_if<std::vector<ParseDiagnostic>>(&raw)) {
    return {std::move(*diags)};
  }
  RawGrammar& g = std::get<RawGrammar>(raw);
  std::string start;
  if (g.start) {
    start = *g.start;
  } else if (!g.rules.empty() && g.rules.front().head.is_named()) {
    start = g.rules.front().head.name();
  } else if (g.rules.empty()) {
    return {std::vector<ParseDiagnostic>{
        {{1, 1, 0}, "grammar declares neither a start category nor any rule",
         Severity::Error}}};
  }
  return {Grammar::from_rules(std::move(start), std::move(g.rules))};
}

GrammarParse parse_grammar(std::string_view text) {
  auto raw = read_raw(text);
  if (auto* diags = std::get_if<std::vector<ParseDiagnostic>>(&raw)) {
    return {std::move(*diags)};
  }
  const RawGrammar& rg = std::get<RawGrammar>(raw);
  GrammarParse parsed = read_grammar(text);
  if (!parsed.ok()) return parsed;
  const Grammar& g = parsed.grammar();
  std::vector<Diagnostic> problems = validate_grammar(g);
  if (problems.empty()) return parsed;

  // Map validator indices (rules() then lexical_rules()) back to lines.
  std::set<std::string> preterminals;
  for (const Rule& r : g.lexical_rules()) preterminals.insert(r.head.name());
  std::vector<std::size_t> normal_src, lexical_src;
  for (std::size_t i = 0; i < rg.rules.size(); ++i) {
    const Rule& r = rg.rules[i];
    bool lexical = r.head.is_named() && preterminals.contains(r.head.name());
    (lexical ? lexical_src : normal_src).push_back(i);
  }

  std::vector<ParseDiagnostic> diags;
  for (const Diagnostic& d : problems) {
    SourceSpan span{1, 1, 0};
    if (d.rule_index) {
      std::size_t idx = *d.rule_index;
      std::size_t src = idx < normal_src.size()
                            ? normal_src[idx]
                            : lexical_src[idx - normal_src.size()];
      span = {rg.rule_lines[src], 1, rg.rule_lengths[src]};
    } else if (rg.start) {
      span = {rg.start_line, 1, rg.start_length};
    }
    diags.push_back({span, d.message, Severity::Error});
  }
  return {std::move(diags)};
}

namespace {

std::string serialize_rule(const Rule& rule) {
  // Give every variable id a distinct printable name.
  std::unordered_map<VarId, std::string> names;
  std::set<std::string> used;
  auto assign = [&](const Category& c) {
    for (const auto& [f, v] : c.features()) {
      if (!v.is_var() || names.contains(v.variable().id)) continue;
      std::string name = v.variable().name;
      if (!text::is_identifier(name) || used.contains(name)) {
        int k = 0;
        do {
          name = "_" + std::to_string(k++);
        } while (used.contains(name));
      }
      used.insert(name);
      names.emplace(v.variable().id, name);
    }
  };
  assign(rule.head);
  for (const Category& c : rule.body) assign(c);

  auto rename = [&](Category c) {
    for (auto& [f, v] : c.features().entries()) {
      if (v.is_var()) v = FeatureValue::var(v.variable().id, names.at(v.variable().id));
    }
    return c;
  };
  Rule printable = rule;
  printable.head = rename(rule.head);
  for (Category& c : printable.body) c = rename(c);
  return to_string(printable);
}

}  // namespace

std::string serialize_grammar(const Grammar& g) {
  std::string out = "start: " + g.start() + "\n";
  for (const Rule& r : g.rules()) out += serialize_rule(r) + "\n";
  for (const Rule& r : g.lexical_rules()) out += serialize_rule(r) + "\n";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace codeco
