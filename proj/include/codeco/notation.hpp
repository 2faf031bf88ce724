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

// Reader and writer for .codeco grammar files.
//
//   # comment
//   start: s
//   np => det(exist:+) noun(text:$N) >(type:noun, noun:$N)
//   det(exist:-) => // ['every']
//   vp(num:$Num) ~> v(num:$Num, type:tr) np(case:acc) pp
//   x => .
//
// One rule per line.  `=>` is a normal rule and `~>` a scope-closing one.
// Terminals are written [token] or ['quoted token'], forward and backward
// references as >(...) and <(...), the scope opener as //, and an empty body
// as a single period.

#ifndef CODECO_NOTATION_HPP
#define CODECO_NOTATION_HPP

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "codeco/core.hpp"

namespace codeco {

struct SourceSpan {
  int line = 1;
  int column = 1;
  int length = 0;
  bool operator==(const SourceSpan&) const = default;
};

enum class Severity { Error, Warning };

struct ParseDiagnostic {
  SourceSpan span;
  std::string message;
  Severity severity = Severity::Error;
};

// "path:line:col: error: message"
std::string format_diagnostic(const ParseDiagnostic& d,
                              std::string_view source_name = {});

struct GrammarParse {
  std::variant<Grammar, std::vector<ParseDiagnostic>> result;

  bool ok() const { return std::holds_alternative<Grammar>(result); }
  const Grammar& grammar() const { return std::get<Grammar>(result); }
  const std::vector<ParseDiagnostic>& diagnostics() const {
    return std::get<std::vector<ParseDiagnostic>>(result);
  }
};

// Syntax only: the returned grammar may still violate the invariants that
// validate_grammar() checks.
GrammarParse read_grammar(std::string_view text);

// Syntax plus validation.  Validation failures are reported as diagnostics
// spanning the offending rule's line.
GrammarParse parse_grammar(std::string_view text);

std::string serialize_grammar(const Grammar& g);

// Reads a file; throws Error if it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace codeco

#endif  // CODECO_NOTATION_HPP
