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

// Lexical classes of the grammar notation, shared by the reader and every
// printer so that printed atoms and tokens always read back unchanged.

#ifndef CODECO_TEXT_HPP
#define CODECO_TEXT_HPP

#include <string>
#include <string_view>

namespace codeco::text {

// Bytes >= 0x80 count as letters so that UTF-8 words need no quoting.
inline bool is_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c >= 0x80;
}
inline bool is_ident_char(unsigned char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9') || c == '-';
}
// Characters allowed in unquoted atoms and terminal tokens.
inline bool is_word_char(unsigned char c) {
  return is_ident_char(c) || c == '+' || c == '.';
}

inline bool is_identifier(std::string_view s) {
  if (s.empty() || !is_ident_start(static_cast<unsigned char>(s[0])))
    return false;
  for (char c : s) {
    if (!is_ident_char(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

inline bool is_word(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!is_word_char(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

inline std::string quote(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    switch (c) {
      case '\'': out += "\\'"; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '\'';
  return out;
}

inline std::string quote_atom(std::string_view s) {
  return is_word(s) ? std::string(s) : quote(s);
}

inline std::string quote_terminal(std::string_view s) {
  return "[" + quote_atom(s) + "]";
}

}  // namespace codeco::text

#endif  // CODECO_TEXT_HPP
