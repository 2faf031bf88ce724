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

#include "codeco/wire.hpp"

namespace codeco {

using nlohmann::json;

json features_to_json(const FeatureStructure& fs) {
  json out = json::object();
  for (const auto& [name, value] : fs) out[name] = to_string(value);
  return out;
}

json option_to_json(const TokenOption& o) {
  return {{"token", o.token},
          {"category", to_string(o.category)},
          {"features", features_to_json(o.features)}};
}

json options_to_json(const std::vector<TokenOption>& options) {
  json out = json::array();
  for (const TokenOption& o : options) out.push_back(option_to_json(o));
  return out;
}

json antecedent_to_json(const Antecedent& a) {
  return {{"position", a.position}, {"features", features_to_json(a.features)}};
}

json antecedents_to_json(const std::vector<Antecedent>& ants) {
  json out = json::array();
  for (const Antecedent& a : ants) out.push_back(antecedent_to_json(a));
  return out;
}

namespace {

const char* kind_name(SyntaxTree::Kind k) {
  switch (k) {
    case SyntaxTree::Kind::Node:
      return "node";
    case SyntaxTree::Kind::Token:
      return "token";
    case SyntaxTree::Kind::FwdRef:
      return "fwd_ref";
    case SyntaxTree::Kind::BwdRef:
      return "bwd_ref";
    case SyntaxTree::Kind::ScopeOpener:
      return "scope_opener";
  }
  return "";
}

void text_lines(const SyntaxTree& t, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  switch (t.kind) {
    case SyntaxTree::Kind::Node:
      out += to_string(t.label);
      if (t.scope_closing) out += " ~";
      out += " [" + std::to_string(t.start) + "," + std::to_string(t.end) + ")";
      for (const auto& [from, to] : t.closed_scopes) {
        out += " closes [" + std::to_string(from) + "," + std::to_string(to) + ")";
      }
      break;
    case SyntaxTree::Kind::Token:
      out += t.label.token();
      break;
    case SyntaxTree::Kind::FwdRef:
    case SyntaxTree::Kind::BwdRef:
      out += to_string(t.label);
      if (t.antecedent) {
        out += (t.kind == SyntaxTree::Kind::FwdRef ? " @" : " -> ") +
               std::to_string(t.antecedent->position);
      }
      break;
    case SyntaxTree::Kind::ScopeOpener:
      out += "//";
      break;
  }
  out += '\n';
  for (const SyntaxTree& c : t.children) text_lines(c, depth + 1, out);
}

}  // namespace

json tree_to_json(const SyntaxTree& t) {
  json out = {{"kind", kind_name(t.kind)},
              {"start", t.start},
              {"end", t.end}};
  if (t.kind == SyntaxTree::Kind::Token) {
    out["token"] = t.label.token();
  } else {
    out["label"] = to_string(t.label);
  }
  if (t.label.is_named()) {
    out["category"] = t.label.name();
    out["features"] = features_to_json(t.label.features());
  }
  if (t.kind == SyntaxTree::Kind::Node) {
    out["rule"] = t.rule_index ? json(*t.rule_index) : json(nullptr);
    out["lexical"] = t.lexical;
    out["scope_closing"] = t.scope_closing;
    json scopes = json::array();
    for (const auto& [from, to] : t.closed_scopes) scopes.push_back({from, to});
    out["closed_scopes"] = scopes;
    json children = json::array();
    for (const SyntaxTree& c : t.children) children.push_back(tree_to_json(c));
    out["children"] = children;
  }
  if (t.antecedent) out["antecedent"] = antecedent_to_json(*t.antecedent);
  return out;
}

std::string tree_to_text(const SyntaxTree& t) {
  std::string out;
  text_lines(t, 0, out);
  return out;
}

}  // namespace codeco
