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

// JSON and text renderings shared by the command-line tool and the HTTP
// service.  The JSON shapes are the service wire format:
//
//   option      {"token": "man", "category": "noun(text:man)",
//                "features": {"text": "man"}}
//   antecedent  {"position": 2, "features": {"type": "noun", "noun": "man"}}
//   tree        {"kind": "node", "label": "np", "start": 0, "end": 2,
//                "rule": 3, "scope_closing": false, "closed_scopes": [],
//                "children": [...]}

#ifndef CODECO_WIRE_HPP
#define CODECO_WIRE_HPP

#include <string>
#include <vector>

#include "codeco/parser.hpp"
#include "json.hpp"

namespace codeco {

nlohmann::json features_to_json(const FeatureStructure& fs);
nlohmann::json option_to_json(const TokenOption& o);
nlohmann::json options_to_json(const std::vector<TokenOption>& options);
nlohmann::json antecedent_to_json(const Antecedent& a);
nlohmann::json antecedents_to_json(const std::vector<Antecedent>& ants);
nlohmann::json tree_to_json(const SyntaxTree& t);

// Indented outline, one node per line.
std::string tree_to_text(const SyntaxTree& t);

}  // namespace codeco

#endif  // CODECO_WIRE_HPP
