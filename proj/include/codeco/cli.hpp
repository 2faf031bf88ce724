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

// Command-line front end.
//
//   codeco validate GRAMMAR
//   codeco complete GRAMMAR [TOKEN...]
//   codeco parse GRAMMAR [TOKEN...] [--trees] [--format text|json]
//   codeco generate GRAMMAR [--max-tokens N]
//   codeco check-ambiguity GRAMMAR [--max-tokens N]
//   codeco check-subset GRAMMAR_A GRAMMAR_B [--max-tokens N]
//   codeco serve GRAMMAR_DIR [--port P]
//
// Exit status: 0 success, 1 negative result, 2 usage or input error,
// 3 budget exceeded.

#ifndef CODECO_CLI_HPP
#define CODECO_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace codeco {

enum ExitStatus : int {
  kExitOk = 0,
  kExitNegative = 1,
  kExitUsage = 2,
  kExitBudget = 3,
};

// args excludes the program name.  `in` is read for --stdin.
int run_cli(const std::vector<std::string>& args, std::istream& in,
            std::ostream& out, std::ostream& err);

}  // namespace codeco

#endif  // CODECO_CLI_HPP
