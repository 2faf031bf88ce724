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

// Session-based completion service.
//
// Service holds the grammars and sessions and answers requests as
// (status, JSON body) pairs; serve() binds it to HTTP routes:
//
//   POST   /sessions                 {"grammar_id": "demo"}
//   POST   /sessions/{id}/tokens     {"token": "every"}
//   DELETE /sessions/{id}/tokens/last
//   GET    /sessions/{id}/tree
//   GET    /grammars
//   GET    /health

#ifndef CODECO_SERVICE_HPP
#define CODECO_SERVICE_HPP

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "codeco/parser.hpp"
#include "json.hpp"

namespace codeco {

struct Reply {
  int status = 200;
  nlohmann::json body;
};

struct ServiceOptions {
  std::chrono::seconds session_ttl{30 * 60};
  // Injectable for tests.
  std::function<std::chrono::steady_clock::time_point()> now =
      std::chrono::steady_clock::now;
};

class Service {
 public:
  explicit Service(ServiceOptions options = {});

  // Loads every *.codeco file in dir; the grammar id is the file stem.
  // Throws Error if the directory is missing or a grammar is invalid.
  void load_directory(const std::string& dir);
  void add_grammar(const std::string& id, Grammar g);

  Reply create_session(const nlohmann::json& request);
  Reply push_token(const std::string& session_id, const nlohmann::json& request);
  Reply pop_token(const std::string& session_id);
  Reply get_tree(const std::string& session_id);
  Reply list_grammars() const;
  Reply health() const;

  // Drops sessions idle for longer than the ttl.
  void evict_expired();
  std::size_t session_count() const;

 private:
  struct Session {
    std::mutex mu;
    std::string grammar_id;
    std::vector<ParseState> states;  // states[k] has k tokens
    std::chrono::steady_clock::time_point last_access;
  };

  struct Lookup {
    std::shared_ptr<Session> session;
    Reply error;
  };
  Lookup find(const std::string& id);
  static nlohmann::json state_view(const ParseState& st);

  ServiceOptions options_;
  std::map<std::string, std::shared_ptr<const ParserGrammar>> grammars_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
  std::unordered_set<std::string> expired_;
};

// HTTP binding of a Service.  Also runs a periodic eviction sweep while
// listening.
class HttpFrontEnd {
 public:
  explicit HttpFrontEnd(Service& service);
  ~HttpFrontEnd();
  HttpFrontEnd(const HttpFrontEnd&) = delete;
  HttpFrontEnd& operator=(const HttpFrontEnd&) = delete;

  // Port 0 picks a free port.  Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace codeco

#endif  // CODECO_SERVICE_HPP
