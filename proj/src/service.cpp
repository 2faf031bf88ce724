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

#include "codeco/service.hpp"

#include <algorithm>
#include <condition_variable>
#include <filesystem>
#include <random>
#include <thread>

#include "codeco/notation.hpp"
#include "codeco/wire.hpp"
#include "httplib.h"

namespace codeco {

using nlohmann::json;

namespace {

Reply error_reply(int status, std::string message) {
  return {status, {{"error", std::move(message)}}};
}

std::string new_session_id() {
  static std::mutex mu;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mu);
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx",
                static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

}  // namespace

Service::Service(ServiceOptions options) : options_(std::move(options)) {}

void Service::load_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error("grammar directory '" + dir + "' does not exist");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".codeco") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& p : files) {
    GrammarParse parse = parse_grammar(read_file(p.string()));
    if (!parse.ok()) {
      throw Error(format_diagnostic(parse.diagnostics().front(), p.string()));
    }
    add_grammar(p.stem().string(), parse.grammar());
  }
}

void Service::add_grammar(const std::string& id, Grammar g) {
  std::lock_guard lock(mu_);
  grammars_[id] = std::make_shared<const ParserGrammar>(std::move(g));
}

json Service::state_view(const ParseState& st) {
  return {{"tokens", st.tokens()},
          {"options", options_to_json(next_tokens(st))},
          {"antecedents", antecedents_to_json(accessible_antecedents(st))},
          {"complete", is_complete(st)}};
}

Service::Lookup Service::find(const std::string& id) {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    if (expired_.contains(id)) return {nullptr, error_reply(410, "session expired")};
    return {nullptr, error_reply(404, "unknown session")};
  }
  auto now = options_.now();
  if (now - it->second->last_access > options_.session_ttl) {
    expired_.insert(id);
    sessions_.erase(it);
    return {nullptr, error_reply(410, "session expired")};
  }
  it->second->last_access = now;
  return {it->second, {}};
}

Reply Service::create_session(const json& request) {
  if (!request.is_object() || !request.contains("grammar_id") ||
      !request["grammar_id"].is_string()) {
    return error_reply(400, "expected {\"grammar_id\": string}");
  }
  std::string gid = request["grammar_id"];
  std::shared_ptr<const ParserGrammar> g;
  {
    std::lock_guard lock(mu_);
    auto it = grammars_.find(gid);
    if (it == grammars_.end()) return error_reply(404, "unknown grammar '" + gid + "'");
    g = it->second;
  }
  auto session = std::make_shared<Session>();
  session->grammar_id = gid;
  session->states.push_back(new_session(g, g->grammar().start()));
  session->last_access = options_.now();
  std::string id = new_session_id();
  json body = state_view(session->states.back());
  body["session_id"] = id;
  body["grammar_id"] = gid;
  std::lock_guard lock(mu_);
  sessions_.emplace(id, std::move(session));
  return {201, std::move(body)};
}

Reply Service::push_token(const std::string& session_id, const json& request) {
  if (!request.is_object() || !request.contains("token") ||
      !request["token"].is_string() || request["token"].get<std::string>().empty()) {
    return error_reply(400, "expected {\"token\": non-empty string}");
  }
  Lookup l = find(session_id);
  if (!l.session) return l.error;
  std::lock_guard lock(l.session->mu);
  std::string token = request["token"];
  FeedResult r = feed_token(l.session->states.back(), token);
  if (r.accepted) l.session->states.push_back(std::move(r.state));
  json body = state_view(l.session->states.back());
  body["accepted"] = r.accepted;
  body["token"] = token;
  return {200, std::move(body)};
}

Reply Service::pop_token(const std::string& session_id) {
  Lookup l = find(session_id);
  if (!l.session) return l.error;
  std::lock_guard lock(l.session->mu);
  if (l.session->states.size() == 1) return error_reply(409, "no token to remove");
  l.session->states.pop_back();
  return {200, state_view(l.session->states.back())};
}

Reply Service::get_tree(const std::string& session_id) {
  Lookup l = find(session_id);
  if (!l.session) return l.error;
  std::lock_guard lock(l.session->mu);
  const ParseState& st = l.session->states.back();
  json trees = json::array();
  for (const SyntaxTree& t : extract_trees(st)) trees.push_back(tree_to_json(t));
  return {200, {{"tokens", st.tokens()}, {"complete", is_complete(st)}, {"trees", trees}}};
}

Reply Service::list_grammars() const {
  std::lock_guard lock(mu_);
  json list = json::array();
  for (const auto& [id, g] : grammars_) {
    list.push_back({{"id", id},
                    {"start", g->grammar().start()},
                    {"rule_count", g->grammar().rule_count()}});
  }
  return {200, {{"grammars", list}}};
}

Reply Service::health() const { return {200, {{"status", "ok"}}}; }

void Service::evict_expired() {
  std::lock_guard lock(mu_);
  auto now = options_.now();
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (now - it->second->last_access > options_.session_ttl) {
      expired_.insert(it->first);
      it = sessions_.erase(it);
    } else {
      ++it;
    }
  }
}

std::size_t Service::session_count() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

// ---------------------------------------------------------------------------
// HTTP

struct HttpFrontEnd::Impl {
  Service& service;
  httplib::Server server;
  std::mutex mu;
  std::condition_variable cv;
  bool stopping = false;

  explicit Impl(Service& s) : service(s) {}
};

namespace {

void send(httplib::Response& res, const Reply& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

std::optional<json> body_json(const httplib::Request& req,
                              httplib::Response& res) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded()) {
    send(res, error_reply(400, "malformed JSON body"));
    return std::nullopt;
  }
  return body;
}

}  // namespace

HttpFrontEnd::HttpFrontEnd(Service& service)
    : impl_(std::make_unique<Impl>(service)) {
  Service& svc = service;
  auto& srv = impl_->server;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"}});
  srv.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
  srv.Get("/health", [&svc](const httplib::Request&, httplib::Response& res) {
    send(res, svc.health());
  });
  srv.Get("/grammars", [&svc](const httplib::Request&, httplib::Response& res) {
    send(res, svc.list_grammars());
  });
  srv.Post("/sessions", [&svc](const httplib::Request& req, httplib::Response& res) {
    if (auto body = body_json(req, res)) send(res, svc.create_session(*body));
  });
  srv.Post(R"(/sessions/([^/]+)/tokens)",
           [&svc](const httplib::Request& req, httplib::Response& res) {
             if (auto body = body_json(req, res)) {
               send(res, svc.push_token(req.matches[1], *body));
             }
           });
  srv.Delete(R"(/sessions/([^/]+)/tokens/last)",
             [&svc](const httplib::Request& req, httplib::Response& res) {
               send(res, svc.pop_token(req.matches[1]));
             });
  srv.Get(R"(/sessions/([^/]+)/tree)",
          [&svc](const httplib::Request& req, httplib::Response& res) {
            send(res, svc.get_tree(req.matches[1]));
          });
  srv.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          what = e.what();
        } catch (...) {
        }
        send(res, error_reply(500, what));
      });
  srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send(res, error_reply(res.status, "not found"));
  });
}

HttpFrontEnd::~HttpFrontEnd() { stop(); }

int HttpFrontEnd::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpFrontEnd::run() {
  std::thread sweeper([this] {
    std::unique_lock lock(impl_->mu);
    while (!impl_->cv.wait_for(lock, std::chrono::seconds(30),
                               [this] { return impl_->stopping; })) {
      impl_->service.evict_expired();
    }
  });
  impl_->server.listen_after_bind();
  {
    std::lock_guard lock(impl_->mu);
    impl_->stopping = true;
  }
  impl_->cv.notify_all();
  sweeper.join();
}

void HttpFrontEnd::stop() {
  impl_->server.stop();
}

}  // namespace codeco
