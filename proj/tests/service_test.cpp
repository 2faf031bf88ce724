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

#include <gtest/gtest.h>

#include <sstream>
#include <thread>

#include "codeco/cli.hpp"
#include "codeco/service.hpp"
#include "httplib.h"
#include "support/test_support.hpp"

namespace codeco {
namespace {

using nlohmann::json;

const std::vector<std::string> kPartial = {
    "every", "man", "protects", "a", "house", "from", "every", "enemy",
    "and", "does", "not", "destroy"};

std::set<std::string> option_tokens(const json& body) {
  std::set<std::string> out;
  for (const json& o : body["options"]) out.insert(o["token"].get<std::string>());
  return out;
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ServiceOptions opts;
    opts.session_ttl = std::chrono::minutes(30);
    opts.now = [this] { return clock_; };
    service_ = std::make_unique<Service>(opts);
    service_->load_directory(testing::source_path("grammars"));
  }

  std::string create(const std::string& grammar = "demo") {
    Reply r = service_->create_session({{"grammar_id", grammar}});
    EXPECT_EQ(r.status, 201);
    return r.body["session_id"];
  }

  Reply push(const std::string& id, const std::string& token) {
    return service_->push_token(id, {{"token", token}});
  }

  std::chrono::steady_clock::time_point clock_{};
  std::unique_ptr<Service> service_;
};

TEST_F(ServiceTest, CreateMatchesCli) {
  Reply r = service_->create_session({{"grammar_id", "demo"}});
  ASSERT_EQ(r.status, 201);
  EXPECT_FALSE(r.body["complete"].get<bool>());
  EXPECT_TRUE(r.body["antecedents"].empty());

  std::istringstream in;
  std::ostringstream out, err;
  run_cli({"complete", testing::source_path("grammars/demo.codeco"), "--format", "json"},
          in, out, err);
  EXPECT_EQ(r.body["options"], json::parse(out.str()));
}

TEST_F(ServiceTest, PartialSentenceContinuations) {
  std::string id = create();
  for (const std::string& t : kPartial) {
    Reply r = push(id, t);
    ASSERT_EQ(r.status, 200);
    ASSERT_TRUE(r.body["accepted"].get<bool>()) << t;
  }
  Reply r = push(id, "the");
  EXPECT_EQ(option_tokens(r.body), (std::set<std::string>{"man", "house"}));
  std::set<std::string> ants;
  for (const json& a : r.body["antecedents"]) ants.insert(a["features"]["noun"]);
  EXPECT_EQ(ants, (std::set<std::string>{"man", "house"}));

  Reply rejected = push(id, "enemy");
  EXPECT_EQ(rejected.status, 200);
  EXPECT_FALSE(rejected.body["accepted"].get<bool>());
  EXPECT_EQ(rejected.body["tokens"].size(), kPartial.size() + 1);
  EXPECT_EQ(option_tokens(rejected.body), (std::set<std::string>{"man", "house"}));

  push(id, "house");
  Reply tree = service_->get_tree(id);
  EXPECT_EQ(tree.status, 200);
  EXPECT_TRUE(tree.body["complete"].get<bool>());
  ASSERT_EQ(tree.body["trees"].size(), 1u);
  EXPECT_EQ(tree.body["trees"][0]["label"], "s");
}

TEST_F(ServiceTest, PopReplaysPreviousResponse) {
  std::string id = create();
  push(id, "every");
  Reply before = push(id, "man");
  Reply popped = service_->pop_token(id);
  EXPECT_EQ(popped.status, 200);
  EXPECT_EQ(popped.body["tokens"], json::array({"every"}));
  Reply again = push(id, "man");
  EXPECT_EQ(again.body.dump(), before.body.dump());

  service_->pop_token(id);
  service_->pop_token(id);
  Reply empty = service_->pop_token(id);
  EXPECT_EQ(empty.status, 409);
  EXPECT_EQ(service_->get_tree(id).body["tokens"], json::array());
}

TEST_F(ServiceTest, SessionsAreIsolated) {
  std::string a = create();
  std::string b = create();
  push(a, "every");
  Reply rb = push(b, "a");
  push(a, "man");
  EXPECT_EQ(service_->get_tree(b).body["tokens"], json::array({"a"}));
  EXPECT_EQ(push(b, "man").body["tokens"], json::array({"a", "man"}));
  EXPECT_EQ(rb.body["tokens"], json::array({"a"}));
}

TEST_F(ServiceTest, Errors) {
  EXPECT_EQ(service_->create_session({{"grammar_id", "nope"}}).status, 404);
  EXPECT_EQ(service_->create_session(json::object()).status, 400);
  EXPECT_EQ(service_->create_session(json::array()).status, 400);
  EXPECT_EQ(push("missing", "a").status, 404);
  std::string id = create();
  EXPECT_EQ(service_->push_token(id, {{"token", ""}}).status, 400);
  EXPECT_EQ(service_->push_token(id, {{"token", 3}}).status, 400);
  EXPECT_EQ(service_->pop_token("missing").status, 404);
  EXPECT_EQ(service_->get_tree("missing").status, 404);
}

TEST_F(ServiceTest, ExpiryAndEviction) {
  std::string a = create();
  std::string b = create();
  clock_ += std::chrono::minutes(20);
  EXPECT_EQ(push(a, "every").status, 200);  // touches a
  clock_ += std::chrono::minutes(20);
  EXPECT_EQ(push(a, "man").status, 200);
  EXPECT_EQ(push(b, "every").status, 410);
  EXPECT_EQ(push(b, "every").status, 410);
  clock_ += std::chrono::minutes(31);
  service_->evict_expired();
  EXPECT_EQ(service_->session_count(), 0u);
  EXPECT_EQ(service_->get_tree(a).status, 410);
}

TEST_F(ServiceTest, ListGrammars) {
  Reply r = service_->list_grammars();
  ASSERT_EQ(r.status, 200);
  std::map<std::string, int> counts;
  for (const json& g : r.body["grammars"]) counts[g["id"]] = g["rule_count"];
  EXPECT_EQ(counts.at("demo"), 29);
  EXPECT_TRUE(counts.contains("demo-core"));
  EXPECT_TRUE(counts.contains("planted-ambiguity"));
  EXPECT_EQ(service_->health().body["status"], "ok");
}

TEST(HttpFrontEnd, WireRoundTrip) {
  Service service;
  service.load_directory(testing::source_path("grammars"));
  HttpFrontEnd http(service);
  int port = http.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread server([&] { http.run(); });

  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/health");
  for (int i = 0; i < 50 && !health; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    health = client.Get("/health");
  }
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(json::parse(health->body)["status"], "ok");

  auto created = client.Post("/sessions", R"({"grammar_id": "demo"})", "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  std::string id = json::parse(created->body)["session_id"];

  std::string base = "/sessions/" + id;
  for (const std::string& t : kPartial) {
    auto r = client.Post(base + "/tokens", json{{"token", t}}.dump(), "application/json");
    ASSERT_TRUE(r);
    ASSERT_EQ(r->status, 200);
  }
  auto the = client.Post(base + "/tokens", R"({"token": "the"})", "application/json");
  ASSERT_TRUE(the);
  EXPECT_EQ(option_tokens(json::parse(the->body)), (std::set<std::string>{"man", "house"}));
  EXPECT_EQ(the->get_header_value("Access-Control-Allow-Origin"), "*");

  auto undo = client.Delete(base + "/tokens/last");
  ASSERT_TRUE(undo);
  EXPECT_EQ(undo->status, 200);
  EXPECT_TRUE(option_tokens(json::parse(undo->body)).contains("the"));

  auto tree = client.Get(base + "/tree");
  ASSERT_TRUE(tree);
  EXPECT_FALSE(json::parse(tree->body)["complete"].get<bool>());

  auto malformed = client.Post(base + "/tokens", "{not json", "application/json");
  ASSERT_TRUE(malformed);
  EXPECT_EQ(malformed->status, 400);
  auto unknown = client.Get("/sessions/zzz/tree");
  ASSERT_TRUE(unknown);
  EXPECT_EQ(unknown->status, 404);
  auto grammars = client.Get("/grammars");
  ASSERT_TRUE(grammars);
  EXPECT_GE(json::parse(grammars->body)["grammars"].size(), 4u);
  auto nowhere = client.Get("/nowhere");
  ASSERT_TRUE(nowhere);
  EXPECT_EQ(nowhere->status, 404);

  http.stop();
  server.join();
}

}  // namespace
}  // namespace codeco
