// Copyright 2026 The Balderdash Simulation Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <thread>

#include "core/agents.hpp"
#include "core/errors.hpp"
#include "test_support.hpp"

namespace balderdash {
namespace {

using testing::scripted;

std::vector<ChatMessage> user(const std::string& text) { return {{Role::kUser, text}}; }

TEST(PrepareMessages, FoldsSystemIntoUser) {
  const std::vector<ChatMessage> in{{Role::kSystem, "S"}, {Role::kUser, "U"}};
  const auto folded = prepare_messages(in, false);
  ASSERT_EQ(folded.size(), 1u);
  EXPECT_EQ(folded[0].role, Role::kUser);
  EXPECT_EQ(folded[0].content, "S\nU");
  EXPECT_EQ(prepare_messages(in, true).size(), 2u);
}

TEST(PrepareMessages, NeverTwoConsecutiveSameRole) {
  const std::vector<ChatMessage> in{{Role::kSystem, "S"},  {Role::kUser, "a"},
                                    {Role::kUser, "b"},    {Role::kAssistant, "c"},
                                    {Role::kAssistant, "d"}, {Role::kUser, "e"}};
  for (bool system : {true, false}) {
    const auto out = prepare_messages(in, system);
    for (std::size_t i = 1; i < out.size(); ++i) EXPECT_NE(out[i].role, out[i - 1].role);
  }
  const auto merged = prepare_messages(in, true);
  ASSERT_EQ(merged.size(), 4u);
  EXPECT_EQ(merged[1].content, "a\nb");
}

TEST(ChatWire, RequestShape) {
  AgentBinding binding = scripted("x", {"r"});
  binding.model_name = "m";
  binding.temperature = 0.4;
  binding.max_new_tokens = 17;
  const auto body = build_chat_request(binding, {{Role::kSystem, "S"}, {Role::kUser, "U"}}, {});
  EXPECT_EQ(body["model"], "m");
  EXPECT_EQ(body["max_tokens"], 17);
  EXPECT_DOUBLE_EQ(body["temperature"].get<double>(), 0.4);
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_EQ(body["messages"][1]["content"], "U");
  EXPECT_DOUBLE_EQ(build_chat_request(binding, {}, {0.9})["temperature"].get<double>(), 0.9);
}

TEST(ChatWire, ResponseParsing) {
  EXPECT_EQ(parse_chat_response(R"({"choices":[{"message":{"role":"assistant","content":"hi"}}]})"),
            "hi");
  EXPECT_THROW(parse_chat_response("not json"), TransportError);
  EXPECT_THROW(parse_chat_response(R"({"choices":[]})"), TransportError);
  EXPECT_THROW(parse_chat_response(R"({"choices":[{"message":{}}]})"), TransportError);
}

TEST(ValidateBinding, Rules) {
  EXPECT_TRUE(validate_binding(scripted("a", {"x"})).empty());
  AgentBinding bad = scripted("a");
  EXPECT_FALSE(validate_binding(bad).empty());
  bad = scripted("a", {"x"});
  bad.temperature = 2.1;
  EXPECT_FALSE(validate_binding(bad).empty());
  AgentBinding remote;
  remote.agent_id = "r";
  remote.kind = AgentKind::kRemote;
  EXPECT_EQ(validate_binding(remote).size(), 2u);
}

TEST(ScriptedAgent, ReplaysInOrderThenExhausts) {
  ScriptedAgent agent(scripted("s", {"one", "two", "three"}));
  EXPECT_EQ(agent.complete(user("q")), "one");
  EXPECT_EQ(agent.complete(user("q")), "two");
  EXPECT_EQ(agent.complete(user("q")), "three");
  EXPECT_THROW(agent.complete(user("q")), ScriptExhaustedError);
  EXPECT_EQ(agent.calls(), 4u);
}

TEST(ScriptedAgent, WordKeyWinsRegardlessOfOrder) {
  ScriptedAgent agent(scripted("s", {"fallback"}, {{"feutre", {"\"A felt hat.\""}}}));
  EXPECT_EQ(agent.complete(user("define \"bumf\"")), "fallback");
  EXPECT_EQ(agent.complete(user("define \"feutre\"")), "\"A felt hat.\"");
}

TEST(ScriptedAgent, EarliestWholeWordMatch) {
  ScriptedAgent agent(scripted("s", {}, {{"cat", {"C"}}, {"category", {"G"}}, {"dog", {"D"}}}));
  EXPECT_EQ(agent.complete(user("the dog and the cat")), "D");
  EXPECT_EQ(agent.complete(user("a category, then cat")), "G");
  EXPECT_EQ(agent.complete(user("a category, then cat")), "C");
}

TEST(ScriptedAgent, RejectsEmptyScriptAndBadMessages) {
  EXPECT_THROW(ScriptedAgent(scripted("s")), ValidationError);
  ScriptedAgent agent(scripted("s", {"x"}));
  EXPECT_THROW(agent.complete(std::vector<ChatMessage>{}), ValidationError);
  EXPECT_THROW(agent.complete(std::vector<ChatMessage>{{Role::kAssistant, "a"}}), ValidationError);
  EXPECT_THROW(agent.complete(std::vector<ChatMessage>{{Role::kUser, ""}}), ValidationError);
}

TEST(ScriptedAgent, TranscriptRecordsFoldedMessages) {
  AgentBinding binding = scripted("s", {"x"});
  binding.supports_system_role = false;
  ScriptedAgent agent(binding);
  agent.complete(std::vector<ChatMessage>{{Role::kSystem, "S"}, {Role::kUser, "U"}});
  const auto transcript = agent.transcript();
  ASSERT_EQ(transcript.size(), 1u);
  ASSERT_EQ(transcript[0].size(), 1u);
  EXPECT_EQ(transcript[0][0].content, "S\nU");
}

TEST(ScriptedAgent, HeuristicReplies) {
  ScriptedAgent agent(scripted("h", {}, {}, true));
  EXPECT_EQ(agent.complete(user("Your allowed choice(s): 3, 4\nUse at most")), "3");
  EXPECT_EQ(agent.complete(user("You receive the word: \"w\", the reference dictionary definition: "
                                "\"A b.\", and assistant's definition: \"a  B.\". Give your answer")),
            "true");
  EXPECT_EQ(agent.complete(user("Actual definition: x and generated definition: y. Your judgment:")),
            "false");
  EXPECT_EQ(agent.complete(user("write a definition for the word \"zap\". Go")),
            "\"An invented meaning of zap by h.\"");
  EXPECT_EQ(agent.complete(user("zap (noun): ")), "An invented meaning of zap.");
  EXPECT_THROW(agent.complete(user("something else")), ScriptExhaustedError);
}

TEST(ScriptedAgent, ConcurrentCallsConsumeEachReplyOnce) {
  std::vector<std::string> replies;
  for (int i = 0; i < 64; ++i) replies.push_back(std::to_string(i));
  ScriptedAgent agent(scripted("s", replies));
  std::vector<std::string> got(64);
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 8; ++i) got[static_cast<std::size_t>(t * 8 + i)] = agent.complete(user("q"));
    });
  }
  for (auto& thread : threads) thread.join();
  std::sort(got.begin(), got.end());
  std::sort(replies.begin(), replies.end());
  EXPECT_EQ(got, replies);
}

TEST(MakeAgent, PicksImplementation) {
  EXPECT_NE(dynamic_cast<ScriptedAgent*>(make_agent(scripted("s", {"x"})).get()), nullptr);
  AgentBinding remote;
  remote.agent_id = "r";
  remote.kind = AgentKind::kRemote;
  remote.model_name = "m";
  remote.endpoint = "http://127.0.0.1:9/v1/chat/completions";
  EXPECT_NE(dynamic_cast<RemoteAgent*>(make_agent(remote).get()), nullptr);
  remote.endpoint = "localhost:9";
  EXPECT_THROW(make_agent(remote), ValidationError);
}

}  // namespace
}  // namespace balderdash
