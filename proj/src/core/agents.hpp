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

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace balderdash {

enum class Role { kSystem, kUser, kAssistant };

std::string_view to_string(Role role);

struct ChatMessage {
  Role role = Role::kUser;
  std::string content;
};

enum class AgentKind { kRemote, kScripted };

// Replies for a scripted agent. Lookup order on each call: the word-keyed
// queue whose key occurs earliest in the last message, then the call-order
// queue, then the heuristic fallback if enabled.
struct Script {
  std::vector<std::string> responses;
  std::map<std::string, std::vector<std::string>> by_word;
  bool heuristic_fallback = false;

  bool empty() const { return responses.empty() && by_word.empty() && !heuristic_fallback; }
};

struct AgentBinding {
  std::string agent_id;
  AgentKind kind = AgentKind::kScripted;
  std::string model_name;
  // Full chat-completions URL, e.g. http://localhost:8000/v1/chat/completions.
  std::string endpoint;
  // Name of the environment variable holding the API key; empty for none.
  std::string api_key_env;
  double temperature = 0.9;
  int max_new_tokens = 256;
  bool supports_system_role = true;
  int retry_limit = 2;
  double timeout_seconds = 60.0;
  int backoff_initial_ms = 500;
  Script script;
};

std::vector<std::string> validate_binding(const AgentBinding& binding);

struct CompletionOptions {
  std::optional<double> temperature;
};

class Agent {
 public:
  explicit Agent(AgentBinding binding) : binding_(std::move(binding)) {}
  virtual ~Agent() = default;
  Agent(const Agent&) = delete;
  Agent& operator=(const Agent&) = delete;

  // Returns the assistant text. Throws ValidationError for an empty message
  // list or one that opens with an assistant turn.
  std::string complete(std::span<const ChatMessage> messages,
                       const CompletionOptions& options = {});

  const AgentBinding& binding() const { return binding_; }

 protected:
  // Receives the messages after role folding and merging.
  virtual std::string send(const std::vector<ChatMessage>& messages,
                           const CompletionOptions& options) = 0;

 private:
  AgentBinding binding_;
};

// Folds the system message into the first user message ("S\nU") when the
// binding lacks a system role, and merges consecutive same-role messages.
std::vector<ChatMessage> prepare_messages(std::span<const ChatMessage> messages,
                                          bool supports_system_role);

nlohmann::json build_chat_request(const AgentBinding& binding,
                                  const std::vector<ChatMessage>& messages,
                                  const CompletionOptions& options);

// Extracts choices[0].message.content; throws TransportError when absent.
std::string parse_chat_response(std::string_view body);

class ScriptedAgent : public Agent {
 public:
  explicit ScriptedAgent(AgentBinding binding);

  std::size_t calls() const;
  // Every message list received, in call order.
  std::vector<std::vector<ChatMessage>> transcript() const;

 protected:
  std::string send(const std::vector<ChatMessage>& messages,
                   const CompletionOptions& options) override;

 private:
  std::string heuristic_reply(std::string_view prompt) const;

  mutable std::mutex mutex_;
  std::size_t next_response_ = 0;
  std::map<std::string, std::size_t> next_by_word_;
  std::vector<std::vector<ChatMessage>> transcript_;
};

class RemoteAgent : public Agent {
 public:
  explicit RemoteAgent(AgentBinding binding);

 protected:
  std::string send(const std::vector<ChatMessage>& messages,
                   const CompletionOptions& options) override;

 private:
  std::string post_once(const std::string& body) const;

  std::string scheme_host_port_;
  std::string path_;
  std::string api_key_;
};

std::unique_ptr<Agent> make_agent(const AgentBinding& binding);

}  // namespace balderdash
