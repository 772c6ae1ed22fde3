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

#include "agents.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "domain.hpp"
#include "errors.hpp"

namespace balderdash {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kSystem:
      return "system";
    case Role::kUser:
      return "user";
    case Role::kAssistant:
      return "assistant";
  }
  return "user";
}

std::vector<std::string> validate_binding(const AgentBinding& binding) {
  std::vector<std::string> violations;
  const std::string label = "agent '" + binding.agent_id + "'";
  if (binding.agent_id.empty()) violations.push_back("agent binding without agent_id");
  if (!(binding.temperature >= 0.0 && binding.temperature <= 2.0)) {
    violations.push_back(label + ": temperature must lie in [0, 2]");
  }
  if (binding.max_new_tokens < 1) violations.push_back(label + ": max_new_tokens must be positive");
  if (binding.retry_limit < 0) violations.push_back(label + ": retry_limit must be >= 0");
  if (binding.kind == AgentKind::kRemote) {
    if (binding.endpoint.empty()) violations.push_back(label + ": remote agent needs an endpoint");
    if (binding.model_name.empty()) violations.push_back(label + ": remote agent needs a model_name");
  } else if (binding.script.empty()) {
    violations.push_back(label + ": scripted agent has an empty script");
  }
  return violations;
}

std::vector<ChatMessage> prepare_messages(std::span<const ChatMessage> messages,
                                          bool supports_system_role) {
  std::vector<ChatMessage> out;
  std::string pending_system;
  for (const ChatMessage& message : messages) {
    ChatMessage next = message;
    if (!supports_system_role && next.role == Role::kSystem) {
      if (!pending_system.empty()) pending_system += '\n';
      pending_system += next.content;
      continue;
    }
    if (!pending_system.empty() && next.role == Role::kUser) {
      next.content = pending_system + "\n" + next.content;
      pending_system.clear();
    }
    if (!out.empty() && out.back().role == next.role) {
      out.back().content += "\n" + next.content;
    } else {
      out.push_back(std::move(next));
    }
  }
  if (!pending_system.empty()) out.push_back({Role::kUser, pending_system});
  return out;
}

std::string Agent::complete(std::span<const ChatMessage> messages,
                            const CompletionOptions& options) {
  if (messages.empty()) throw ValidationError("complete() needs at least one message");
  if (messages.front().role == Role::kAssistant) {
    throw ValidationError("first message must be a system or user message");
  }
  for (const auto& message : messages) {
    if (message.content.empty()) throw ValidationError("chat message content is empty");
  }
  return send(prepare_messages(messages, binding_.supports_system_role), options);
}

nlohmann::json build_chat_request(const AgentBinding& binding,
                                  const std::vector<ChatMessage>& messages,
                                  const CompletionOptions& options) {
  nlohmann::json wire = nlohmann::json::array();
  for (const auto& message : messages) {
    wire.push_back({{"role", to_string(message.role)}, {"content", message.content}});
  }
  return {{"model", binding.model_name},
          {"messages", std::move(wire)},
          {"temperature", options.temperature.value_or(binding.temperature)},
          {"max_tokens", binding.max_new_tokens}};
}

std::string parse_chat_response(std::string_view body) {
  const auto json = nlohmann::json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (json.is_discarded()) throw TransportError("chat response is not valid JSON");
  const auto choices = json.find("choices");
  if (choices == json.end() || !choices->is_array() || choices->empty()) {
    throw TransportError("chat response has no choices");
  }
  const auto& first = (*choices)[0];
  if (!first.contains("message") || !first["message"].contains("content") ||
      !first["message"]["content"].is_string()) {
    throw TransportError("chat response is missing assistant content");
  }
  return first["message"]["content"].get<std::string>();
}

// --- Scripted ---------------------------------------------------------------

namespace {

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// Position of the first whole-word occurrence of key, or npos.
std::size_t find_word(std::string_view text, std::string_view key) {
  std::size_t pos = text.find(key);
  while (pos != std::string_view::npos) {
    const bool left_ok = pos == 0 || !is_word_char(text[pos - 1]);
    const std::size_t end = pos + key.size();
    const bool right_ok = end >= text.size() || !is_word_char(text[end]);
    if (left_ok && right_ok) return pos;
    pos = text.find(key, pos + 1);
  }
  return std::string_view::npos;
}

std::string normalize_text(std::string_view text) {
  std::string out;
  bool space = false;
  for (char c : trim(text)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::optional<std::string> between(std::string_view text, std::string_view open,
                                   std::string_view close) {
  const std::size_t start = text.find(open);
  if (start == std::string_view::npos) return std::nullopt;
  const std::size_t begin = start + open.size();
  const std::size_t end = text.find(close, begin);
  if (end == std::string_view::npos) return std::nullopt;
  return std::string(text.substr(begin, end - begin));
}

}  // namespace

ScriptedAgent::ScriptedAgent(AgentBinding binding) : Agent(std::move(binding)) {
  if (this->binding().script.empty()) {
    throw ValidationError("scripted agent '" + this->binding().agent_id + "' has an empty script");
  }
}

std::size_t ScriptedAgent::calls() const {
  std::lock_guard lock(mutex_);
  return transcript_.size();
}

std::vector<std::vector<ChatMessage>> ScriptedAgent::transcript() const {
  std::lock_guard lock(mutex_);
  return transcript_;
}

std::string ScriptedAgent::send(const std::vector<ChatMessage>& messages,
                                const CompletionOptions&) {
  std::lock_guard lock(mutex_);
  transcript_.push_back(messages);
  const std::string_view prompt = messages.back().content;
  const Script& script = binding().script;

  const std::string* best_key = nullptr;
  std::size_t best_pos = std::string_view::npos;
  for (const auto& [key, replies] : script.by_word) {
    if (next_by_word_[key] >= replies.size()) continue;
    const std::size_t pos = find_word(prompt, key);
    if (pos == std::string_view::npos) continue;
    if (pos < best_pos || (pos == best_pos && key.size() > best_key->size())) {
      best_pos = pos;
      best_key = &key;
    }
  }
  if (best_key != nullptr) {
    return script.by_word.at(*best_key)[next_by_word_[*best_key]++];
  }
  if (next_response_ < script.responses.size()) return script.responses[next_response_++];
  if (script.heuristic_fallback) return heuristic_reply(prompt);
  throw ScriptExhaustedError("scripted agent '" + binding().agent_id + "' exhausted after " +
                             std::to_string(transcript_.size() - 1) + " replies");
}

std::string ScriptedAgent::heuristic_reply(std::string_view prompt) const {
  if (auto choices = between(prompt, "Your allowed choice(s): ", "\n")) {
    std::istringstream in(*choices);
    int first = 0;
    if (in >> first) return std::to_string(first);
  }
  if (auto reference = between(prompt, "the reference dictionary definition: \"",
                               "\", and assistant's definition: \"")) {
    const auto candidate = between(prompt, "and assistant's definition: \"",
                                   "\". Give your answer");
    return candidate && normalize_text(*candidate) == normalize_text(*reference) ? "true"
                                                                                 : "false";
  }
  if (auto reference = between(prompt, "Actual definition: ", " and generated definition: ")) {
    const auto candidate = between(prompt, " and generated definition: ", ". Your judgment:");
    return candidate && normalize_text(*candidate) == normalize_text(*reference) ? "true"
                                                                                 : "false";
  }
  if (auto word = between(prompt, "write a definition for the word \"", "\"")) {
    return "\"An invented meaning of " + *word + " by " + binding().agent_id + ".\"";
  }
  if (auto word = between(prompt, "", " (")) {
    if (prompt.ends_with("): ")) return "An invented meaning of " + *word + ".";
  }
  throw ScriptExhaustedError("scripted agent '" + binding().agent_id +
                             "' has no heuristic reply for this prompt");
}

// --- Remote -----------------------------------------------------------------

namespace {

// Transport failures worth another attempt (connection errors, 429, 5xx).
class RetryableTransportError : public TransportError {
 public:
  using TransportError::TransportError;
};

}  // namespace

RemoteAgent::RemoteAgent(AgentBinding binding) : Agent(std::move(binding)) {
  const std::string& endpoint = this->binding().endpoint;
  const std::size_t scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw ValidationError("endpoint '" + endpoint + "' must start with http:// or https://");
  }
  const std::size_t path_start = endpoint.find('/', scheme_end + 3);
  scheme_host_port_ = endpoint.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : endpoint.substr(path_start);
  if (!this->binding().api_key_env.empty()) {
    if (const char* key = std::getenv(this->binding().api_key_env.c_str())) api_key_ = key;
  }
}

std::string RemoteAgent::post_once(const std::string& body) const {
  httplib::Client client(scheme_host_port_);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(binding().timeout_seconds));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  auto result = client.Post(path_, headers, body, "application/json");
  if (!result) {
    throw RetryableTransportError("request to " + binding().endpoint +
                                  " failed: " + httplib::to_string(result.error()));
  }
  const int status = result->status;
  if (status == 401 || status == 403) {
    throw AuthenticationError("authentication failed for " + binding().endpoint + " (HTTP " +
                              std::to_string(status) + ")");
  }
  if (status == 429 || status >= 500) {
    throw RetryableTransportError("HTTP " + std::to_string(status) + " from " +
                                  binding().endpoint);
  }
  if (status < 200 || status >= 300) {
    throw TransportError("HTTP " + std::to_string(status) + " from " + binding().endpoint +
                         ": " + result->body);
  }
  return result->body;
}

std::string RemoteAgent::send(const std::vector<ChatMessage>& messages,
                              const CompletionOptions& options) {
  const std::string body = build_chat_request(binding(), messages, options).dump();
  for (int attempt = 0;; ++attempt) {
    try {
      return parse_chat_response(post_once(body));
    } catch (const RetryableTransportError& error) {
      if (attempt >= binding().retry_limit) {
        throw TransportError(std::string(error.what()) + " (after " +
                             std::to_string(attempt + 1) + " attempts)");
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(
          static_cast<long long>(binding().backoff_initial_ms) << std::min(attempt, 16)));
    }
  }
}

std::unique_ptr<Agent> make_agent(const AgentBinding& binding) {
  if (binding.kind == AgentKind::kRemote) return std::make_unique<RemoteAgent>(binding);
  return std::make_unique<ScriptedAgent>(binding);
}

}  // namespace balderdash
