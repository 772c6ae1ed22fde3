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

#include "prompts.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "csv.hpp"
#include "errors.hpp"
#include "hashing.hpp"

namespace balderdash {
namespace detail {
const std::map<std::string, std::string>& bundled_prompt_texts();
}  // namespace detail

namespace {

bool is_placeholder_char(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }

// Finds the placeholder starting at `open` ('{'); returns its length
// including braces or 0 if the brace does not start a placeholder.
std::size_t placeholder_length(std::string_view tmpl, std::size_t open) {
  std::size_t i = open + 1;
  while (i < tmpl.size() && is_placeholder_char(tmpl[i])) ++i;
  if (i == open + 1 || i >= tmpl.size() || tmpl[i] != '}') return 0;
  return i - open + 1;
}

std::string python_repr(std::string_view text) {
  const bool has_single = text.find('\'') != std::string_view::npos;
  const bool has_double = text.find('"') != std::string_view::npos;
  const char quote = (has_single && !has_double) ? '"' : '\'';
  std::string out(1, quote);
  for (char c : text) {
    const auto byte = static_cast<unsigned char>(c);
    if (c == '\\') {
      out += "\\\\";
    } else if (c == quote) {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else if (c == '\r') {
      out += "\\r";
    } else if (c == '\t') {
      out += "\\t";
    } else if (byte < 0x20 || byte == 0x7F) {
      static constexpr char kHex[] = "0123456789abcdef";
      out += "\\x";
      out += kHex[byte >> 4];
      out += kHex[byte & 0x0F];
    } else {
      out += c;
    }
  }
  out += quote;
  return out;
}

std::string_view bool_literal(bool value) { return value ? "True" : "False"; }

// Strips one layer of matching quote characters around a token.
std::string_view strip_quotes(std::string_view text) {
  while (text.size() >= 2) {
    const char first = text.front();
    const char last = text.back();
    if ((first == '"' || first == '\'' || first == '`') && first == last) {
      text = text.substr(1, text.size() - 2);
    } else {
      break;
    }
  }
  return text;
}

}  // namespace

std::vector<std::string_view> required_prompt_ids() {
  using namespace prompt_id;
  return {kGameRules,        kGameRulesNoHistory, kGenerateDefinition, kGenerateDefinitionNoHistory,
          kVote,             kVoteNoHistory,      kFullHistory,        kMiniHistory,
          kJudgeSystem,      kJudgeUser,          kDictionarySystem,   kDictionaryUser,
          kKnownJudgeSystem, kKnownJudgeUser,     kDefineUser,         kDeceiveUser};
}

std::string render_template(std::string_view tmpl, const Bindings& bindings) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      if (std::size_t len = placeholder_length(tmpl, i); len > 0) {
        const std::string_view name = tmpl.substr(i + 1, len - 2);
        auto it = bindings.find(name);
        if (it == bindings.end()) {
          throw ValidationError("no binding for placeholder {" + std::string(name) + "}");
        }
        out += it->second;
        i += len;
        continue;
      }
    }
    out += tmpl[i++];
  }
  return out;
}

std::set<std::string> template_placeholders(std::string_view tmpl) {
  std::set<std::string> names;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] != '{') continue;
    if (std::size_t len = placeholder_length(tmpl, i); len > 0) {
      names.emplace(tmpl.substr(i + 1, len - 2));
      i += len - 1;
    }
  }
  return names;
}

PromptSet PromptSet::defaults() {
  PromptSet set;
  set.name_ = "default";
  for (const auto& [id, text] : detail::bundled_prompt_texts()) set.templates_.emplace(id, text);
  return set;
}

PromptSet PromptSet::load(const std::filesystem::path& dir) {
  PromptSet set;
  set.name_ = dir.string();
  std::vector<std::string> missing;
  for (std::string_view id : required_prompt_ids()) {
    const auto path = dir / (std::string(id) + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      missing.push_back(path.string());
      continue;
    }
    std::ostringstream text;
    text << in.rdbuf();
    set.templates_.emplace(std::string(id), text.str());
  }
  if (!missing.empty()) {
    std::string message = "prompt bundle '" + dir.string() + "' is missing templates:";
    for (const auto& path : missing) message += " " + path;
    throw ValidationError(message);
  }
  return set;
}

PromptSet PromptSet::resolve(std::string_view name_or_dir, const std::filesystem::path& base_dir) {
  if (name_or_dir.empty() || name_or_dir == "default") return defaults();
  std::filesystem::path dir(name_or_dir);
  if (dir.is_relative() && !base_dir.empty()) dir = base_dir / dir;
  return load(dir);
}

const std::string& PromptSet::get(std::string_view id) const {
  auto it = templates_.find(id);
  if (it == templates_.end()) {
    throw ValidationError("prompt bundle has no template '" + std::string(id) + "'");
  }
  return it->second;
}

std::string PromptSet::render(std::string_view id, const Bindings& bindings) const {
  return render_template(get(id), bindings);
}

std::string PromptSet::digest() const {
  std::string canonical;
  for (const auto& [id, text] : templates_) {
    canonical += id;
    canonical += '\0';
    canonical += std::to_string(text.size());
    canonical += '\0';
    canonical += text;
  }
  return sha256_hex(canonical);
}

std::string render_winners(const std::vector<std::pair<std::string, std::string>>& winners) {
  std::string out = "[";
  for (std::size_t i = 0; i < winners.size(); ++i) {
    if (i > 0) out += ", ";
    out += "(" + python_repr(winners[i].first) + ", " + python_repr(winners[i].second) + ")";
  }
  out += "]";
  return out;
}

std::string render_history_csv(const std::vector<HistoryRow>& rows, HistoryType type,
                               int window) {
  const bool full = type == HistoryType::kFull;
  std::string out(full ? kFullHistoryHeader : kMiniHistoryHeader);
  const std::size_t keep = static_cast<std::size_t>(std::max(window, 0));
  const std::size_t first = rows.size() > keep ? rows.size() - keep : 0;
  for (std::size_t i = first; i < rows.size(); ++i) {
    const HistoryRow& row = rows[i];
    std::vector<std::string> fields{std::to_string(row.round_id),
                                    std::to_string(row.rank_among_players),
                                    std::to_string(row.score), row.word};
    if (full) {
      fields.push_back(row.definition);
      fields.push_back(row.generated_definition);
      fields.emplace_back(bool_literal(row.wrote_true_definition));
      fields.emplace_back(bool_literal(row.guessed_correct_definiton));
      fields.push_back(row.wrote_true_definition ? "-1" : format_real(row.deception_ratio));
      fields.push_back(render_winners(row.round_winners_strategies));
    } else {
      fields.push_back(row.generated_definition);
    }
    out += '\n';
    out += csv_row(fields);
  }
  return out;
}

std::string render_game_rules(const PromptSet& prompts, const ScoringRules& rules,
                              bool with_history) {
  return prompts.render(with_history ? prompt_id::kGameRules : prompt_id::kGameRulesNoHistory,
                        {{"correct_definition_points", std::to_string(rules.correct_definition_points)},
                         {"correct_vote_points", std::to_string(rules.correct_vote_points)},
                         {"receiving_vote_points", std::to_string(rules.receiving_vote_points)}});
}

std::string render_history_prompt(const PromptSet& prompts, const HistoryContext& history) {
  if (history.type == HistoryType::kNone) {
    throw ValidationError("history prompt requested for history type none");
  }
  const auto id =
      history.type == HistoryType::kFull ? prompt_id::kFullHistory : prompt_id::kMiniHistory;
  return prompts.render(id, {{"history_csv", history.csv}});
}

std::string render_generate_definition(const PromptSet& prompts, std::string_view word,
                                       const std::optional<HistoryContext>& history) {
  if (trim(word).empty()) throw ValidationError("cannot ask for a definition of an empty word");
  const Bindings bindings{{"word", std::string(word)}};
  if (!history) return prompts.render(prompt_id::kGenerateDefinitionNoHistory, bindings);
  return prompts.render(prompt_id::kGenerateDefinition, bindings) + "\n" +
         render_history_prompt(prompts, *history);
}

std::string describe_choices(const std::vector<int>& choices) {
  std::string out;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    if (i > 0) out += (i + 1 == choices.size()) ? " or " : ", ";
    out += std::to_string(choices[i]);
  }
  return out;
}

std::string render_vote_prompt(const PromptSet& prompts, std::string_view word,
                               std::string_view own_definition, const Ballot& ballot,
                               PlayerId voter, const std::optional<HistoryContext>& history) {
  auto allowed = ballot.allowed.find(voter);
  if (allowed == ballot.allowed.end()) {
    throw ValidationError("player " + std::to_string(voter) + " is not a voter on this ballot");
  }
  std::string listing;
  for (const auto& entry : ballot.entries) {
    if (!listing.empty()) listing += '\n';
    listing += std::to_string(entry.display_index) + ". " + entry.text;
  }
  std::string choices;
  for (int index : allowed->second) {
    if (!choices.empty()) choices += ", ";
    choices += std::to_string(index);
  }
  const Bindings bindings{{"word", std::string(word)},
                          {"definition", std::string(own_definition)},
                          {"definitions", listing},
                          {"all_indexes_excluding_player", choices},
                          {"all_indexes_excluding_player_descriptive",
                           describe_choices(allowed->second)}};
  if (!history) return prompts.render(prompt_id::kVoteNoHistory, bindings);
  return prompts.render(prompt_id::kVote, bindings) + "\n" +
         render_history_prompt(prompts, *history);
}

ParsedDefinition parse_definition(std::string_view raw) {
  const std::string trimmed = trim(raw);
  if (trimmed.empty()) throw DefinitionFormatError("empty definition response");

  std::size_t search = 0;
  while (true) {
    const std::size_t open = trimmed.find('"', search);
    if (open == std::string::npos) break;
    const std::size_t close = trimmed.find('"', open + 1);
    if (close == std::string::npos) break;
    std::string inner = trim(std::string_view(trimmed).substr(open + 1, close - open - 1));
    if (!inner.empty()) return {std::move(inner), true};
    search = close + 1;
  }
  return {trimmed, false};
}

int parse_vote(std::string_view raw, const std::vector<int>& allowed) {
  if (allowed.empty()) throw ValidationError("vote parsed against an empty allowed set");
  const std::string trimmed = trim(raw);
  const std::string token = trim(strip_quotes(trimmed));
  if (token.size() != 1 || !std::isdigit(static_cast<unsigned char>(token[0]))) {
    throw VoteFormatError("vote must be a single digit, got '" + trimmed + "'");
  }
  const int vote = token[0] - '0';
  if (std::find(allowed.begin(), allowed.end(), vote) == allowed.end()) {
    throw VoteFormatError("vote " + token + " is not an allowed choice (" +
                          describe_choices(allowed) + ")");
  }
  return vote;
}

bool parse_judge_verdict(std::string_view raw) {
  std::istringstream in{std::string(raw)};
  std::string token;
  while (in >> token) {
    std::size_t begin = 0;
    std::size_t end = token.size();
    while (begin < end && !std::isalnum(static_cast<unsigned char>(token[begin]))) ++begin;
    while (end > begin && !std::isalnum(static_cast<unsigned char>(token[end - 1]))) --end;
    const std::string word = to_lower(std::string_view(token).substr(begin, end - begin));
    if (word == "true") return true;
    if (word == "false") return false;
  }
  throw JudgeFormatError("judge reply has no true/false verdict: '" + trim(raw) + "'");
}

}  // namespace balderdash
