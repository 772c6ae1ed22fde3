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

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "domain.hpp"

namespace balderdash {

// Template ids. Each one is a file <id>.txt in an on-disk bundle.
namespace prompt_id {
inline constexpr std::string_view kGameRules = "game_rules";
inline constexpr std::string_view kGameRulesNoHistory = "game_rules_no_history";
inline constexpr std::string_view kGenerateDefinition = "generate_definition";
inline constexpr std::string_view kGenerateDefinitionNoHistory = "generate_definition_no_history";
inline constexpr std::string_view kVote = "vote_on_definitions";
inline constexpr std::string_view kVoteNoHistory = "vote_on_definitions_no_history";
inline constexpr std::string_view kFullHistory = "full_history";
inline constexpr std::string_view kMiniHistory = "mini_history";
inline constexpr std::string_view kJudgeSystem = "judge_system";
inline constexpr std::string_view kJudgeUser = "judge_user";
inline constexpr std::string_view kDictionarySystem = "dictionary_system";
inline constexpr std::string_view kDictionaryUser = "dictionary_user";
inline constexpr std::string_view kKnownJudgeSystem = "known_judge_system";
inline constexpr std::string_view kKnownJudgeUser = "known_judge_user";
inline constexpr std::string_view kDefineUser = "define_user";
inline constexpr std::string_view kDeceiveUser = "deceive_user";
}  // namespace prompt_id

std::vector<std::string_view> required_prompt_ids();

using Bindings = std::map<std::string, std::string, std::less<>>;

// Substitutes every {name} placeholder (name = [a-z_]+) in one pass.
// Throws ValidationError if a placeholder has no binding.
std::string render_template(std::string_view tmpl, const Bindings& bindings);
std::set<std::string> template_placeholders(std::string_view tmpl);

class PromptSet {
 public:
  // The bundled templates.
  static PromptSet defaults();
  // Reads <id>.txt for every required id; missing files are a ValidationError.
  static PromptSet load(const std::filesystem::path& dir);
  // "default" selects the bundled set, anything else is a directory.
  static PromptSet resolve(std::string_view name_or_dir,
                           const std::filesystem::path& base_dir = {});

  const std::string& name() const { return name_; }
  const std::string& get(std::string_view id) const;
  std::string render(std::string_view id, const Bindings& bindings) const;
  const std::map<std::string, std::string, std::less<>>& templates() const { return templates_; }
  // SHA-256 over the id-sorted (id, text) pairs.
  std::string digest() const;

 private:
  std::string name_;
  std::map<std::string, std::string, std::less<>> templates_;
};

struct HistoryRow {
  int round_id = 0;
  int rank_among_players = 1;
  int score = 0;
  std::string word;
  std::string definition;
  std::string generated_definition;
  bool wrote_true_definition = false;
  bool guessed_correct_definiton = false;
  // -1 when wrote_true_definition.
  double deception_ratio = 0.0;
  std::vector<std::pair<std::string, std::string>> round_winners_strategies;
};

inline constexpr std::string_view kFullHistoryHeader =
    "round_id,rank_among_players,score,word,definition,generated_definition,"
    "wrote_true_definition,guessed_correct_definiton,deception_ratio,round_winners_strategies";
inline constexpr std::string_view kMiniHistoryHeader =
    "round_id,rank_among_players,score,word,generated_definition";

// Header plus the last `window` rows, newline separated, no trailing newline.
std::string render_history_csv(const std::vector<HistoryRow>& rows, HistoryType type,
                               int window);

// Python-style repr of a list of string pairs: [('a', 'b'), ('c', 'd')].
std::string render_winners(const std::vector<std::pair<std::string, std::string>>& winners);

struct HistoryContext {
  HistoryType type = HistoryType::kMini;
  std::string csv;
};

std::string render_game_rules(const PromptSet& prompts, const ScoringRules& rules,
                              bool with_history);
std::string render_history_prompt(const PromptSet& prompts, const HistoryContext& history);
std::string render_generate_definition(const PromptSet& prompts, std::string_view word,
                                       const std::optional<HistoryContext>& history);

// "2", "1 or 3", "1, 3 or 4".
std::string describe_choices(const std::vector<int>& choices);

std::string render_vote_prompt(const PromptSet& prompts, std::string_view word,
                               std::string_view own_definition, const Ballot& ballot,
                               PlayerId voter, const std::optional<HistoryContext>& history);

struct ParsedDefinition {
  std::string text;
  // False when the response had no quoted span and the whole reply was used.
  bool conforming = true;
};

ParsedDefinition parse_definition(std::string_view raw);
int parse_vote(std::string_view raw, const std::vector<int>& allowed);
bool parse_judge_verdict(std::string_view raw);

}  // namespace balderdash
