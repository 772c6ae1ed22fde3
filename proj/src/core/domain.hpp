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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace balderdash {

using PlayerId = int;

// Vote target meaning "the reference dictionary definition".
inline constexpr PlayerId kReferenceVote = -1;

struct WordEntry {
  std::string word;
  std::string pos;
  // Element 0 is the reference dictionary definition.
  std::vector<std::string> definitions;
  std::optional<double> frequency;

  const std::string& reference_definition() const { return definitions.at(0); }
  friend bool operator==(const WordEntry&, const WordEntry&) = default;
};

struct WordDeck {
  std::string name;
  std::vector<WordEntry> entries;
  std::optional<double> avg_frequency;

  std::size_t size() const { return entries.size(); }
  friend bool operator==(const WordDeck&, const WordDeck&) = default;
};

struct ScoringRules {
  int correct_definition_points = 3;
  int correct_vote_points = 2;
  int receiving_vote_points = 1;
  friend bool operator==(const ScoringRules&, const ScoringRules&) = default;
};

enum class HistoryType { kNone, kMini, kFull };

std::string_view to_string(HistoryType type);
// Throws ValidationError for anything other than none/mini/full.
HistoryType parse_history_type(std::string_view text);

struct GameConfig {
  std::string description;
  int num_rounds = 1;
  std::string judge_model;
  std::int64_t random_seed = 0;
  ScoringRules scoring;
  HistoryType history_type = HistoryType::kNone;
  int history_window = 1;
  double temperature = 0.9;
  WordDeck deck;
  std::string prompt_set = "default";
  // Free-form labels carried into the games collection.
  std::string experiment;
  std::string date;

  friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

struct PlayerState {
  PlayerId player_id = 0;
  std::string llm_group;
  std::string llm_name;
  long cumulative_score = 0;
  // One entry per completed round.
  std::vector<int> rank_history;
  std::vector<long> score_history;
  friend bool operator==(const PlayerState&, const PlayerState&) = default;
};

struct DefinitionRecord {
  PlayerId player_id = 0;
  std::string raw_response;
  std::string parsed_definition;
  bool conforming = true;
  // No usable definition after retries; never judged, never on the ballot.
  bool abstained = false;
  bool judge_decision = false;
  bool llm_knows_one = false;
  friend bool operator==(const DefinitionRecord&, const DefinitionRecord&) = default;
};

struct BallotEntry {
  int display_index = 0;  // 1-based
  PlayerId source = kReferenceVote;
  std::string text;
  friend bool operator==(const BallotEntry&, const BallotEntry&) = default;
};

struct Ballot {
  std::vector<BallotEntry> entries;
  // Voter -> ascending display indices the voter may choose.
  std::map<PlayerId, std::vector<int>> allowed;

  int reference_index() const;
  std::optional<int> index_of(PlayerId author) const;
  // Author of the entry at a display index (kReferenceVote for the reference).
  PlayerId source_at(int display_index) const;
  friend bool operator==(const Ballot&, const Ballot&) = default;
};

struct RoundRecord {
  int round_id = 0;
  WordEntry word;
  std::map<PlayerId, DefinitionRecord> definitions;
  Ballot ballot;
  std::map<PlayerId, PlayerId> votes;
  std::map<PlayerId, int> scores;
  std::vector<std::pair<std::string, std::string>> winners_strategies;
  bool skipped = false;
  std::string skip_reason;

  int votes_received(PlayerId player) const;
  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct GameRecord {
  std::int64_t game_id = 0;
  GameConfig config;
  std::vector<PlayerState> players;
  std::vector<RoundRecord> rounds;

  std::vector<PlayerId> group_members(std::string_view group) const;
  // Distinct groups in player order.
  std::vector<std::string> groups() const;
  friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

// Empty iff every WordDeck/WordEntry invariant holds.
std::vector<std::string> validate_deck(const WordDeck& deck);

std::vector<std::string> validate_config(const GameConfig& config);

// Draws `count` subsets of `size` entries. Subsets are pairwise disjoint when
// count * size fits in the deck, otherwise each is drawn independently.
std::vector<WordDeck> sample_subsets(const WordDeck& deck, int count, int size,
                                     std::int64_t seed);

// Checks the record-level invariants (ballot authors, exclusion, rank
// consistency). Returns a description per violation.
std::vector<std::string> validate_game_record(const GameRecord& record);

// Competition ranking: 1 + number of strictly greater scores.
std::vector<int> competition_ranks(const std::vector<long>& scores);

std::string trim(std::string_view text);
std::string to_lower(std::string_view text);

}  // namespace balderdash
