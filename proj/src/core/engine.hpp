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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "agents.hpp"
#include "domain.hpp"
#include "prompts.hpp"
#include "rng.hpp"

namespace balderdash {

class RunStore;

// A player seat: the agent plus the group it is counted under.
struct Seat {
  PlayerId player_id = 0;
  Agent* agent = nullptr;
  std::string llm_group;
  std::string llm_name;
};

struct PlayerSpec {
  AgentBinding binding;
  // Defaults to binding.model_name when empty.
  std::string llm_group;
};

struct EngineOptions {
  // Fan out agent calls of one phase over threads.
  bool concurrent = false;
  // When set, the finished game is persisted here.
  RunStore* store = nullptr;
};

// Shared state of one round while it is being played.
struct RoundContext {
  const GameConfig& config;
  const PromptSet& prompts;
  const std::vector<Seat>& seats;
  Agent& judge;
  const WordEntry& word;
  // Per-player history block; absent when the game runs without history.
  std::map<PlayerId, std::optional<HistoryContext>> history;
  bool concurrent = false;
};

// Prompts every seat for a definition and judges the answers. Abstaining
// players get an empty, non-conforming record and are never judged.
// Throws JudgeFailure when the judge cannot decide.
std::map<PlayerId, DefinitionRecord> collect_definitions(const RoundContext& ctx);

Ballot build_ballot(const std::map<PlayerId, DefinitionRecord>& definitions,
                    const std::string& reference_definition, Rng& rng);

// Vote targets are author ids or kReferenceVote; players whose vote never
// parsed are left out.
std::map<PlayerId, PlayerId> collect_votes(const RoundContext& ctx,
                                           const std::map<PlayerId, DefinitionRecord>& definitions,
                                           const Ballot& ballot);

std::map<PlayerId, int> score_round(const RoundRecord& round, const std::vector<PlayerId>& players,
                                    const ScoringRules& rules);

void update_ranks(std::vector<PlayerState>& players, const std::map<PlayerId, int>& round_scores);

std::string_view outcome_label(const RoundRecord& round, PlayerId player);

std::vector<std::pair<std::string, std::string>> compute_winners_strategies(
    const RoundRecord& round);

// Votes received / (|votes| - 1); -1 when the player wrote the true
// definition and 0 when fewer than two players voted.
double history_deception_ratio(const RoundRecord& round, PlayerId player);

HistoryRow make_history_row(const RoundRecord& round, const PlayerState& player);

// Plays a whole game. Seats must have distinct ids; agents are borrowed.
GameRecord run_game(const GameConfig& config, std::int64_t game_id, const std::vector<Seat>& seats,
                    Agent& judge, const PromptSet& prompts, const EngineOptions& options = {});

GameRecord run_game(const GameConfig& config, std::int64_t game_id,
                    const std::vector<PlayerSpec>& players, const AgentBinding& judge,
                    const PromptSet& prompts, const EngineOptions& options = {});

// Seeded order in which a game consumes its deck.
std::vector<std::size_t> word_order(const GameConfig& config);

}  // namespace balderdash
