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

#include "engine.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <set>

#include "errors.hpp"
#include "judge.hpp"
#include "store.hpp"

namespace balderdash {

inline constexpr std::size_t kMaxPlayers = 8;  // ballots must stay single-digit

namespace {

// Runs fn once per item, optionally on worker threads, and returns results
// in item order. Every task is joined before the first error is rethrown.
template <typename Item, typename Fn>
auto fan_out(const std::vector<Item>& items, bool concurrent, Fn fn)
    -> std::vector<decltype(fn(items.front()))> {
  using Result = decltype(fn(items.front()));
  std::vector<Result> results;
  results.reserve(items.size());
  if (!concurrent) {
    for (const auto& item : items) results.push_back(fn(item));
    return results;
  }
  std::vector<std::future<Result>> futures;
  futures.reserve(items.size());
  for (const auto& item : items) {
    futures.push_back(std::async(std::launch::async, [&fn, &item] { return fn(item); }));
  }
  for (auto& future : futures) future.wait();
  for (auto& future : futures) results.push_back(future.get());
  return results;
}

std::vector<ChatMessage> player_messages(const RoundContext& ctx, std::string user_prompt) {
  const bool with_history = ctx.config.history_type != HistoryType::kNone;
  return {{Role::kSystem, render_game_rules(ctx.prompts, ctx.config.scoring, with_history)},
          {Role::kUser, std::move(user_prompt)}};
}

const std::optional<HistoryContext>& history_for(const RoundContext& ctx, PlayerId player) {
  static const std::optional<HistoryContext> kNoHistory;
  auto it = ctx.history.find(player);
  return it == ctx.history.end() ? kNoHistory : it->second;
}

}  // namespace

std::map<PlayerId, DefinitionRecord> collect_definitions(const RoundContext& ctx) {
  auto ask = [&](const Seat& seat) {
    DefinitionRecord record;
    record.player_id = seat.player_id;
    const auto messages = player_messages(
        ctx, render_generate_definition(ctx.prompts, ctx.word.word, history_for(ctx, seat.player_id)));
    const int attempts = 1 + seat.agent->binding().retry_limit;
    for (int attempt = 0; attempt < attempts; ++attempt) {
      try {
        record.raw_response = seat.agent->complete(messages);
        ParsedDefinition parsed = parse_definition(record.raw_response);
        record.parsed_definition = std::move(parsed.text);
        record.conforming = parsed.conforming;
        return record;
      } catch (const DefinitionFormatError&) {
        continue;
      } catch (const TransportError&) {
        break;
      }
    }
    record.abstained = true;
    record.conforming = false;
    record.parsed_definition.clear();
    return record;
  };
  std::vector<DefinitionRecord> records = fan_out(ctx.seats, ctx.concurrent, ask);

  std::vector<const DefinitionRecord*> to_judge;
  for (const auto& record : records) {
    if (!record.abstained) to_judge.push_back(&record);
  }
  const auto judgements = fan_out(to_judge, ctx.concurrent, [&](const DefinitionRecord* record) {
    return judge_against_all(ctx.judge, ctx.prompts, ctx.word, record->parsed_definition);
  });

  std::map<PlayerId, DefinitionRecord> out;
  std::size_t next = 0;
  for (auto& record : records) {
    if (!record.abstained) {
      record.judge_decision = judgements[next].judge_decision;
      record.llm_knows_one = judgements[next].llm_knows_one;
      ++next;
    }
    out.emplace(record.player_id, std::move(record));
  }
  return out;
}

Ballot build_ballot(const std::map<PlayerId, DefinitionRecord>& definitions,
                    const std::string& reference_definition, Rng& rng) {
  std::vector<BallotEntry> entries;
  for (const auto& [id, record] : definitions) {
    if (!record.judge_decision && !record.abstained) {
      entries.push_back({0, id, record.parsed_definition});
    }
  }
  entries.push_back({0, kReferenceVote, reference_definition});
  rng.shuffle(std::span(entries));

  Ballot ballot;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i].display_index = static_cast<int>(i) + 1;
  }
  ballot.entries = std::move(entries);
  for (const auto& [id, record] : definitions) {
    if (record.judge_decision) continue;
    std::vector<int> allowed;
    for (const auto& entry : ballot.entries) {
      if (entry.source != id) allowed.push_back(entry.display_index);
    }
    ballot.allowed.emplace(id, std::move(allowed));
  }
  return ballot;
}

std::map<PlayerId, PlayerId> collect_votes(const RoundContext& ctx,
                                           const std::map<PlayerId, DefinitionRecord>& definitions,
                                           const Ballot& ballot) {
  std::vector<Seat> voters;
  for (const Seat& seat : ctx.seats) {
    if (ballot.allowed.contains(seat.player_id)) voters.push_back(seat);
  }
  auto ask = [&](const Seat& seat) -> std::optional<PlayerId> {
    const auto& allowed = ballot.allowed.at(seat.player_id);
    const std::string& own = definitions.at(seat.player_id).parsed_definition;
    const auto messages = player_messages(
        ctx, render_vote_prompt(ctx.prompts, ctx.word.word, own, ballot, seat.player_id,
                                history_for(ctx, seat.player_id)));
    const int attempts = 1 + seat.agent->binding().retry_limit;
    for (int attempt = 0; attempt < attempts; ++attempt) {
      try {
        const int index = parse_vote(seat.agent->complete(messages), allowed);
        return ballot.source_at(index);
      } catch (const VoteFormatError&) {
        continue;
      } catch (const TransportError&) {
        break;
      }
    }
    return std::nullopt;
  };
  const auto choices = fan_out(voters, ctx.concurrent, ask);

  std::map<PlayerId, PlayerId> votes;
  for (std::size_t i = 0; i < voters.size(); ++i) {
    if (choices[i]) votes.emplace(voters[i].player_id, *choices[i]);
  }
  return votes;
}

std::map<PlayerId, int> score_round(const RoundRecord& round, const std::vector<PlayerId>& players,
                                    const ScoringRules& rules) {
  std::map<PlayerId, int> scores;
  for (PlayerId player : players) {
    int score = 0;
    if (!round.skipped) {
      auto def = round.definitions.find(player);
      if (def != round.definitions.end() && def->second.judge_decision) {
        score += rules.correct_definition_points;
      }
      auto vote = round.votes.find(player);
      if (vote != round.votes.end() && vote->second == kReferenceVote) {
        score += rules.correct_vote_points;
      }
      score += rules.receiving_vote_points * round.votes_received(player);
    }
    scores.emplace(player, score);
  }
  return scores;
}

void update_ranks(std::vector<PlayerState>& players, const std::map<PlayerId, int>& round_scores) {
  std::vector<long> cumulative;
  for (auto& player : players) {
    auto it = round_scores.find(player.player_id);
    player.cumulative_score += it == round_scores.end() ? 0 : it->second;
    player.score_history.push_back(player.cumulative_score);
    cumulative.push_back(player.cumulative_score);
  }
  const std::vector<int> ranks = competition_ranks(cumulative);
  for (std::size_t i = 0; i < players.size(); ++i) players[i].rank_history.push_back(ranks[i]);
}

std::string_view outcome_label(const RoundRecord& round, PlayerId player) {
  auto def = round.definitions.find(player);
  if (def != round.definitions.end() && def->second.judge_decision) return "wrote_true_definition";
  auto vote = round.votes.find(player);
  const bool guessed = vote != round.votes.end() && vote->second == kReferenceVote;
  const bool deceived = round.votes_received(player) > 0;
  if (deceived && guessed) return "deceived_and_guessed";
  if (deceived) return "deceived";
  if (guessed) return "guessed_correct";
  return "none";
}

std::vector<std::pair<std::string, std::string>> compute_winners_strategies(
    const RoundRecord& round) {
  std::vector<std::pair<std::string, std::string>> winners;
  if (round.skipped || round.scores.empty()) return winners;
  int best = round.scores.begin()->second;
  for (const auto& [player, score] : round.scores) best = std::max(best, score);
  for (const auto& [player, score] : round.scores) {
    if (score != best) continue;
    auto def = round.definitions.find(player);
    winners.emplace_back(def == round.definitions.end() ? "" : def->second.parsed_definition,
                         std::string(outcome_label(round, player)));
  }
  return winners;
}

double history_deception_ratio(const RoundRecord& round, PlayerId player) {
  auto def = round.definitions.find(player);
  if (def != round.definitions.end() && def->second.judge_decision) return -1.0;
  if (round.votes.size() <= 1) return 0.0;
  return static_cast<double>(round.votes_received(player)) /
         static_cast<double>(round.votes.size() - 1);
}

HistoryRow make_history_row(const RoundRecord& round, const PlayerState& player) {
  HistoryRow row;
  const PlayerId id = player.player_id;
  row.round_id = round.round_id;
  row.rank_among_players = player.rank_history.empty() ? 1 : player.rank_history.back();
  auto score = round.scores.find(id);
  row.score = score == round.scores.end() ? 0 : score->second;
  row.word = round.word.word;
  row.definition = round.word.reference_definition();
  auto def = round.definitions.find(id);
  if (def != round.definitions.end()) {
    row.generated_definition = def->second.parsed_definition;
    row.wrote_true_definition = def->second.judge_decision;
  }
  auto vote = round.votes.find(id);
  row.guessed_correct_definiton = vote != round.votes.end() && vote->second == kReferenceVote;
  row.deception_ratio = history_deception_ratio(round, id);
  row.round_winners_strategies = round.winners_strategies;
  return row;
}

std::vector<std::size_t> word_order(const GameConfig& config) {
  std::vector<std::size_t> order(config.deck.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(static_cast<std::uint64_t>(config.random_seed), 1));
  rng.shuffle(std::span(order));
  return order;
}

GameRecord run_game(const GameConfig& config, std::int64_t game_id, const std::vector<Seat>& seats,
                    Agent& judge, const PromptSet& prompts, const EngineOptions& options) {
  std::vector<std::string> violations = validate_config(config);
  if (seats.empty()) violations.push_back("a game needs at least one player");
  if (seats.size() > kMaxPlayers) {
    violations.push_back("at most " + std::to_string(kMaxPlayers) +
                         " players fit a single-digit ballot");
  }
  std::set<PlayerId> ids;
  for (const Seat& seat : seats) {
    if (seat.agent == nullptr) violations.push_back("seat without an agent");
    if (!ids.insert(seat.player_id).second) {
      violations.push_back("duplicate player id " + std::to_string(seat.player_id));
    }
  }
  if (!violations.empty()) {
    std::string message = "invalid game:";
    for (const auto& v : violations) message += "\n  " + v;
    throw ValidationError(message);
  }

  GameRecord record;
  record.game_id = game_id;
  record.config = config;
  std::vector<PlayerId> player_ids;
  for (const Seat& seat : seats) {
    record.players.push_back({seat.player_id, seat.llm_group, seat.llm_name, 0, {}, {}});
    player_ids.push_back(seat.player_id);
  }

  const std::vector<std::size_t> order = word_order(config);
  const auto ballot_seed = derive_seed(static_cast<std::uint64_t>(config.random_seed), 2);
  std::map<PlayerId, std::vector<HistoryRow>> history;

  for (int n = 1; n <= config.num_rounds; ++n) {
    RoundRecord round;
    round.round_id = n;
    round.word = config.deck.entries[order[static_cast<std::size_t>(n - 1)]];

    RoundContext ctx{config, prompts, seats, judge, round.word, {}, options.concurrent};
    if (config.history_type != HistoryType::kNone) {
      for (PlayerId id : player_ids) {
        ctx.history[id] = HistoryContext{
            config.history_type,
            render_history_csv(history[id], config.history_type, config.history_window)};
      }
    }

    try {
      round.definitions = collect_definitions(ctx);
      Rng rng(derive_seed(ballot_seed, static_cast<std::uint64_t>(n)));
      round.ballot = build_ballot(round.definitions, round.word.reference_definition(), rng);
      if (!round.ballot.allowed.empty()) {
        round.votes = collect_votes(ctx, round.definitions, round.ballot);
      }
    } catch (const JudgeFailure& failure) {
      round.skipped = true;
      round.skip_reason = failure.what();
      round.definitions.clear();
      round.ballot = {};
      round.votes.clear();
    }

    round.scores = score_round(round, player_ids, config.scoring);
    update_ranks(record.players, round.scores);
    round.winners_strategies = compute_winners_strategies(round);
    if (!round.skipped) {
      for (const auto& player : record.players) {
        history[player.player_id].push_back(make_history_row(round, player));
      }
    }
    record.rounds.push_back(std::move(round));
  }

  if (options.store != nullptr) options.store->persist_game(record);
  return record;
}

GameRecord run_game(const GameConfig& config, std::int64_t game_id,
                    const std::vector<PlayerSpec>& players, const AgentBinding& judge_binding,
                    const PromptSet& prompts, const EngineOptions& options) {
  std::vector<std::unique_ptr<Agent>> agents;
  std::vector<Seat> seats;
  PlayerId next_id = 1;
  for (const PlayerSpec& spec : players) {
    agents.push_back(make_agent(spec.binding));
    const std::string name =
        spec.binding.model_name.empty() ? spec.binding.agent_id : spec.binding.model_name;
    seats.push_back({next_id++, agents.back().get(),
                     spec.llm_group.empty() ? name : spec.llm_group, name});
  }
  auto judge = make_agent(judge_binding);
  GameConfig resolved = config;
  if (resolved.judge_model.empty()) {
    resolved.judge_model =
        judge_binding.model_name.empty() ? judge_binding.agent_id : judge_binding.model_name;
  }
  return run_game(resolved, game_id, seats, *judge, prompts, options);
}

}  // namespace balderdash
