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

#include "metrics.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace balderdash {

namespace {

void require_group(std::span<const PlayerId> group) {
  if (group.empty()) throw ValidationError("metric requested for an empty group");
}

template <typename Pred>
double member_ratio(const RoundRecord& round, std::span<const PlayerId> group, Pred pred) {
  require_group(group);
  int hits = 0;
  for (PlayerId player : group) {
    if (pred(round, player)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(group.size());
}

bool judged_true(const RoundRecord& round, PlayerId player) {
  auto it = round.definitions.find(player);
  return it != round.definitions.end() && it->second.judge_decision;
}

bool knows_one(const RoundRecord& round, PlayerId player) {
  auto it = round.definitions.find(player);
  return it != round.definitions.end() && it->second.llm_knows_one;
}

bool guessed_reference(const RoundRecord& round, PlayerId player) {
  auto it = round.votes.find(player);
  return it != round.votes.end() && it->second == kReferenceVote;
}

}  // namespace

double tdr(const RoundRecord& round, std::span<const PlayerId> group) {
  return member_ratio(round, group, judged_true);
}

double lkr(const RoundRecord& round, std::span<const PlayerId> group) {
  return member_ratio(round, group, knows_one);
}

std::optional<double> dr(const RoundRecord& round, std::span<const PlayerId> group) {
  require_group(group);
  if (round.votes.size() <= 1) return std::nullopt;
  const double others = static_cast<double>(round.votes.size() - 1);
  double sum = 0.0;
  for (PlayerId player : group) sum += round.votes_received(player) / others;
  return sum / static_cast<double>(group.size());
}

double cgr(const RoundRecord& round, std::span<const PlayerId> group) {
  return member_ratio(round, group, guessed_reference);
}

double avg_score(const RoundRecord& round, std::span<const PlayerId> group) {
  require_group(group);
  long total = 0;
  for (PlayerId player : group) {
    auto it = round.scores.find(player);
    if (it != round.scores.end()) total += it->second;
  }
  return static_cast<double>(total) / static_cast<double>(group.size());
}

std::string setting_label(const GameConfig& config, SettingKey key) {
  if (key == SettingKey::kCorrectDefinitionPoints) {
    return std::to_string(config.scoring.correct_definition_points);
  }
  return std::string(to_string(config.history_type));
}

std::vector<GroupRoundMetrics> compute_round_metrics(const std::vector<GameRecord>& games,
                                                     SettingKey key) {
  std::vector<GroupRoundMetrics> out;
  for (const GameRecord& game : games) {
    const std::string setting = setting_label(game.config, key);
    for (const std::string& group : game.groups()) {
      const std::vector<PlayerId> members = game.group_members(group);
      for (const RoundRecord& round : game.rounds) {
        if (round.skipped) continue;
        out.push_back({game.game_id, round.round_id, group, setting, tdr(round, members),
                       lkr(round, members), dr(round, members), cgr(round, members),
                       avg_score(round, members)});
      }
    }
  }
  return out;
}

std::vector<std::optional<double>> lkr_series(const std::vector<GameRecord>& games,
                                              const std::string& group) {
  std::vector<std::optional<double>> series;
  for (const auto& point : lkr_series_with_spread(games, group)) {
    series.push_back(point.sample_count > 0 ? std::optional(point.mean) : std::nullopt);
  }
  return series;
}

std::vector<SeriesPoint> lkr_series_with_spread(const std::vector<GameRecord>& games,
                                                const std::string& group) {
  if (games.empty()) return {};
  const std::size_t rounds = games.front().rounds.size();
  for (const GameRecord& game : games) {
    if (game.rounds.size() != rounds) {
      throw ValidationError("lkr series needs games with equal round counts (game " +
                            std::to_string(game.game_id) + " has " +
                            std::to_string(game.rounds.size()) + ", expected " +
                            std::to_string(rounds) + ")");
    }
  }
  std::vector<SeriesPoint> series;
  for (std::size_t n = 0; n < rounds; ++n) {
    std::vector<double> values;
    for (const GameRecord& game : games) {
      const auto members = game.group_members(group);
      if (members.empty() || game.rounds[n].skipped) continue;
      values.push_back(lkr(game.rounds[n], members));
    }
    SeriesPoint point;
    point.round_index = static_cast<int>(n) + 1;
    if (auto cell = summarize(values)) {
      point.mean = cell->mean;
      point.std = cell->std;
      point.sample_count = cell->sample_count;
    }
    series.push_back(point);
  }
  return series;
}

bool check_convergence(std::span<const double> series, const ConvergenceParams& params) {
  if (!(params.epsilon > 0.0 && params.epsilon < 1.0)) {
    throw ValidationError("epsilon must lie in (0, 1)");
  }
  if (params.t_threshold < 0 || static_cast<std::size_t>(params.t_threshold) >= series.size()) {
    throw ValidationError("convergence threshold T must be below the series length");
  }
  const double floor = 1.0 - params.epsilon;
  for (std::size_t n = static_cast<std::size_t>(params.t_threshold) + 1; n <= series.size(); ++n) {
    if (!(series[n - 1] > floor)) return false;
  }
  return true;
}

std::optional<AggregateCell> summarize(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double squares = 0.0;
  for (double v : values) squares += (v - mean) * (v - mean);
  return AggregateCell{mean, std::sqrt(squares / static_cast<double>(values.size())),
                       static_cast<int>(values.size())};
}

std::vector<AggregateRow> aggregate(const std::vector<GroupRoundMetrics>& metrics) {
  struct Samples {
    std::vector<double> lkr, tdr, dr, cgr, avg_score;
  };
  std::vector<std::pair<std::string, std::string>> keys;
  std::map<std::pair<std::string, std::string>, Samples> samples;
  for (const auto& m : metrics) {
    const auto key = std::make_pair(m.setting, m.group);
    if (!samples.contains(key)) keys.push_back(key);
    Samples& s = samples[key];
    s.lkr.push_back(m.lkr);
    s.tdr.push_back(m.tdr);
    if (m.dr) s.dr.push_back(*m.dr);
    s.cgr.push_back(m.cgr);
    s.avg_score.push_back(m.avg_score);
  }
  std::vector<AggregateRow> rows;
  for (const auto& key : keys) {
    const Samples& s = samples.at(key);
    rows.push_back({key.first, key.second, summarize(s.lkr), summarize(s.tdr), summarize(s.dr),
                    summarize(s.cgr), summarize(s.avg_score)});
  }
  return rows;
}

}  // namespace balderdash
