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
#include <span>
#include <string>
#include <vector>

#include "domain.hpp"

namespace balderdash {

// Per-round group metrics. `group` is the member list of one LLM group; all
// operations throw ValidationError for an empty group.
double tdr(const RoundRecord& round, std::span<const PlayerId> group);
double lkr(const RoundRecord& round, std::span<const PlayerId> group);
// Undefined (nullopt) when fewer than two players voted.
std::optional<double> dr(const RoundRecord& round, std::span<const PlayerId> group);
double cgr(const RoundRecord& round, std::span<const PlayerId> group);
double avg_score(const RoundRecord& round, std::span<const PlayerId> group);

struct GroupRoundMetrics {
  std::int64_t game_id = 0;
  int round_id = 0;
  std::string group;
  std::string setting;
  double tdr = 0.0;
  double lkr = 0.0;
  std::optional<double> dr;
  double cgr = 0.0;
  double avg_score = 0.0;
};

// Label a game is aggregated under, e.g. its history type.
enum class SettingKey { kHistoryType, kCorrectDefinitionPoints };
std::string setting_label(const GameConfig& config, SettingKey key);

// One entry per (game, non-skipped round, group).
std::vector<GroupRoundMetrics> compute_round_metrics(const std::vector<GameRecord>& games,
                                                     SettingKey key = SettingKey::kHistoryType);

// Mean LKR of the group at each round index across games. Skipped rounds
// are left out of that index's mean; an index with no data yields nullopt.
// Throws ValidationError when the games differ in round count.
std::vector<std::optional<double>> lkr_series(const std::vector<GameRecord>& games,
                                              const std::string& group);

struct SeriesPoint {
  int round_index = 0;
  double mean = 0.0;
  double std = 0.0;
  int sample_count = 0;
};

// lkr_series with the population std across games at each index.
std::vector<SeriesPoint> lkr_series_with_spread(const std::vector<GameRecord>& games,
                                                const std::string& group);

struct ConvergenceParams {
  double epsilon = 0.05;
  int t_threshold = 0;
};

// True iff every element with 1-based index n > T exceeds 1 - epsilon.
bool check_convergence(std::span<const double> series, const ConvergenceParams& params);

struct AggregateCell {
  double mean = 0.0;
  double std = 0.0;  // population
  int sample_count = 0;
};

// Absent when no defined value exists.
std::optional<AggregateCell> summarize(std::span<const double> values);

struct AggregateRow {
  std::string setting;
  std::string group;
  std::optional<AggregateCell> lkr, tdr, dr, cgr, avg_score;
};

// Groups by (setting, group) in first-seen order.
std::vector<AggregateRow> aggregate(const std::vector<GroupRoundMetrics>& metrics);

}  // namespace balderdash
