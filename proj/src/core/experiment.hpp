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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "domain.hpp"
#include "engine.hpp"
#include "judge.hpp"
#include "metrics.hpp"
#include "prompts.hpp"

namespace balderdash {

enum class ExperimentKind { kLeaderboard, kConvergence, kGameRules };

std::string_view to_string(ExperimentKind kind);

struct SubsetSpec {
  int count = 5;
  int size = 0;  // 0 = whole deck
  // Falls back to the experiment's random_seed.
  std::optional<std::int64_t> seed;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kLeaderboard;
  std::string description;
  std::filesystem::path deck_path;
  WordDeck deck;
  std::string prompt_set = "default";
  std::filesystem::path base_dir;
  SubsetSpec subsets;
  std::optional<int> num_rounds;
  std::int64_t random_seed = 0;
  ScoringRules scoring;
  std::vector<int> game_rules_points{50, 0};
  std::vector<HistoryType> history_types;
  int history_window = 5;
  double temperature = 0.9;
  std::string date;
  bool concurrent_agents = false;
  AgentBinding judge;
  std::vector<PlayerSpec> players;
};

// Parses and validates a config document; every problem found is reported
// in one ValidationError. Paths resolve against base_dir.
ExperimentSpec parse_experiment(const nlohmann::json& config, const std::filesystem::path& base_dir);

struct PlannedGame {
  std::int64_t game_id = 0;
  int subset = 0;
  GameConfig config;
  std::vector<PlayerSpec> players;
  AgentBinding judge;
};

// Leaderboard and convergence: history types x subsets. Game rules: one
// game per correct-definition point value x subset, other rules unchanged.
std::vector<PlannedGame> expand_experiment(const ExperimentSpec& spec, const WordDeck& deck);

struct RunOverrides {
  std::optional<std::int64_t> seed;
  std::optional<HistoryType> history;
  int jobs = 1;
};

struct RunSummary {
  std::filesystem::path out_dir;
  std::size_t games = 0;
  std::string config_sha256;
  std::string prompt_bundle_sha256;
};

inline constexpr const char* kManifestFile = "run_manifest.json";

RunSummary run_experiment(const std::filesystem::path& config_path,
                          const std::filesystem::path& out_dir, const RunOverrides& overrides = {});

struct LabelRunOptions {
  LabelOptions label;
  std::string prompt_set = "default";
};

// Writes the known-word deck to out_path (.json or .csv) and a JSONL verdict
// log next to it. Returns the log path.
std::filesystem::path run_label_known_words(const std::filesystem::path& deck_path,
                                            const std::filesystem::path& agent_binding_path,
                                            const std::filesystem::path& judge_binding_path,
                                            const std::filesystem::path& out_path,
                                            const LabelRunOptions& options = {});

// "precision,recall,f1,accuracy" header and one value row.
std::string judge_scores_csv(const JudgeScores& scores);

JudgeScores run_evaluate_judge(const std::filesystem::path& fixture_path,
                               const std::filesystem::path& judge_binding_path,
                               const std::string& prompt_set = "default");

enum class ReportKind { kLeaderboard, kLkrSeries };

struct ReportOptions {
  ReportKind kind = ReportKind::kLeaderboard;
  SettingKey setting = SettingKey::kHistoryType;
  std::optional<std::string> group;
  std::optional<HistoryType> history;
  // Multiplies reported std values (display only).
  double std_scale = 1.0;
};

struct Report {
  std::string csv;
  nlohmann::json metadata;
};

inline constexpr const char* kLeaderboardHeader =
    "history_type,group,lkr_mean,lkr_std,tdr_mean,tdr_std,dr_mean,dr_std,cgr_mean,cgr_std,"
    "as_mean,as_std";

Report leaderboard_report(const std::vector<GameRecord>& games, const ReportOptions& options);
Report lkr_series_report(const std::vector<GameRecord>& games, const ReportOptions& options);
// Loads the store in run_dir and builds the requested report.
Report build_report(const std::filesystem::path& run_dir, const ReportOptions& options);

}  // namespace balderdash
