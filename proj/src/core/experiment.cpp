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

#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <future>
#include <set>
#include <thread>

#include "csv.hpp"
#include "errors.hpp"
#include "hashing.hpp"
#include "serialization.hpp"
#include "store.hpp"

namespace balderdash {

namespace {

using nlohmann::json;

std::string joined(std::string_view head, const std::vector<std::string>& errors) {
  std::string message(head);
  for (const auto& error : errors) message += "\n  " + error;
  return message;
}

std::vector<HistoryType> default_history_types(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kLeaderboard:
      return {HistoryType::kNone, HistoryType::kMini, HistoryType::kFull};
    case ExperimentKind::kConvergence:
      return {HistoryType::kMini, HistoryType::kFull};
    case ExperimentKind::kGameRules:
      return {HistoryType::kNone};
  }
  return {HistoryType::kNone};
}

// Reads an optional typed field, recording a type error instead of throwing.
template <typename T>
void read_field(const json& object, const char* key, T& target, std::vector<std::string>& errors,
                const std::string& where = "config") {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return;
  try {
    target = it->get<T>();
  } catch (const json::exception&) {
    errors.push_back(where + ": '" + key + "' has the wrong type");
  }
}

AgentBinding read_binding(json item, const std::string& default_id, double temperature,
                          std::vector<std::string>& errors, const std::string& where) {
  if (item.is_object()) {
    if (!item.contains("agent_id")) item["agent_id"] = default_id;
    if (!item.contains("temperature")) item["temperature"] = temperature;
  }
  return parse_binding(item, errors, where);
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kLeaderboard:
      return "leaderboard";
    case ExperimentKind::kConvergence:
      return "convergence";
    case ExperimentKind::kGameRules:
      return "game_rules";
  }
  return "leaderboard";
}

ExperimentSpec parse_experiment(const json& config, const std::filesystem::path& base_dir) {
  if (!config.is_object()) throw ValidationError("config must be a JSON object");
  std::vector<std::string> errors;
  ExperimentSpec spec;
  spec.base_dir = base_dir;

  static const std::set<std::string> kKnown{
      "experiment", "description", "deck", "prompt_set", "subsets", "num_rounds",
      "random_seed", "scoring", "game_rules_points", "history_types", "history_window",
      "temperature", "date", "concurrent_agents", "judge", "players"};
  for (auto it = config.begin(); it != config.end(); ++it) {
    if (!kKnown.contains(it.key())) errors.push_back("config: unknown key '" + it.key() + "'");
  }

  std::string kind;
  read_field(config, "experiment", kind, errors);
  bool kind_known = true;
  if (kind == "leaderboard") {
    spec.kind = ExperimentKind::kLeaderboard;
  } else if (kind == "convergence") {
    spec.kind = ExperimentKind::kConvergence;
  } else if (kind == "game_rules") {
    spec.kind = ExperimentKind::kGameRules;
  } else {
    kind_known = false;
    errors.push_back("config: 'experiment' must be leaderboard, convergence or game_rules");
  }

  read_field(config, "description", spec.description, errors);
  read_field(config, "prompt_set", spec.prompt_set, errors);
  read_field(config, "random_seed", spec.random_seed, errors);
  read_field(config, "history_window", spec.history_window, errors);
  read_field(config, "temperature", spec.temperature, errors);
  read_field(config, "date", spec.date, errors);
  read_field(config, "concurrent_agents", spec.concurrent_agents, errors);
  read_field(config, "game_rules_points", spec.game_rules_points, errors);
  if (config.contains("num_rounds")) {
    int rounds = 0;
    read_field(config, "num_rounds", rounds, errors);
    spec.num_rounds = rounds;
  }
  if (auto it = config.find("scoring"); it != config.end()) {
    read_field(*it, "correct_definition_points", spec.scoring.correct_definition_points, errors,
               "scoring");
    read_field(*it, "correct_vote_points", spec.scoring.correct_vote_points, errors, "scoring");
    read_field(*it, "receiving_vote_points", spec.scoring.receiving_vote_points, errors, "scoring");
  }
  if (auto it = config.find("subsets"); it != config.end()) {
    read_field(*it, "count", spec.subsets.count, errors, "subsets");
    read_field(*it, "size", spec.subsets.size, errors, "subsets");
    if (it->contains("seed")) {
      std::int64_t seed = 0;
      read_field(*it, "seed", seed, errors, "subsets");
      spec.subsets.seed = seed;
    }
  }

  spec.history_types = default_history_types(spec.kind);
  if (auto it = config.find("history_types"); it != config.end()) {
    spec.history_types.clear();
    if (!it->is_array() || it->empty()) {
      errors.push_back("config: 'history_types' must be a non-empty array");
    } else {
      for (const auto& item : *it) {
        try {
          spec.history_types.push_back(parse_history_type(item.get<std::string>()));
        } catch (const std::exception& error) {
          errors.push_back(std::string("config: history_types: ") + error.what());
        }
      }
    }
  }

  if (!(spec.temperature >= 0.0 && spec.temperature <= 2.0)) {
    errors.push_back("config: temperature must lie in [0, 2]");
  }
  if (spec.history_window < 1) errors.push_back("config: history_window must be >= 1");
  if (spec.subsets.count < 1) errors.push_back("subsets: count must be positive");
  if (spec.subsets.size < 0) errors.push_back("subsets: size must be positive");
  if (spec.game_rules_points.empty()) errors.push_back("config: game_rules_points is empty");

  // Deck.
  std::string deck;
  read_field(config, "deck", deck, errors);
  if (deck.empty()) {
    errors.push_back("config: 'deck' path is required");
  } else {
    spec.deck_path = std::filesystem::path(deck).is_relative() ? base_dir / deck
                                                               : std::filesystem::path(deck);
    if (!std::filesystem::exists(spec.deck_path)) {
      errors.push_back("deck file '" + spec.deck_path.string() + "' does not exist");
    } else {
      try {
        spec.deck = load_deck(spec.deck_path);
        for (const auto& violation : validate_deck(spec.deck)) errors.push_back("deck: " + violation);
        const int size = spec.subsets.size == 0 ? static_cast<int>(spec.deck.size())
                                                : spec.subsets.size;
        if (static_cast<std::size_t>(size) > spec.deck.size()) {
          errors.push_back("subsets: size " + std::to_string(size) + " exceeds deck size " +
                           std::to_string(spec.deck.size()));
        }
        if (spec.num_rounds && (*spec.num_rounds < 1 || *spec.num_rounds > size)) {
          errors.push_back("num_rounds must lie in [1, subset size " + std::to_string(size) + "]");
        }
        if (size == 0) errors.push_back("deck is empty");
      } catch (const Error& error) {
        errors.push_back(error.what());
      }
    }
  }

  try {
    PromptSet::resolve(spec.prompt_set, base_dir);
  } catch (const Error& error) {
    errors.push_back(error.what());
  }

  // Agents.
  if (auto it = config.find("judge"); it == config.end()) {
    errors.push_back("config: 'judge' binding is required");
  } else {
    spec.judge = read_binding(*it, "judge", spec.temperature, errors, "judge");
  }
  if (auto it = config.find("players"); it == config.end() || !it->is_array() || it->empty()) {
    errors.push_back("config: 'players' must be a non-empty array");
  } else {
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string where = "players[" + std::to_string(i) + "]";
      PlayerSpec player;
      player.binding = read_binding((*it)[i], "player" + std::to_string(i + 1), spec.temperature,
                                    errors, where);
      if ((*it)[i].is_object()) read_field((*it)[i], "llm_group", player.llm_group, errors, where);
      if (player.llm_group.empty()) {
        player.llm_group = player.binding.model_name.empty() ? player.binding.agent_id
                                                             : player.binding.model_name;
      }
      spec.players.push_back(std::move(player));
    }
  }

  const std::size_t seats = spec.players.size();
  std::set<std::string> groups;
  for (const auto& player : spec.players) groups.insert(player.llm_group);
  if (seats > 8) errors.push_back("at most 8 players fit a single-digit ballot");
  if (kind_known && !spec.players.empty()) {
    switch (spec.kind) {
      case ExperimentKind::kLeaderboard:
        if (seats < 2) errors.push_back("leaderboard needs at least two players");
        if (groups.size() != seats) {
          errors.push_back("leaderboard players must use distinct LLM groups");
        }
        break;
      case ExperimentKind::kConvergence:
        if (groups.size() > 1) errors.push_back("convergence players must share one LLM group");
        break;
      case ExperimentKind::kGameRules:
        if (seats != 1) errors.push_back("game_rules runs exactly one player");
        break;
    }
  }

  if (!errors.empty()) throw ValidationError(joined("invalid experiment config:", errors));
  return spec;
}

std::vector<PlannedGame> expand_experiment(const ExperimentSpec& spec, const WordDeck& deck) {
  const int size = spec.subsets.size == 0 ? static_cast<int>(deck.size()) : spec.subsets.size;
  const std::vector<WordDeck> subsets = sample_subsets(
      deck, spec.subsets.count, size, spec.subsets.seed.value_or(spec.random_seed));
  const std::string judge_model =
      spec.judge.model_name.empty() ? spec.judge.agent_id : spec.judge.model_name;

  std::vector<PlannedGame> games;
  auto plan = [&](int subset, HistoryType history, const ScoringRules& scoring) {
    PlannedGame game;
    game.game_id = static_cast<std::int64_t>(games.size()) + 1;
    game.subset = subset + 1;
    GameConfig& config = game.config;
    config.description = spec.description;
    config.experiment = std::string(to_string(spec.kind));
    config.num_rounds = spec.num_rounds.value_or(size);
    config.judge_model = judge_model;
    config.random_seed = spec.random_seed + subset;
    config.scoring = scoring;
    config.history_type = history;
    config.history_window = spec.history_window;
    config.temperature = spec.temperature;
    config.deck = subsets[static_cast<std::size_t>(subset)];
    config.prompt_set = spec.prompt_set;
    config.date = spec.date;
    game.players = spec.players;
    game.judge = spec.judge;
    games.push_back(std::move(game));
  };

  if (spec.kind == ExperimentKind::kGameRules) {
    for (int points : spec.game_rules_points) {
      ScoringRules scoring = spec.scoring;
      scoring.correct_definition_points = points;
      for (const HistoryType history : spec.history_types) {
        for (int s = 0; s < spec.subsets.count; ++s) plan(s, history, scoring);
      }
    }
  } else {
    for (const HistoryType history : spec.history_types) {
      for (int s = 0; s < spec.subsets.count; ++s) plan(s, history, spec.scoring);
    }
  }
  return games;
}

RunSummary run_experiment(const std::filesystem::path& config_path,
                          const std::filesystem::path& out_dir, const RunOverrides& overrides) {
  if (!std::filesystem::exists(config_path)) {
    throw ValidationError("config file '" + config_path.string() + "' does not exist");
  }
  const std::string text = read_text_file(config_path);
  json config;
  try {
    config = json::parse(text);
  } catch (const json::parse_error& error) {
    throw ValidationError("config '" + config_path.string() + "' is not valid JSON: " + error.what());
  }
  if (overrides.jobs < 1) throw ValidationError("--jobs must be at least 1");

  ExperimentSpec spec = parse_experiment(config, config_path.parent_path());
  if (overrides.seed) spec.random_seed = *overrides.seed;
  if (overrides.history) spec.history_types = {*overrides.history};
  const PromptSet prompts = PromptSet::resolve(spec.prompt_set, spec.base_dir);
  const std::vector<PlannedGame> planned = expand_experiment(spec, spec.deck);

  if (std::filesystem::exists(out_dir / kGamesFile) &&
      std::filesystem::file_size(out_dir / kGamesFile) > 0) {
    throw ValidationError("run directory '" + out_dir.string() + "' already holds games");
  }
  RunStore store(out_dir);

  std::vector<std::promise<GameRecord>> promises(planned.size());
  std::vector<std::future<GameRecord>> results;
  for (auto& promise : promises) results.push_back(promise.get_future());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < planned.size(); i = next++) {
      try {
        const PlannedGame& game = planned[i];
        promises[i].set_value(run_game(game.config, game.game_id, game.players, game.judge,
                                       prompts, {spec.concurrent_agents, nullptr}));
      } catch (...) {
        promises[i].set_exception(std::current_exception());
      }
    }
  };
  std::vector<std::jthread> workers;
  const int threads = std::min<int>(overrides.jobs, static_cast<int>(planned.size()));
  for (int t = 0; t < threads; ++t) workers.emplace_back(worker);

  std::exception_ptr failure;
  for (auto& result : results) {
    try {
      GameRecord record = result.get();
      if (!failure) store.persist_game(record);
    } catch (...) {
      if (!failure) failure = std::current_exception();
    }
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);

  RunSummary summary{out_dir, planned.size(), sha256_hex(text), prompts.digest()};
  json games = json::array();
  for (const auto& game : planned) {
    games.push_back({{"game_id", game.game_id},
                     {"subset", game.subset},
                     {"deck", game.config.deck.name},
                     {"history_type", to_string(game.config.history_type)},
                     {"scoring", game.config.scoring},
                     {"random_seed", game.config.random_seed}});
  }
  const json manifest{{"schema_version", kSchemaVersion},
                      {"experiment", to_string(spec.kind)},
                      {"config_sha256", summary.config_sha256},
                      {"prompt_bundle_sha256", summary.prompt_bundle_sha256},
                      {"seed", spec.random_seed},
                      {"config", config},
                      {"games", games}};
  write_text_file(out_dir / kManifestFile, manifest.dump(2) + "\n");
  return summary;
}

std::filesystem::path run_label_known_words(const std::filesystem::path& deck_path,
                                            const std::filesystem::path& agent_binding_path,
                                            const std::filesystem::path& judge_binding_path,
                                            const std::filesystem::path& out_path,
                                            const LabelRunOptions& options) {
  std::vector<std::string> errors;
  WordDeck deck;
  AgentBinding agent_binding;
  AgentBinding judge_binding;
  std::optional<PromptSet> prompts;
  auto attempt = [&](auto&& fn) {
    try {
      fn();
    } catch (const Error& error) {
      errors.push_back(error.what());
    }
  };
  attempt([&] {
    deck = load_deck(deck_path);
    for (const auto& violation : validate_deck(deck)) errors.push_back("deck: " + violation);
  });
  attempt([&] { agent_binding = load_binding(agent_binding_path); });
  attempt([&] { judge_binding = load_binding(judge_binding_path); });
  attempt([&] { prompts = PromptSet::resolve(options.prompt_set); });
  if (options.label.samples < 1 || options.label.threshold < 1 ||
      options.label.threshold > options.label.samples) {
    errors.push_back("threshold must lie in [1, samples]");
  }
  if (!errors.empty()) throw ValidationError(joined("label-known-words:", errors));

  auto agent = make_agent(agent_binding);
  auto judge = make_agent(judge_binding);
  LabelResult result = label_known_words(deck, *agent, *judge, *prompts, options.label);
  result.deck.name = out_path.stem().string();

  write_text_file(out_path, out_path.extension() == ".csv" ? deck_to_csv_text(result.deck)
                                                           : deck_to_json_text(result.deck));
  std::string log;
  for (const auto& label : result.log) {
    log += json{{"word", label.word},
                {"verdicts", label.verdicts},
                {"definitions", label.definitions},
                {"true_count", label.true_count},
                {"known", label.known},
                {"error", label.error}}
               .dump() +
           "\n";
  }
  std::filesystem::path log_path = out_path;
  log_path.replace_extension(".verdicts.jsonl");
  write_text_file(log_path, log);

  // An agent that never answered leaves every word errored; surface that.
  const bool all_failed =
      !result.log.empty() && std::all_of(result.log.begin(), result.log.end(),
                                         [](const WordLabel& label) { return !label.error.empty(); });
  if (all_failed) throw TransportError("every word failed: " + result.log.front().error);
  return log_path;
}

std::string judge_scores_csv(const JudgeScores& scores) {
  return "precision,recall,f1,accuracy\n" +
         csv_row({format_real(scores.precision), format_real(scores.recall),
                  format_real(scores.f1), format_real(scores.accuracy)}) +
         "\n";
}

JudgeScores run_evaluate_judge(const std::filesystem::path& fixture_path,
                               const std::filesystem::path& judge_binding_path,
                               const std::string& prompt_set) {
  const auto dataset = load_judge_fixture(fixture_path);
  if (dataset.empty()) throw ValidationError("judge fixture '" + fixture_path.string() + "' is empty");
  const AgentBinding binding = load_binding(judge_binding_path);
  const PromptSet prompts = PromptSet::resolve(prompt_set);
  auto judge = make_agent(binding);
  return evaluate_judge(*judge, prompts, dataset);
}

namespace {

std::string cell_mean(const std::optional<AggregateCell>& cell) {
  return cell ? format_real(cell->mean) : "";
}

std::string cell_std(const std::optional<AggregateCell>& cell, double scale) {
  return cell ? format_real(cell->std * scale) : "";
}

int history_rank(const std::string& label) {
  if (label == "none") return 0;
  if (label == "mini") return 1;
  if (label == "full") return 2;
  return 3;
}

json base_metadata(std::string_view kind, const ReportOptions& options, std::size_t games) {
  return json{{"kind", kind},
              {"std", "population"},
              {"samples", "every (game, round) pair; skipped rounds excluded"},
              {"dr_rule", "rounds with fewer than two voters have no DR and are excluded"},
              {"std_scale", options.std_scale},
              {"games", games}};
}

}  // namespace

Report leaderboard_report(const std::vector<GameRecord>& games, const ReportOptions& options) {
  std::vector<AggregateRow> rows = aggregate(compute_round_metrics(games, options.setting));
  if (options.setting == SettingKey::kHistoryType) {
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return history_rank(a.setting) < history_rank(b.setting);
    });
  }
  Report report;
  report.metadata = base_metadata("leaderboard", options, games.size());
  std::string header = kLeaderboardHeader;
  if (options.setting == SettingKey::kCorrectDefinitionPoints) {
    header.replace(0, std::string_view("history_type").size(), "correct_definition_points");
  }
  report.csv = header + "\n";
  json absent = json::array();
  for (const auto& row : rows) {
    const std::pair<const char*, const std::optional<AggregateCell>*> cells[] = {
        {"lkr", &row.lkr}, {"tdr", &row.tdr}, {"dr", &row.dr}, {"cgr", &row.cgr}, {"as", &row.avg_score}};
    std::vector<std::string> fields{row.setting, row.group};
    for (const auto& [name, cell] : cells) {
      fields.push_back(cell_mean(*cell));
      fields.push_back(cell_std(*cell, options.std_scale));
      if (!cell->has_value()) {
        absent.push_back({{"setting", row.setting}, {"group", row.group}, {"metric", name}});
      }
    }
    report.csv += csv_row(fields) + "\n";
  }
  report.metadata["absent_cells"] = absent;
  return report;
}

Report lkr_series_report(const std::vector<GameRecord>& games, const ReportOptions& options) {
  std::vector<GameRecord> selected;
  std::set<std::string> histories;
  for (const auto& game : games) {
    if (options.history && game.config.history_type != *options.history) continue;
    if (options.group && game.group_members(*options.group).empty()) continue;
    histories.emplace(to_string(game.config.history_type));
    selected.push_back(game);
  }
  if (selected.empty()) throw ValidationError("no stored games match the report selection");
  if (histories.size() > 1) {
    std::string list;
    for (const auto& h : histories) list += " " + h;
    throw ValidationError("games mix history types; pick one with --history:" + list);
  }
  std::string group;
  if (options.group) {
    group = *options.group;
  } else {
    std::set<std::string> groups;
    for (const auto& game : selected) {
      for (const auto& g : game.groups()) groups.insert(g);
    }
    if (groups.size() > 1) {
      std::string list;
      for (const auto& g : groups) list += " " + g;
      throw ValidationError("games hold several LLM groups; pick one with --group:" + list);
    }
    group = *groups.begin();
  }

  Report report;
  report.metadata = base_metadata("lkr_series", options, selected.size());
  report.metadata["group"] = group;
  report.metadata["history_type"] = *histories.begin();
  report.metadata["std"] = "population across games at each round index";
  report.csv = "round_index,mean,std\n";
  for (const auto& point : lkr_series_with_spread(selected, group)) {
    const bool has_data = point.sample_count > 0;
    report.csv += csv_row({std::to_string(point.round_index),
                           has_data ? format_real(point.mean) : "",
                           has_data ? format_real(point.std * options.std_scale) : ""}) +
                  "\n";
  }
  return report;
}

Report build_report(const std::filesystem::path& run_dir, const ReportOptions& options) {
  if (!std::filesystem::is_directory(run_dir)) {
    throw ValidationError("run directory '" + run_dir.string() + "' does not exist");
  }
  const RunStore store(run_dir);
  const std::vector<GameRecord> games = store.load_games();
  if (games.empty()) throw ValidationError("run directory '" + run_dir.string() + "' holds no games");
  return options.kind == ReportKind::kLeaderboard ? leaderboard_report(games, options)
                                                  : lkr_series_report(games, options);
}

}  // namespace balderdash
