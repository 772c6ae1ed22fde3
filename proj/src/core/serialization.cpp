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

#include "serialization.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "csv.hpp"
#include "errors.hpp"

namespace balderdash {

namespace {

std::string join_errors(std::string_view head, const std::vector<std::string>& errors) {
  std::string message(head);
  for (const auto& error : errors) message += "\n  " + error;
  return message;
}

json parse_json_text(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& error) {
    throw ValidationError(std::string(what) + ": invalid JSON: " + error.what());
  }
}

template <typename T>
T field_or(const json& object, const char* key, T fallback) {
  auto it = object.find(key);
  return it == object.end() || it->is_null() ? fallback : it->get<T>();
}

std::map<std::string, json> keyed(const json& object) {
  std::map<std::string, json> out;
  for (auto it = object.begin(); it != object.end(); ++it) out.emplace(it.key(), it.value());
  return out;
}

}  // namespace

void to_json(json& out, const WordEntry& entry) {
  out = json{{"word", entry.word}, {"pos", entry.pos}, {"definitions", entry.definitions}};
  if (entry.frequency) out["frequency"] = *entry.frequency;
}

void from_json(const json& in, WordEntry& entry) {
  if (!in.is_object()) throw ValidationError("word entry must be a JSON object");
  if (!in.contains("word") || !in["word"].is_string()) {
    throw ValidationError("word entry needs a string 'word'");
  }
  if (!in.contains("pos") || !in["pos"].is_string()) {
    throw ValidationError("word entry '" + in["word"].get<std::string>() +
                          "' needs a string 'pos'");
  }
  if (!in.contains("definitions") || !in["definitions"].is_array()) {
    throw ValidationError("word entry '" + in["word"].get<std::string>() +
                          "' needs a 'definitions' array");
  }
  entry.word = in["word"].get<std::string>();
  entry.pos = in["pos"].get<std::string>();
  entry.definitions.clear();
  for (const auto& definition : in["definitions"]) {
    if (!definition.is_string()) {
      throw ValidationError("word entry '" + entry.word + "' has a non-string definition");
    }
    entry.definitions.push_back(definition.get<std::string>());
  }
  entry.frequency.reset();
  if (auto it = in.find("frequency"); it != in.end() && !it->is_null()) {
    if (!it->is_number()) {
      throw ValidationError("word entry '" + entry.word + "' has a non-numeric frequency");
    }
    entry.frequency = it->get<double>();
  }
}

void to_json(json& out, const ScoringRules& rules) {
  out = json{{"correct_definition_points", rules.correct_definition_points},
             {"correct_vote_points", rules.correct_vote_points},
             {"receiving_vote_points", rules.receiving_vote_points}};
}

void from_json(const json& in, ScoringRules& rules) {
  rules.correct_definition_points = in.at("correct_definition_points").get<int>();
  rules.correct_vote_points = in.at("correct_vote_points").get<int>();
  rules.receiving_vote_points = in.at("receiving_vote_points").get<int>();
}

namespace {

void fill_avg_frequency(WordDeck& deck) {
  double sum = 0.0;
  int count = 0;
  for (const auto& entry : deck.entries) {
    if (entry.frequency) {
      sum += *entry.frequency;
      ++count;
    }
  }
  if (count > 0) deck.avg_frequency = sum / count;
}

}  // namespace

WordDeck parse_deck_json(std::string_view text, std::string name) {
  const json doc = parse_json_text(text, "deck '" + name + "'");
  if (!doc.is_array()) throw ValidationError("deck '" + name + "' must be a JSON array");
  WordDeck deck;
  deck.name = std::move(name);
  std::vector<std::string> errors;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    try {
      deck.entries.push_back(doc[i].get<WordEntry>());
    } catch (const ValidationError& error) {
      errors.push_back("entry #" + std::to_string(i + 1) + ": " + error.what());
    }
  }
  if (!errors.empty()) throw ValidationError(join_errors("deck '" + deck.name + "':", errors));
  fill_avg_frequency(deck);
  return deck;
}

WordDeck parse_deck_csv(std::string_view text, std::string name) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw ValidationError("deck '" + name + "' has no CSV header");
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < rows[0].size(); ++i) column[trim(rows[0][i])] = i;
  for (const char* required : {"word", "pos", "definitions"}) {
    if (!column.contains(required)) {
      throw ValidationError("deck '" + name + "' CSV lacks column '" + required + "'");
    }
  }
  WordDeck deck;
  deck.name = std::move(name);
  std::vector<std::string> errors;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto cell = [&](const std::string& key) -> std::string {
      auto it = column.find(key);
      return it == column.end() || it->second >= row.size() ? "" : row[it->second];
    };
    WordEntry entry;
    entry.word = cell("word");
    entry.pos = cell("pos");
    const std::string definitions = cell("definitions");
    std::size_t start = 0;
    while (!definitions.empty()) {
      const std::size_t next = definitions.find(kDefinitionDelimiter, start);
      entry.definitions.push_back(definitions.substr(start, next - start));
      if (next == std::string::npos) break;
      start = next + kDefinitionDelimiter.size();
    }
    if (const std::string frequency = trim(cell("frequency")); !frequency.empty()) {
      try {
        std::size_t used = 0;
        entry.frequency = std::stod(frequency, &used);
        if (used != frequency.size()) throw std::invalid_argument("trailing text");
      } catch (const std::exception&) {
        errors.push_back("line " + std::to_string(r + 1) + ": bad frequency '" + frequency + "'");
      }
    }
    deck.entries.push_back(std::move(entry));
  }
  if (!errors.empty()) throw ValidationError(join_errors("deck '" + deck.name + "':", errors));
  fill_avg_frequency(deck);
  return deck;
}

WordDeck load_deck(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  const std::string name = path.stem().string();
  if (path.extension() == ".csv") return parse_deck_csv(text, name);
  return parse_deck_json(text, name);
}

std::string deck_to_json_text(const WordDeck& deck) {
  return json(deck.entries).dump(2) + "\n";
}

std::string deck_to_csv_text(const WordDeck& deck) {
  std::string out = "word,pos,definitions,frequency\n";
  for (const auto& entry : deck.entries) {
    std::string joined;
    for (std::size_t i = 0; i < entry.definitions.size(); ++i) {
      if (i > 0) joined += kDefinitionDelimiter;
      joined += entry.definitions[i];
    }
    out += csv_row({entry.word, entry.pos, joined,
                    entry.frequency ? format_real(*entry.frequency) : ""}) +
           "\n";
  }
  return out;
}

AgentBinding parse_binding(const json& in, std::vector<std::string>& errors,
                           const std::string& where) {
  AgentBinding binding;
  if (!in.is_object()) {
    errors.push_back(where + ": agent binding must be an object");
    return binding;
  }
  static const std::set<std::string> kKnown{
      "agent_id", "kind", "model_name", "endpoint", "api_key_env", "temperature",
      "max_new_tokens", "supports_system_role", "retry_limit", "timeout_seconds",
      "backoff_initial_ms", "script", "llm_group"};
  for (const auto& [key, value] : keyed(in)) {
    if (!kKnown.contains(key)) errors.push_back(where + ": unknown key '" + key + "'");
  }
  try {
    binding.agent_id = field_or<std::string>(in, "agent_id", "");
    binding.model_name = field_or<std::string>(in, "model_name", "");
    const std::string kind = field_or<std::string>(in, "kind", "scripted");
    if (kind == "remote") {
      binding.kind = AgentKind::kRemote;
    } else if (kind == "scripted") {
      binding.kind = AgentKind::kScripted;
    } else {
      errors.push_back(where + ": kind must be 'remote' or 'scripted'");
    }
    binding.endpoint = field_or<std::string>(in, "endpoint", "");
    binding.api_key_env = field_or<std::string>(in, "api_key_env", "");
    binding.temperature = field_or<double>(in, "temperature", binding.temperature);
    binding.max_new_tokens = field_or<int>(in, "max_new_tokens", binding.max_new_tokens);
    binding.supports_system_role =
        field_or<bool>(in, "supports_system_role", binding.supports_system_role);
    binding.retry_limit = field_or<int>(in, "retry_limit", binding.retry_limit);
    binding.timeout_seconds = field_or<double>(in, "timeout_seconds", binding.timeout_seconds);
    binding.backoff_initial_ms = field_or<int>(in, "backoff_initial_ms", binding.backoff_initial_ms);
    if (auto script = in.find("script"); script != in.end()) {
      binding.script.responses =
          field_or<std::vector<std::string>>(*script, "responses", {});
      binding.script.by_word =
          field_or<std::map<std::string, std::vector<std::string>>>(*script, "by_word", {});
      binding.script.heuristic_fallback = field_or<bool>(*script, "heuristic", false);
    }
  } catch (const json::exception& error) {
    errors.push_back(where + ": " + error.what());
    return binding;
  }
  for (auto& violation : validate_binding(binding)) errors.push_back(where + ": " + violation);
  return binding;
}

AgentBinding load_binding(const std::filesystem::path& path) {
  std::vector<std::string> errors;
  AgentBinding binding =
      parse_binding(parse_json_text(read_text_file(path), path.string()), errors, path.string());
  if (!errors.empty()) throw ValidationError(join_errors("invalid agent binding:", errors));
  return binding;
}

std::vector<LabeledJudgeExample> parse_judge_fixture(std::string_view text) {
  const json doc = parse_json_text(text, "judge fixture");
  if (!doc.is_array()) throw ValidationError("judge fixture must be a JSON array");
  std::vector<LabeledJudgeExample> out;
  std::vector<std::string> errors;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& item = doc[i];
    const std::string where = "example #" + std::to_string(i + 1);
    if (!item.is_object()) {
      errors.push_back(where + ": not an object");
      continue;
    }
    LabeledJudgeExample example;
    bool ok = true;
    for (auto [key, target] : {std::pair{"word", &example.word},
                               std::pair{"reference_definition", &example.reference_definition},
                               std::pair{"candidate_definition", &example.candidate_definition}}) {
      if (!item.contains(key) || !item[key].is_string() ||
          trim(item[key].get<std::string>()).empty()) {
        errors.push_back(where + ": '" + key + "' must be a non-empty string");
        ok = false;
      } else {
        *target = item[key].get<std::string>();
      }
    }
    if (!item.contains("human_label") || !item["human_label"].is_boolean()) {
      errors.push_back(where + ": 'human_label' must be a boolean");
      ok = false;
    } else {
      example.human_label = item["human_label"].get<bool>();
    }
    if (ok) out.push_back(std::move(example));
  }
  if (!errors.empty()) throw ValidationError(join_errors("invalid judge fixture:", errors));
  return out;
}

std::vector<LabeledJudgeExample> load_judge_fixture(const std::filesystem::path& path) {
  return parse_judge_fixture(read_text_file(path));
}

json game_document(const GameRecord& record) {
  const GameConfig& config = record.config;
  json player_ids = json::array();
  for (const auto& player : record.players) player_ids.push_back(player.player_id);
  return json{{"schema_version", kSchemaVersion},
              {"game_id", record.game_id},
              {"description", config.description},
              {"experiment", config.experiment},
              {"date", config.date},
              {"num_rounds", config.num_rounds},
              {"judge_model", config.judge_model},
              {"random_seed", config.random_seed},
              {"scoring", config.scoring},
              {"history_type", to_string(config.history_type)},
              {"history_window", config.history_window},
              {"temperature", config.temperature},
              {"prompt_set", config.prompt_set},
              {"deck",
               {{"name", config.deck.name},
                {"avg_frequency", config.deck.avg_frequency ? json(*config.deck.avg_frequency)
                                                            : json(nullptr)},
                {"entries", config.deck.entries}}},
              {"player_ids", player_ids}};
}

json player_document(std::int64_t game_id, const PlayerState& player) {
  return json{{"schema_version", kSchemaVersion},
              {"game_id", game_id},
              {"player_id", player.player_id},
              {"llm_name", player.llm_name},
              {"llm_group", player.llm_group},
              {"cumulative_score", player.cumulative_score},
              {"score_history", player.score_history},
              {"rank_history", player.rank_history}};
}

json round_document(std::int64_t game_id, const RoundRecord& round) {
  json players = json::array();
  for (const auto& [player, score] : round.scores) {
    json item{{"player_id", player}, {"score", score}};
    auto vote = round.votes.find(player);
    item["vote"] = vote == round.votes.end() ? json(nullptr) : json(vote->second);
    if (auto def = round.definitions.find(player); def != round.definitions.end()) {
      const DefinitionRecord& d = def->second;
      item["raw_response"] = d.raw_response;
      item["generated_definition"] = d.parsed_definition;
      item["conforming"] = d.conforming;
      item["abstained"] = d.abstained;
      item["judge_decision"] = d.judge_decision;
      item["llm_knows_one"] = d.llm_knows_one;
    }
    players.push_back(std::move(item));
  }
  json entries = json::array();
  for (const auto& entry : round.ballot.entries) {
    entries.push_back({{"index", entry.display_index}, {"source", entry.source}, {"text", entry.text}});
  }
  json allowed = json::array();
  for (const auto& [voter, choices] : round.ballot.allowed) {
    allowed.push_back({{"player_id", voter}, {"choices", choices}});
  }
  json winners = json::array();
  for (const auto& [definition, outcome] : round.winners_strategies) {
    winners.push_back(json::array({definition, outcome}));
  }
  return json{{"schema_version", kSchemaVersion},
              {"game_id", game_id},
              {"round_id", round.round_id},
              {"word", round.word},
              {"reference_definition", round.word.definitions.empty()
                                           ? std::string()
                                           : round.word.reference_definition()},
              {"skipped", round.skipped},
              {"skip_reason", round.skip_reason},
              {"players", std::move(players)},
              {"ballot", {{"entries", std::move(entries)}, {"allowed", std::move(allowed)}}},
              {"winners_strategies", std::move(winners)}};
}

GameConfig config_from_game_document(const json& doc) {
  GameConfig config;
  config.description = doc.at("description").get<std::string>();
  config.experiment = doc.at("experiment").get<std::string>();
  config.date = doc.at("date").get<std::string>();
  config.num_rounds = doc.at("num_rounds").get<int>();
  config.judge_model = doc.at("judge_model").get<std::string>();
  config.random_seed = doc.at("random_seed").get<std::int64_t>();
  config.scoring = doc.at("scoring").get<ScoringRules>();
  config.history_type = parse_history_type(doc.at("history_type").get<std::string>());
  config.history_window = doc.at("history_window").get<int>();
  config.temperature = doc.at("temperature").get<double>();
  config.prompt_set = doc.at("prompt_set").get<std::string>();
  const json& deck = doc.at("deck");
  config.deck.name = deck.at("name").get<std::string>();
  if (!deck.at("avg_frequency").is_null()) {
    config.deck.avg_frequency = deck.at("avg_frequency").get<double>();
  }
  config.deck.entries = deck.at("entries").get<std::vector<WordEntry>>();
  return config;
}

PlayerState player_from_document(const json& doc) {
  PlayerState player;
  player.player_id = doc.at("player_id").get<PlayerId>();
  player.llm_name = doc.at("llm_name").get<std::string>();
  player.llm_group = doc.at("llm_group").get<std::string>();
  player.cumulative_score = doc.at("cumulative_score").get<long>();
  player.score_history = doc.at("score_history").get<std::vector<long>>();
  player.rank_history = doc.at("rank_history").get<std::vector<int>>();
  return player;
}

RoundRecord round_from_document(const json& doc) {
  RoundRecord round;
  round.round_id = doc.at("round_id").get<int>();
  round.word = doc.at("word").get<WordEntry>();
  round.skipped = doc.at("skipped").get<bool>();
  round.skip_reason = doc.at("skip_reason").get<std::string>();
  for (const json& item : doc.at("players")) {
    const PlayerId player = item.at("player_id").get<PlayerId>();
    round.scores[player] = item.at("score").get<int>();
    if (!item.at("vote").is_null()) round.votes[player] = item.at("vote").get<PlayerId>();
    if (item.contains("generated_definition")) {
      DefinitionRecord def;
      def.player_id = player;
      def.raw_response = item.at("raw_response").get<std::string>();
      def.parsed_definition = item.at("generated_definition").get<std::string>();
      def.conforming = item.at("conforming").get<bool>();
      def.abstained = item.at("abstained").get<bool>();
      def.judge_decision = item.at("judge_decision").get<bool>();
      def.llm_knows_one = item.at("llm_knows_one").get<bool>();
      round.definitions.emplace(player, std::move(def));
    }
  }
  const json& ballot = doc.at("ballot");
  for (const json& entry : ballot.at("entries")) {
    round.ballot.entries.push_back({entry.at("index").get<int>(), entry.at("source").get<PlayerId>(),
                                    entry.at("text").get<std::string>()});
  }
  for (const json& allowed : ballot.at("allowed")) {
    round.ballot.allowed[allowed.at("player_id").get<PlayerId>()] =
        allowed.at("choices").get<std::vector<int>>();
  }
  for (const json& pair : doc.at("winners_strategies")) {
    round.winners_strategies.emplace_back(pair.at(0).get<std::string>(),
                                          pair.at(1).get<std::string>());
  }
  return round;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace balderdash
