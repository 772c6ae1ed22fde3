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

#include "store.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "errors.hpp"
#include "serialization.hpp"

namespace balderdash {

namespace {

// Calls fn(doc, line_number) for every non-empty line of a JSONL file.
template <typename Fn>
void for_each_document(const std::filesystem::path& path, Fn fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const std::string where = path.filename().string() + ":" + std::to_string(line_number);
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& error) {
      throw StoreError(where + ": corrupt document: " + error.what());
    }
    try {
      if (doc.at("schema_version").get<int>() != kSchemaVersion) {
        throw StoreError(where + ": unsupported schema_version " +
                         doc.at("schema_version").dump());
      }
      fn(doc, where);
    } catch (const json::exception& error) {
      throw StoreError(where + ": malformed document: " + error.what());
    } catch (const ValidationError& error) {
      throw StoreError(where + ": invalid document: " + error.what());
    }
  }
}

void append_lines(const std::filesystem::path& path, const std::string& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw StoreError("cannot open '" + path.string() + "' for appending");
  out << lines;
  out.flush();
  if (!out) throw StoreError("failed writing '" + path.string() + "'");
}

}  // namespace

RunStore::RunStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw StoreError("cannot create run directory '" + dir_.string() + "': " + ec.message());
  for_each_document(dir_ / kGamesFile, [&](const json& doc, const std::string&) {
    game_ids_.insert(doc.at("game_id").get<std::int64_t>());
  });
}

bool RunStore::contains(std::int64_t game_id) const {
  std::lock_guard lock(mutex_);
  return game_ids_.contains(game_id);
}

StoredIds RunStore::persist_game(const GameRecord& record) {
  std::lock_guard lock(mutex_);
  if (game_ids_.contains(record.game_id)) {
    throw StoreError("game " + std::to_string(record.game_id) + " is already stored in '" +
                     dir_.string() + "'");
  }
  std::string players;
  for (const auto& player : record.players) {
    players += player_document(record.game_id, player).dump() + "\n";
  }
  std::string rounds;
  for (const auto& round : record.rounds) {
    rounds += round_document(record.game_id, round).dump() + "\n";
  }
  append_lines(dir_ / kGamesFile, game_document(record).dump() + "\n");
  append_lines(dir_ / kPlayersFile, players);
  append_lines(dir_ / kRoundsFile, rounds);
  game_ids_.insert(record.game_id);
  return {record.game_id, record.players.size(), record.rounds.size()};
}

std::vector<GameRecord> RunStore::load_games(const GameFilter& filter) const {
  std::vector<GameRecord> games;
  std::map<std::int64_t, std::size_t> slot;
  for_each_document(dir_ / kGamesFile, [&](const json& doc, const std::string& where) {
    GameRecord game;
    game.game_id = doc.at("game_id").get<std::int64_t>();
    game.config = config_from_game_document(doc);
    if (filter.description &&
        game.config.description.find(*filter.description) == std::string::npos) {
      return;
    }
    if (filter.date && game.config.date != *filter.date) return;
    if (filter.deck && game.config.deck.name != *filter.deck) return;
    if (slot.contains(game.game_id)) {
      throw StoreError(where + ": duplicate game " + std::to_string(game.game_id));
    }
    slot.emplace(game.game_id, games.size());
    games.push_back(std::move(game));
  });
  if (games.empty()) return games;

  for_each_document(dir_ / kPlayersFile, [&](const json& doc, const std::string&) {
    auto it = slot.find(doc.at("game_id").get<std::int64_t>());
    if (it != slot.end()) games[it->second].players.push_back(player_from_document(doc));
  });
  for_each_document(dir_ / kRoundsFile, [&](const json& doc, const std::string&) {
    auto it = slot.find(doc.at("game_id").get<std::int64_t>());
    if (it != slot.end()) games[it->second].rounds.push_back(round_from_document(doc));
  });
  for (GameRecord& game : games) {
    std::sort(game.players.begin(), game.players.end(),
              [](const auto& a, const auto& b) { return a.player_id < b.player_id; });
    std::sort(game.rounds.begin(), game.rounds.end(),
              [](const auto& a, const auto& b) { return a.round_id < b.round_id; });
  }
  return games;
}

}  // namespace balderdash
