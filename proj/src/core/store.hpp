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
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "domain.hpp"

namespace balderdash {

inline constexpr const char* kGamesFile = "games.jsonl";
inline constexpr const char* kRoundsFile = "rounds.jsonl";
inline constexpr const char* kPlayersFile = "players.jsonl";

struct StoredIds {
  std::int64_t game_id = 0;
  std::size_t player_documents = 0;
  std::size_t round_documents = 0;
};

// Empty fields match everything. `description` matches as a substring.
struct GameFilter {
  std::optional<std::string> description;
  std::optional<std::string> date;
  std::optional<std::string> deck;
};

// Run directory holding one JSON document per line in games.jsonl,
// players.jsonl and rounds.jsonl. One writer per directory.
class RunStore {
 public:
  // Creates the directory if needed and indexes existing game ids.
  explicit RunStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }

  // Appends the games, players and rounds documents. Throws StoreError on a
  // duplicate game id or I/O failure.
  StoredIds persist_game(const GameRecord& record);

  // Throws StoreError naming file and line for a corrupt document.
  std::vector<GameRecord> load_games(const GameFilter& filter = {}) const;

  bool contains(std::int64_t game_id) const;

 private:
  std::filesystem::path dir_;
  mutable std::mutex mutex_;
  std::set<std::int64_t> game_ids_;
};

}  // namespace balderdash
