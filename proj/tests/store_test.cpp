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

#include <gtest/gtest.h>

#include <fstream>

#include "core/errors.hpp"
#include "core/store.hpp"
#include "test_support.hpp"

namespace balderdash {
namespace {

using testing::FixtureGame;
using testing::TempDir;

std::size_t line_count(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  return lines;
}

GameRecord fixture_game(std::int64_t id, HistoryType history = HistoryType::kFull) {
  FixtureGame fixture({3, 2, 1}, history);
  GameRecord game = fixture.run();
  game.game_id = id;
  return game;
}

TEST(RunStore, DocumentCounts) {
  TempDir dir;
  RunStore store(dir.path());
  GameConfig config;
  config.deck = testing::numbered_deck(1);
  ScriptedAgent a(testing::scripted("a", {}, {}, true));
  ScriptedAgent b(testing::scripted("b", {}, {}, true));
  ScriptedAgent judge(testing::exact_judge());
  const GameRecord game = run_game(config, 1, {{1, &a, "a", "a"}, {2, &b, "b", "b"}}, judge,
                                   PromptSet::defaults());
  const StoredIds ids = store.persist_game(game);
  EXPECT_EQ(ids.game_id, 1);
  EXPECT_EQ(ids.player_documents, 2u);
  EXPECT_EQ(ids.round_documents, 1u);
  EXPECT_EQ(line_count(dir / kGamesFile), 1u);
  EXPECT_EQ(line_count(dir / kPlayersFile), 2u);
  EXPECT_EQ(line_count(dir / kRoundsFile), 1u);
}

TEST(RunStore, RoundTrip) {
  TempDir dir;
  std::vector<GameRecord> games;
  {
    RunStore store(dir.path());
    for (std::int64_t id = 1; id <= 5; ++id) {
      games.push_back(fixture_game(id, id % 2 ? HistoryType::kFull : HistoryType::kNone));
      store.persist_game(games.back());
    }
  }
  RunStore reopened(dir.path());
  EXPECT_TRUE(reopened.contains(3));
  EXPECT_EQ(reopened.load_games(), games);
}

TEST(RunStore, SkippedRoundsSurvive) {
  TempDir dir;
  GameRecord game = fixture_game(1);
  game.rounds[0].skipped = true;
  game.rounds[0].skip_reason = "judge gave up";
  game.rounds[0].definitions.clear();
  game.rounds[0].votes.clear();
  game.rounds[0].ballot = {};
  for (auto& [p, s] : game.rounds[0].scores) s = 0;
  RunStore store(dir.path());
  store.persist_game(game);
  EXPECT_EQ(store.load_games().front(), game);
}

TEST(RunStore, DuplicateIdRejected) {
  TempDir dir;
  RunStore store(dir.path());
  store.persist_game(fixture_game(1));
  EXPECT_THROW(store.persist_game(fixture_game(1)), StoreError);
  RunStore reopened(dir.path());
  EXPECT_THROW(reopened.persist_game(fixture_game(1)), StoreError);
  EXPECT_EQ(line_count(dir / kGamesFile), 1u);
}

TEST(RunStore, Filters) {
  TempDir dir;
  RunStore store(dir.path());
  GameRecord a = fixture_game(1);
  a.config.description = "leaderboard sweep";
  a.config.date = "2026-01-02";
  GameRecord b = fixture_game(2);
  b.config.description = "other";
  b.config.deck.name = "second";
  store.persist_game(a);
  store.persist_game(b);
  EXPECT_EQ(store.load_games({"sweep", std::nullopt, std::nullopt}).size(), 1u);
  EXPECT_EQ(store.load_games({std::nullopt, "2026-01-02", std::nullopt}).front().game_id, 1);
  EXPECT_EQ(store.load_games({std::nullopt, std::nullopt, "second"}).front().game_id, 2);
  EXPECT_TRUE(store.load_games({"nothing like it", std::nullopt, std::nullopt}).empty());
}

TEST(RunStore, EmptyDirectoryLoadsNothing) {
  TempDir dir;
  RunStore store(dir / "fresh");
  EXPECT_TRUE(store.load_games().empty());
}

TEST(RunStore, CorruptLineIsNamed) {
  TempDir dir;
  {
    RunStore store(dir.path());
    store.persist_game(fixture_game(1));
    store.persist_game(fixture_game(2));
  }
  // Truncate the last rounds document mid-way.
  std::ifstream in(dir / kRoundsFile);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  in.close();
  text.resize(text.size() - 40);
  std::ofstream(dir / kRoundsFile, std::ios::trunc) << text;
  RunStore store(dir.path());
  try {
    store.load_games();
    FAIL() << "expected StoreError";
  } catch (const StoreError& error) {
    const std::string message = error.what();
    EXPECT_NE(message.find(std::string(kRoundsFile) + ":6"), std::string::npos) << message;
  }
}

TEST(RunStore, DocumentsCarrySchemaVersion) {
  TempDir dir;
  RunStore store(dir.path());
  store.persist_game(fixture_game(1));
  for (const char* file : {kGamesFile, kPlayersFile, kRoundsFile}) {
    std::ifstream in(dir / file);
    for (std::string line; std::getline(in, line);) {
      EXPECT_NE(line.find("\"schema_version\""), std::string::npos) << file;
      EXPECT_NE(line.find("\"game_id\":1"), std::string::npos) << file;
    }
  }
}

}  // namespace
}  // namespace balderdash
