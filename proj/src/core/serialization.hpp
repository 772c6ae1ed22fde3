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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "agents.hpp"
#include "domain.hpp"
#include "judge.hpp"

namespace balderdash {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

void to_json(json& out, const WordEntry& entry);
void from_json(const json& in, WordEntry& entry);
void to_json(json& out, const ScoringRules& rules);
void from_json(const json& in, ScoringRules& rules);

// Deck files: a JSON array of {word, pos, definitions, frequency?}, or CSV
// with columns word,pos,definitions,frequency and definitions joined by
// " ||| ". The deck is named after the file stem.
inline constexpr std::string_view kDefinitionDelimiter = " ||| ";
WordDeck parse_deck_json(std::string_view text, std::string name);
WordDeck parse_deck_csv(std::string_view text, std::string name);
WordDeck load_deck(const std::filesystem::path& path);
std::string deck_to_json_text(const WordDeck& deck);
std::string deck_to_csv_text(const WordDeck& deck);

// Parses an agent binding object, appending problems to `errors`.
AgentBinding parse_binding(const json& in, std::vector<std::string>& errors,
                           const std::string& where);
AgentBinding load_binding(const std::filesystem::path& path);

std::vector<LabeledJudgeExample> parse_judge_fixture(std::string_view text);
std::vector<LabeledJudgeExample> load_judge_fixture(const std::filesystem::path& path);

// Store documents.
json game_document(const GameRecord& record);
json player_document(std::int64_t game_id, const PlayerState& player);
json round_document(std::int64_t game_id, const RoundRecord& round);
GameConfig config_from_game_document(const json& doc);
PlayerState player_from_document(const json& doc);
RoundRecord round_from_document(const json& doc);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace balderdash
