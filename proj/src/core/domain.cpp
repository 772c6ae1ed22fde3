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

#include "domain.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "errors.hpp"
#include "rng.hpp"

namespace balderdash {

std::string_view to_string(HistoryType type) {
  switch (type) {
    case HistoryType::kNone:
      return "none";
    case HistoryType::kMini:
      return "mini";
    case HistoryType::kFull:
      return "full";
  }
  return "none";
}

HistoryType parse_history_type(std::string_view text) {
  if (text == "none") return HistoryType::kNone;
  if (text == "mini") return HistoryType::kMini;
  if (text == "full") return HistoryType::kFull;
  throw ValidationError("unknown history type '" + std::string(text) +
                        "' (expected none, mini or full)");
}

std::string trim(std::string_view text) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && is_space(text[begin])) ++begin;
  while (end > begin && is_space(text[end - 1])) --end;
  return std::string(text.substr(begin, end - begin));
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

int Ballot::reference_index() const {
  for (const auto& entry : entries) {
    if (entry.source == kReferenceVote) return entry.display_index;
  }
  return 0;
}

std::optional<int> Ballot::index_of(PlayerId author) const {
  for (const auto& entry : entries) {
    if (entry.source == author) return entry.display_index;
  }
  return std::nullopt;
}

PlayerId Ballot::source_at(int display_index) const {
  for (const auto& entry : entries) {
    if (entry.display_index == display_index) return entry.source;
  }
  throw ValidationError("ballot has no entry " + std::to_string(display_index));
}

int RoundRecord::votes_received(PlayerId player) const {
  return static_cast<int>(std::count_if(votes.begin(), votes.end(), [&](const auto& vote) {
    return vote.second == player;
  }));
}

std::vector<PlayerId> GameRecord::group_members(std::string_view group) const {
  std::vector<PlayerId> members;
  for (const auto& player : players) {
    if (player.llm_group == group) members.push_back(player.player_id);
  }
  return members;
}

std::vector<std::string> GameRecord::groups() const {
  std::vector<std::string> out;
  for (const auto& player : players) {
    if (std::find(out.begin(), out.end(), player.llm_group) == out.end()) {
      out.push_back(player.llm_group);
    }
  }
  return out;
}

std::vector<std::string> validate_deck(const WordDeck& deck) {
  std::vector<std::string> violations;
  std::unordered_map<std::string, std::size_t> first_seen;
  double frequency_sum = 0.0;
  std::size_t frequency_count = 0;

  for (std::size_t i = 0; i < deck.entries.size(); ++i) {
    const WordEntry& entry = deck.entries[i];
    const std::string label =
        "entry #" + std::to_string(i + 1) + " ('" + entry.word + "')";
    const std::string key = to_lower(trim(entry.word));
    if (key.empty()) {
      violations.push_back(label + ": word is empty");
    } else if (auto it = first_seen.find(key); it != first_seen.end()) {
      violations.push_back(label + ": duplicate of entry #" +
                           std::to_string(it->second + 1) +
                           " (words must be unique, case-insensitive)");
    } else {
      first_seen.emplace(key, i);
    }
    if (entry.definitions.empty()) {
      violations.push_back(label + ": definitions list is empty");
    }
    for (std::size_t d = 0; d < entry.definitions.size(); ++d) {
      if (trim(entry.definitions[d]).empty()) {
        violations.push_back(label + ": definition " + std::to_string(d) + " is blank");
      }
    }
    if (entry.frequency) {
      if (!std::isfinite(*entry.frequency) || *entry.frequency < 0.0) {
        violations.push_back(label + ": frequency must be a non-negative number");
      } else {
        frequency_sum += *entry.frequency;
        ++frequency_count;
      }
    }
  }

  if (deck.avg_frequency) {
    if (frequency_count == 0) {
      violations.push_back("deck '" + deck.name +
                           "': avg_frequency given but no entry has a frequency");
    } else {
      const double mean = frequency_sum / static_cast<double>(frequency_count);
      if (std::abs(mean - *deck.avg_frequency) > 1e-9) {
        std::ostringstream msg;
        msg << "deck '" << deck.name << "': avg_frequency " << *deck.avg_frequency
            << " does not match mean entry frequency " << mean;
        violations.push_back(msg.str());
      }
    }
  }
  return violations;
}

std::vector<std::string> validate_config(const GameConfig& config) {
  std::vector<std::string> violations;
  if (config.num_rounds < 1) {
    violations.push_back("num_rounds must be positive");
  }
  if (static_cast<std::size_t>(std::max(config.num_rounds, 0)) > config.deck.size()) {
    violations.push_back("num_rounds (" + std::to_string(config.num_rounds) +
                         ") exceeds deck size (" + std::to_string(config.deck.size()) + ")");
  }
  if (config.history_type != HistoryType::kNone && config.history_window < 1) {
    violations.push_back("history_window must be >= 1 when history is enabled");
  }
  if (!(config.temperature >= 0.0 && config.temperature <= 2.0)) {
    violations.push_back("temperature must lie in [0, 2]");
  }
  for (auto& violation : validate_deck(config.deck)) {
    violations.push_back("deck: " + violation);
  }
  return violations;
}

namespace {

WordDeck make_subset(const WordDeck& deck, const std::vector<std::size_t>& order,
                     std::size_t offset, std::size_t size, int ordinal) {
  WordDeck subset;
  subset.name = deck.name + "#" + std::to_string(ordinal);
  double sum = 0.0;
  std::size_t with_frequency = 0;
  for (std::size_t i = 0; i < size; ++i) {
    const WordEntry& entry = deck.entries[order[offset + i]];
    subset.entries.push_back(entry);
    if (entry.frequency) {
      sum += *entry.frequency;
      ++with_frequency;
    }
  }
  if (with_frequency > 0) subset.avg_frequency = sum / static_cast<double>(with_frequency);
  return subset;
}

}  // namespace

std::vector<WordDeck> sample_subsets(const WordDeck& deck, int count, int size,
                                     std::int64_t seed) {
  if (count < 1 || size < 1) {
    throw ValidationError("subset count and size must be positive");
  }
  if (static_cast<std::size_t>(size) > deck.size()) {
    throw ValidationError("subset size " + std::to_string(size) + " exceeds deck '" +
                          deck.name + "' with " + std::to_string(deck.size()) +
                          " entries");
  }
  const auto useed = static_cast<std::uint64_t>(seed);
  std::vector<std::size_t> order(deck.size());
  std::vector<WordDeck> subsets;
  const auto total = static_cast<std::size_t>(count) * static_cast<std::size_t>(size);

  if (total <= deck.size()) {
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(useed, 0));
    rng.shuffle(std::span(order));
    for (int i = 0; i < count; ++i) {
      subsets.push_back(make_subset(deck, order, static_cast<std::size_t>(i) * size, size, i + 1));
    }
    return subsets;
  }

  for (int i = 0; i < count; ++i) {
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(useed, static_cast<std::uint64_t>(i) + 1));
    rng.shuffle(std::span(order));
    subsets.push_back(make_subset(deck, order, 0, size, i + 1));
  }
  return subsets;
}

std::vector<int> competition_ranks(const std::vector<long>& scores) {
  std::vector<int> ranks(scores.size(), 1);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (scores[j] > scores[i]) ++ranks[i];
    }
  }
  return ranks;
}

std::vector<std::string> validate_game_record(const GameRecord& record) {
  std::vector<std::string> violations;
  auto fail = [&](const RoundRecord& round, const std::string& what) {
    violations.push_back("round " + std::to_string(round.round_id) + ": " + what);
  };

  std::set<std::string> deck_words;
  for (const auto& entry : record.config.deck.entries) deck_words.insert(to_lower(entry.word));
  std::set<std::string> used_words;
  std::vector<long> cumulative(record.players.size(), 0);

  if (record.rounds.size() > static_cast<std::size_t>(record.config.num_rounds)) {
    violations.push_back("more rounds than num_rounds");
  }

  for (std::size_t r = 0; r < record.rounds.size(); ++r) {
    const RoundRecord& round = record.rounds[r];
    const std::string word = to_lower(round.word.word);
    if (!used_words.insert(word).second) fail(round, "word '" + round.word.word + "' reused");
    if (!deck_words.contains(word)) fail(round, "word '" + round.word.word + "' not in deck");

    for (std::size_t p = 0; p < record.players.size(); ++p) {
      const PlayerId id = record.players[p].player_id;
      auto score = round.scores.find(id);
      if (score == round.scores.end()) {
        fail(round, "no score for player " + std::to_string(id));
      } else {
        cumulative[p] += score->second;
      }
    }
    const std::vector<int> ranks = competition_ranks(cumulative);
    for (std::size_t p = 0; p < record.players.size(); ++p) {
      const auto& history = record.players[p].rank_history;
      if (r >= history.size() || history[r] != ranks[p]) {
        fail(round, "rank history of player " + std::to_string(record.players[p].player_id) +
                        " inconsistent with scores");
      }
    }
    if (round.skipped) continue;

    std::set<PlayerId> expected_authors{kReferenceVote};
    for (const auto& [id, def] : round.definitions) {
      if (def.judge_decision && !def.llm_knows_one) {
        fail(round, "player " + std::to_string(id) + " judge_decision without llm_knows_one");
      }
      if (!def.judge_decision && !def.abstained) expected_authors.insert(id);
      if (def.judge_decision && round.votes.contains(id)) {
        fail(round, "player " + std::to_string(id) + " wrote the true definition but voted");
      }
    }
    std::multiset<PlayerId> authors;
    for (const auto& entry : round.ballot.entries) authors.insert(entry.source);
    if (authors.count(kReferenceVote) != 1) fail(round, "ballot must hold exactly one reference");
    if (std::set<PlayerId>(authors.begin(), authors.end()) != expected_authors ||
        authors.size() != expected_authors.size()) {
      fail(round, "ballot authors differ from non-judged players plus reference");
    }
    for (const auto& [voter, target] : round.votes) {
      if (voter == target) fail(round, "player " + std::to_string(voter) + " voted for itself");
      auto def = round.definitions.find(voter);
      if (def == round.definitions.end() || def->second.judge_decision) {
        fail(round, "unexpected voter " + std::to_string(voter));
      }
    }
  }

  for (const auto& player : record.players) {
    if (player.rank_history.size() != record.rounds.size()) {
      violations.push_back("player " + std::to_string(player.player_id) +
                           ": rank history length differs from round count");
    }
  }
  return violations;
}

}  // namespace balderdash
