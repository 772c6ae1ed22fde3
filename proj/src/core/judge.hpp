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

#include <string>
#include <utility>
#include <vector>

#include "agents.hpp"
#include "domain.hpp"
#include "prompts.hpp"

namespace balderdash {

// Which prompt pair the judge sees: the in-game judge prompts or the plainer
// pair used when building known-word decks.
enum class JudgePrompt { kGame, kKnownWords };

struct JudgeVerdict {
  std::string word;
  std::string reference_definition;
  std::string candidate_definition;
  bool verdict = false;
  std::string raw_response;
};

// Asks the judge up to 1 + retry_limit times. Throws JudgeFailure when no
// parseable verdict arrives or the transport fails.
JudgeVerdict judge_equivalence(Agent& judge, const PromptSet& prompts, const std::string& word,
                               const std::string& reference, const std::string& candidate,
                               JudgePrompt kind = JudgePrompt::kGame);

struct KnowledgeJudgement {
  bool judge_decision = false;
  bool llm_knows_one = false;
};

// definitions[0] first, stopping at the first match.
KnowledgeJudgement judge_against_all(Agent& judge, const PromptSet& prompts,
                                     const WordEntry& entry, const std::string& candidate);

struct LabelOptions {
  int samples = 5;
  int threshold = 3;
  double temperature = 0.9;
};

struct WordLabel {
  std::string word;
  std::vector<bool> verdicts;
  std::vector<std::string> definitions;
  int true_count = 0;
  bool known = false;
  // Non-empty when the word was dropped because an agent failed.
  std::string error;
};

struct LabelResult {
  WordDeck deck;
  std::vector<WordLabel> log;
};

LabelResult label_known_words(const WordDeck& deck, Agent& definition_agent, Agent& judge,
                              const PromptSet& prompts, const LabelOptions& options = {});

struct LabeledJudgeExample {
  std::string word;
  std::string reference_definition;
  std::string candidate_definition;
  bool human_label = false;
};

struct JudgeScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  int true_positive = 0;
  int false_positive = 0;
  int true_negative = 0;
  int false_negative = 0;
  // Examples where the judge failed; counted as predicted false.
  int failures = 0;
};

// Positive class is verdict = true.
JudgeScores evaluate_judge(Agent& judge, const PromptSet& prompts,
                           const std::vector<LabeledJudgeExample>& dataset);

JudgeScores score_confusion(int tp, int fp, int tn, int fn);

}  // namespace balderdash
