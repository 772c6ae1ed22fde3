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

#include "judge.hpp"

#include "errors.hpp"

namespace balderdash {

JudgeVerdict judge_equivalence(Agent& judge, const PromptSet& prompts, const std::string& word,
                               const std::string& reference, const std::string& candidate,
                               JudgePrompt kind) {
  if (trim(word).empty() || trim(reference).empty() || trim(candidate).empty()) {
    throw ValidationError("judge_equivalence needs a word, a reference and a candidate");
  }
  std::vector<ChatMessage> messages;
  if (kind == JudgePrompt::kGame) {
    messages = {{Role::kSystem, prompts.get(prompt_id::kJudgeSystem)},
                {Role::kUser, prompts.render(prompt_id::kJudgeUser, {{"word", word},
                                                                     {"correct_definition", reference},
                                                                     {"definition", candidate}})}};
  } else {
    messages = {{Role::kSystem, prompts.get(prompt_id::kKnownJudgeSystem)},
                {Role::kUser, prompts.render(prompt_id::kKnownJudgeUser,
                                             {{"definition", reference},
                                              {"llm_definition", candidate}})}};
  }

  JudgeVerdict verdict{word, reference, candidate, false, ""};
  std::string last_problem;
  const int attempts = 1 + judge.binding().retry_limit;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    try {
      verdict.raw_response = judge.complete(messages);
      verdict.verdict = parse_judge_verdict(verdict.raw_response);
      return verdict;
    } catch (const FormatError& error) {
      last_problem = error.what();
    } catch (const TransportError& error) {
      throw JudgeFailure("judge '" + judge.binding().agent_id + "' unreachable: " + error.what());
    } catch (const ScriptExhaustedError& error) {
      throw JudgeFailure(error.what());
    }
  }
  throw JudgeFailure("judge '" + judge.binding().agent_id + "' gave no verdict for '" + word +
                     "' after " + std::to_string(attempts) + " attempts: " + last_problem);
}

KnowledgeJudgement judge_against_all(Agent& judge, const PromptSet& prompts,
                                     const WordEntry& entry, const std::string& candidate) {
  if (entry.definitions.empty()) throw ValidationError("word '" + entry.word + "' has no definitions");
  KnowledgeJudgement out;
  for (std::size_t i = 0; i < entry.definitions.size(); ++i) {
    if (judge_equivalence(judge, prompts, entry.word, entry.definitions[i], candidate).verdict) {
      out.judge_decision = i == 0;
      out.llm_knows_one = true;
      break;
    }
  }
  return out;
}

LabelResult label_known_words(const WordDeck& deck, Agent& definition_agent, Agent& judge,
                              const PromptSet& prompts, const LabelOptions& options) {
  if (options.samples < 1 || options.threshold < 1 || options.threshold > options.samples) {
    throw ValidationError("known-word labeling needs 1 <= threshold <= samples");
  }
  LabelResult result;
  result.deck.name = deck.name + "-known";
  const CompletionOptions sampling{options.temperature};
  double frequency_sum = 0.0;
  int with_frequency = 0;

  for (const WordEntry& entry : deck.entries) {
    WordLabel label{entry.word, {}, {}, 0, false, ""};
    const std::vector<ChatMessage> messages{
        {Role::kSystem, prompts.get(prompt_id::kDictionarySystem)},
        {Role::kUser, prompts.render(prompt_id::kDictionaryUser,
                                     {{"word", entry.word}, {"pos", entry.pos}})}};
    try {
      for (int sample = 0; sample < options.samples; ++sample) {
        const std::string raw = definition_agent.complete(messages, sampling);
        bool verdict = false;
        std::string parsed;
        try {
          parsed = parse_definition(raw).text;
          verdict = judge_equivalence(judge, prompts, entry.word, entry.reference_definition(),
                                      parsed, JudgePrompt::kKnownWords)
                        .verdict;
        } catch (const DefinitionFormatError&) {
          verdict = false;
        }
        label.definitions.push_back(parsed);
        label.verdicts.push_back(verdict);
        if (verdict) ++label.true_count;
      }
      label.known = label.true_count >= options.threshold;
    } catch (const Error& error) {
      label.error = error.what();
      label.known = false;
    }
    if (label.known) {
      result.deck.entries.push_back(entry);
      if (entry.frequency) {
        frequency_sum += *entry.frequency;
        ++with_frequency;
      }
    }
    result.log.push_back(std::move(label));
  }
  if (with_frequency > 0) result.deck.avg_frequency = frequency_sum / with_frequency;
  return result;
}

JudgeScores score_confusion(int tp, int fp, int tn, int fn) {
  JudgeScores scores;
  scores.true_positive = tp;
  scores.false_positive = fp;
  scores.true_negative = tn;
  scores.false_negative = fn;
  auto ratio = [](int num, int den) { return den == 0 ? 0.0 : static_cast<double>(num) / den; };
  scores.precision = ratio(tp, tp + fp);
  scores.recall = ratio(tp, tp + fn);
  const double pr = scores.precision + scores.recall;
  scores.f1 = pr == 0.0 ? 0.0 : 2.0 * scores.precision * scores.recall / pr;
  scores.accuracy = ratio(tp + tn, tp + fp + tn + fn);
  return scores;
}

JudgeScores evaluate_judge(Agent& judge, const PromptSet& prompts,
                           const std::vector<LabeledJudgeExample>& dataset) {
  if (dataset.empty()) throw ValidationError("judge evaluation dataset is empty");
  int tp = 0, fp = 0, tn = 0, fn = 0, failures = 0;
  for (const auto& example : dataset) {
    bool predicted = false;
    try {
      predicted = judge_equivalence(judge, prompts, example.word, example.reference_definition,
                                    example.candidate_definition)
                      .verdict;
    } catch (const JudgeFailure&) {
      ++failures;
    }
    if (predicted && example.human_label) ++tp;
    if (predicted && !example.human_label) ++fp;
    if (!predicted && !example.human_label) ++tn;
    if (!predicted && example.human_label) ++fn;
  }
  JudgeScores scores = score_confusion(tp, fp, tn, fn);
  scores.failures = failures;
  return scores;
}

}  // namespace balderdash
