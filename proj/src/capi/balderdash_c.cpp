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

#include "balderdash/balderdash.h"

#include <exception>
#include <string>

#include "core/errors.hpp"
#include "core/experiment.hpp"

struct bd_session {
  std::string error;
  std::string output;
  std::string metadata;
};

namespace {

using namespace balderdash;

template <typename Fn>
bd_status guarded(bd_session* session, Fn&& fn) {
  if (session == nullptr) return BD_ERR_ARGUMENT;
  session->error.clear();
  session->output.clear();
  session->metadata.clear();
  try {
    fn();
    return BD_OK;
  } catch (const ValidationError& error) {
    session->error = error.what();
    return BD_ERR_VALIDATION;
  } catch (const std::invalid_argument& error) {
    session->error = error.what();
    return BD_ERR_ARGUMENT;
  } catch (const std::exception& error) {
    session->error = error.what();
    return BD_ERR_RUNTIME;
  } catch (...) {
    session->error = "unknown failure";
    return BD_ERR_RUNTIME;
  }
}

const char* require(const char* value, const char* name) {
  if (value == nullptr || *value == '\0') {
    throw std::invalid_argument(std::string(name) + " is required");
  }
  return value;
}

std::optional<HistoryType> optional_history(const char* value) {
  if (value == nullptr || *value == '\0') return std::nullopt;
  return parse_history_type(value);
}

}  // namespace

extern "C" {

bd_session* bd_session_create(void) { return new (std::nothrow) bd_session(); }

void bd_session_destroy(bd_session* session) { delete session; }

const char* bd_last_error(const bd_session* session) {
  return session == nullptr ? "null session" : session->error.c_str();
}

const char* bd_output(const bd_session* session) {
  return session == nullptr ? "" : session->output.c_str();
}

const char* bd_output_metadata(const bd_session* session) {
  return session == nullptr ? "" : session->metadata.c_str();
}

const char* bd_version(void) { return "1.0.0"; }

bd_status bd_run_experiment(bd_session* session, const char* config_path, const char* out_dir,
                            const bd_run_options* options) {
  return guarded(session, [&] {
    RunOverrides overrides;
    if (options != nullptr) {
      if (options->has_seed) overrides.seed = options->seed;
      overrides.history = optional_history(options->history);
      overrides.jobs = options->jobs > 0 ? options->jobs : 1;
    }
    const RunSummary summary =
        run_experiment(require(config_path, "config path"), require(out_dir, "output directory"),
                       overrides);
    session->output = nlohmann::json{{"out_dir", summary.out_dir.string()},
                                     {"games", summary.games},
                                     {"config_sha256", summary.config_sha256},
                                     {"prompt_bundle_sha256", summary.prompt_bundle_sha256}}
                          .dump();
  });
}

bd_status bd_label_known_words(bd_session* session, const char* deck_path,
                               const char* agent_binding_path, const char* judge_binding_path,
                               const char* out_path, const bd_label_options* options) {
  return guarded(session, [&] {
    LabelRunOptions run;
    if (options != nullptr) {
      if (options->samples > 0) run.label.samples = options->samples;
      if (options->threshold > 0) run.label.threshold = options->threshold;
      if (options->temperature > 0.0) run.label.temperature = options->temperature;
      if (options->prompt_set != nullptr) run.prompt_set = options->prompt_set;
    }
    session->output = run_label_known_words(require(deck_path, "deck path"),
                                            require(agent_binding_path, "agent binding"),
                                            require(judge_binding_path, "judge binding"),
                                            require(out_path, "output path"), run)
                          .string();
  });
}

bd_status bd_evaluate_judge(bd_session* session, const char* fixture_path,
                            const char* judge_binding_path, const char* prompt_set) {
  return guarded(session, [&] {
    const JudgeScores scores =
        run_evaluate_judge(require(fixture_path, "fixture path"),
                           require(judge_binding_path, "judge binding"),
                           prompt_set == nullptr ? "default" : prompt_set);
    session->output = judge_scores_csv(scores);
    session->metadata = nlohmann::json{{"true_positive", scores.true_positive},
                                       {"false_positive", scores.false_positive},
                                       {"true_negative", scores.true_negative},
                                       {"false_negative", scores.false_negative},
                                       {"judge_failures", scores.failures}}
                            .dump();
  });
}

bd_status bd_report(bd_session* session, const char* run_dir, const bd_report_options* options) {
  return guarded(session, [&] {
    ReportOptions report;
    if (options != nullptr) {
      const std::string kind = options->kind == nullptr ? "leaderboard" : options->kind;
      if (kind == "lkr_series") {
        report.kind = ReportKind::kLkrSeries;
      } else if (kind != "leaderboard") {
        throw ValidationError("report kind must be leaderboard or lkr_series, got '" + kind + "'");
      }
      const std::string setting = options->setting == nullptr ? "history_type" : options->setting;
      if (setting == "correct_definition_points") {
        report.setting = SettingKey::kCorrectDefinitionPoints;
      } else if (setting != "history_type") {
        throw ValidationError("setting must be history_type or correct_definition_points");
      }
      if (options->group != nullptr && *options->group != '\0') report.group = options->group;
      report.history = optional_history(options->history);
      if (options->std_scale > 0.0) report.std_scale = options->std_scale;
    }
    const Report result = build_report(require(run_dir, "run directory"), report);
    session->output = result.csv;
    session->metadata = result.metadata.dump(2);
  });
}

}  // extern "C"
