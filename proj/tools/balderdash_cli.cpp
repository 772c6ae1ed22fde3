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

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "balderdash/balderdash.h"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

int finish(bd_session* session, bd_status status, bool print_output) {
  if (status == BD_OK) {
    if (print_output) std::cout << bd_output(session);
    return 0;
  }
  std::cerr << "error: " << bd_last_error(session) << "\n";
  return status == BD_ERR_RUNTIME ? kExitRuntime : kExitValidation;
}

const char* c_str_or_null(const std::optional<std::string>& value) {
  return value ? value->c_str() : nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balderdash LLM multi-agent simulation"};
  app.set_version_flag("--version", bd_version());
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::optional<std::int64_t> seed;
  int jobs = 1;
  std::optional<std::string> history;
  auto* run = app.add_subcommand("run", "Run an experiment config and persist every game");
  run->add_option("--config", config, "Experiment config (JSON)")->required();
  run->add_option("--out", out, "Run directory")->required();
  run->add_option("--seed", seed, "Override random_seed");
  run->add_option("--jobs", jobs, "Games played in parallel")->check(CLI::PositiveNumber);
  run->add_option("--history", history, "Force one history type")
      ->check(CLI::IsMember({"none", "mini", "full"}));

  std::string deck;
  std::string agent;
  std::string judge;
  std::string label_out;
  int samples = 5;
  int threshold = 3;
  double temperature = 0.9;
  std::string prompt_set = "default";
  auto* label = app.add_subcommand("label-known-words", "Build the deck of words an LLM knows");
  label->add_option("--deck", deck, "Input deck (.json or .csv)")->required();
  label->add_option("--agent", agent, "Agent binding (JSON)")->required();
  label->add_option("--judge", judge, "Judge binding (JSON)")->required();
  label->add_option("--out", label_out, "Output deck path")->required();
  label->add_option("--samples", samples, "Definitions sampled per word");
  label->add_option("--threshold", threshold, "Matches needed to count as known");
  label->add_option("--temperature", temperature, "Sampling temperature");
  label->add_option("--prompts", prompt_set, "Prompt set name or directory");

  std::string fixture;
  std::string eval_judge;
  auto* evaluate = app.add_subcommand("evaluate-judge", "Score a judge against labeled pairs");
  evaluate->add_option("--fixture", fixture, "Labeled examples (JSON)")->required();
  evaluate->add_option("--judge", eval_judge, "Judge binding (JSON)")->required();
  evaluate->add_option("--prompts", prompt_set, "Prompt set name or directory");

  std::string run_dir;
  std::string kind = "leaderboard";
  std::string setting = "history_type";
  std::optional<std::string> group;
  std::optional<std::string> report_history;
  double std_scale = 1.0;
  bool show_metadata = false;
  auto* report = app.add_subcommand("report", "Recompute metrics from a run directory");
  report->add_option("--out", run_dir, "Run directory")->required();
  report->add_option("--kind", kind, "Report kind")
      ->check(CLI::IsMember({"leaderboard", "lkr_series"}));
  report->add_option("--setting", setting, "Leaderboard row key")
      ->check(CLI::IsMember({"history_type", "correct_definition_points"}));
  report->add_option("--group", group, "LLM group for lkr_series");
  report->add_option("--history", report_history, "History type for lkr_series")
      ->check(CLI::IsMember({"none", "mini", "full"}));
  report->add_option("--std-scale", std_scale, "Multiplier applied to std columns");
  report->add_flag("--metadata", show_metadata, "Print the aggregation metadata to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : kExitValidation;
  }

  std::unique_ptr<bd_session, decltype(&bd_session_destroy)> session(bd_session_create(),
                                                                     &bd_session_destroy);
  if (!session) return kExitRuntime;

  if (*run) {
    bd_run_options options{seed.has_value() ? 1 : 0, seed.value_or(0), c_str_or_null(history), jobs};
    const bd_status status = bd_run_experiment(session.get(), config.c_str(), out.c_str(), &options);
    if (status == BD_OK) std::cout << bd_output(session.get()) << "\n";
    return finish(session.get(), status, false);
  }
  if (*label) {
    bd_label_options options{samples, threshold, temperature, prompt_set.c_str()};
    const bd_status status = bd_label_known_words(session.get(), deck.c_str(), agent.c_str(),
                                                  judge.c_str(), label_out.c_str(), &options);
    if (status == BD_OK) std::cout << "wrote " << label_out << " and " << bd_output(session.get()) << "\n";
    return finish(session.get(), status, false);
  }
  if (*evaluate) {
    return finish(session.get(),
                  bd_evaluate_judge(session.get(), fixture.c_str(), eval_judge.c_str(),
                                    prompt_set.c_str()),
                  true);
  }
  bd_report_options options{kind.c_str(), setting.c_str(), c_str_or_null(group),
                            c_str_or_null(report_history), std_scale};
  const bd_status status = bd_report(session.get(), run_dir.c_str(), &options);
  if (status == BD_OK && show_metadata) std::cerr << bd_output_metadata(session.get()) << "\n";
  return finish(session.get(), status, true);
}
