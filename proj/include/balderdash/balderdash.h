/*
 * Copyright 2026 The Balderdash Simulation Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the Balderdash simulation library. */

#ifndef BALDERDASH_BALDERDASH_H_
#define BALDERDASH_BALDERDASH_H_

#include <stdint.h>

#if defined(_WIN32)
#define BD_API __declspec(dllexport)
#else
#define BD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bd_status {
  BD_OK = 0,
  BD_ERR_VALIDATION = 1, /* bad config, deck, binding or arguments in files */
  BD_ERR_RUNTIME = 2,    /* transport, judge, store or I/O failure */
  BD_ERR_ARGUMENT = 3    /* null handle or malformed call */
} bd_status;

/* Opaque. Holds the last error message and the last text output. */
typedef struct bd_session bd_session;

BD_API bd_session* bd_session_create(void);
BD_API void bd_session_destroy(bd_session* session);

/* Valid until the next call on the same session. Empty when none. */
BD_API const char* bd_last_error(const bd_session* session);
BD_API const char* bd_output(const bd_session* session);
BD_API const char* bd_output_metadata(const bd_session* session);

BD_API const char* bd_version(void);

typedef struct bd_run_options {
  int has_seed;
  int64_t seed;
  const char* history; /* "none", "mini", "full" or NULL */
  int jobs;            /* <= 0 means 1 */
} bd_run_options;

/* Output: JSON summary of the run. `options` may be NULL. */
BD_API bd_status bd_run_experiment(bd_session* session, const char* config_path,
                                   const char* out_dir, const bd_run_options* options);

typedef struct bd_label_options {
  int samples;   /* <= 0 means 5 */
  int threshold; /* <= 0 means 3 */
  double temperature;
  const char* prompt_set; /* NULL means "default" */
} bd_label_options;

/* Output: path of the verdict log. */
BD_API bd_status bd_label_known_words(bd_session* session, const char* deck_path,
                                      const char* agent_binding_path,
                                      const char* judge_binding_path, const char* out_path,
                                      const bd_label_options* options);

/* Output: one-row CSV of precision, recall, f1, accuracy. */
BD_API bd_status bd_evaluate_judge(bd_session* session, const char* fixture_path,
                                   const char* judge_binding_path, const char* prompt_set);

typedef struct bd_report_options {
  const char* kind;    /* "leaderboard" (default) or "lkr_series" */
  const char* setting; /* "history_type" (default) or "correct_definition_points" */
  const char* group;   /* lkr_series only; NULL when unambiguous */
  const char* history; /* lkr_series only; NULL when unambiguous */
  double std_scale;    /* <= 0 means 1 */
} bd_report_options;

/* Output: report CSV. Metadata: JSON describing the aggregation. */
BD_API bd_status bd_report(bd_session* session, const char* run_dir,
                           const bd_report_options* options);

#ifdef __cplusplus
}
#endif

#endif /* BALDERDASH_BALDERDASH_H_ */
