/* Copyright 2026 The SubstiSift Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SUBSTISIFT_SUBSTISIFT_H_
#define SUBSTISIFT_SUBSTISIFT_H_

// Stable C interface to the SubstiSift library.
//
// Every fallible call returns an ss_status; on failure the message is
// available from ss_last_error() on the same thread until the next call.
// Objects are opaque handles released with their matching *_free function.
// Strings returned through char** are heap-allocated; release them with
// ss_string_free.

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SS_API __declspec(dllexport)
#elif defined(SUBSTISIFT_BUILDING_LIBRARY)
#define SS_API __attribute__((visibility("default")))
#else
#define SS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ss_status {
  SS_OK = 0,
  SS_ERR_INVALID_ARGUMENT = 1,
  SS_ERR_IO = 2,
  SS_ERR_PARSE = 3,
  SS_ERR_RUNTIME = 4,
  SS_ERR_NETWORK = 5,  // retriable
  SS_ERR_PROTOCOL = 6,
} ss_status;

typedef struct ss_dataset ss_dataset;
typedef struct ss_model ss_model;
typedef struct ss_lexicon ss_lexicon;
typedef struct ss_token_sets ss_token_sets;
typedef struct ss_dictionary ss_dictionary;

SS_API const char* ss_version(void);
SS_API const char* ss_last_error(void);
SS_API const char* ss_status_name(ss_status status);
SS_API void ss_string_free(char* s);

// "error", "info" or "debug". Log lines go to stderr.
SS_API ss_status ss_set_log_level(const char* level);

// ---- Datasets -------------------------------------------------------------

// Loading follows the extension: ".tsv" is text<TAB>label, anything else
// JSONL. Saving always writes JSONL.
SS_API ss_status ss_dataset_load(const char* path, ss_dataset** out);
SS_API ss_status ss_dataset_save(const ss_dataset* dataset, const char* path);
SS_API ss_status ss_dataset_size(const ss_dataset* dataset, size_t* out);
SS_API ss_status ss_dataset_num_classes(const ss_dataset* dataset, int* out);
SS_API void ss_dataset_free(ss_dataset* dataset);

// The built-in two-class sentiment corpus.
SS_API ss_status ss_dataset_synthetic(int64_t size, uint64_t seed,
                                      double label_noise,
                                      double contrast_rate, ss_dataset** out);
// Seeded shuffle, then valid and test take floor(ratio * n) each.
SS_API ss_status ss_dataset_split(const ss_dataset* dataset,
                                  double train_ratio, double valid_ratio,
                                  double test_ratio, uint64_t seed,
                                  ss_dataset** train, ss_dataset** valid,
                                  ss_dataset** test);

// attack: "badnet", "insertsent" or "template:N" (N in 1..5).
SS_API ss_status ss_dataset_poison(const ss_dataset* train, const char* attack,
                                   int target_label, double rate,
                                   uint64_t seed, ss_dataset** out);
// Drops target-label examples and poisons the rest.
SS_API ss_status ss_dataset_poison_testset(const ss_dataset* test,
                                           const char* attack,
                                           int target_label, uint64_t seed,
                                           ss_dataset** out);

// ---- Victim models ----------------------------------------------------------

typedef struct ss_train_options {
  uint64_t seed;
  int epochs;
  double learning_rate;
  double l2;
} ss_train_options;

SS_API ss_train_options ss_train_options_default(void);
SS_API ss_status ss_model_train(const ss_dataset* train,
                                const ss_train_options* options,
                                ss_model** out);
// A local model file, or an http:// scoring endpoint.
SS_API ss_status ss_model_open(const char* path_or_url, ss_model** out);
// Only local models can be saved.
SS_API ss_status ss_model_save(const ss_model* model, const char* path);
SS_API ss_status ss_model_num_classes(const ss_model* model, int* out);
// Writes num_classes probabilities; capacity must be at least that many.
SS_API ss_status ss_model_score(const ss_model* model, const char* text,
                                double* probs, size_t capacity);
SS_API ss_status ss_model_predict(const ss_model* model, const char* text,
                                  int* label);
SS_API ss_status ss_model_accuracy(const ss_model* model,
                                   const ss_dataset* dataset, double* out);
SS_API void ss_model_free(ss_model* model);

// ---- Tag lexicon ------------------------------------------------------------

SS_API ss_status ss_lexicon_bundled(ss_lexicon** out);
SS_API ss_status ss_lexicon_load(const char* path, ss_lexicon** out);
SS_API void ss_lexicon_free(ss_lexicon* lexicon);

// ---- Token sets and substitution dictionary --------------------------------

// Frequencies come from `clean` (sample_size 0 means every example). The
// model contributes its vocabulary and any reserved tokens; it may be NULL.
SS_API ss_status ss_token_sets_build(const ss_dataset* clean,
                                     const ss_model* model,
                                     const ss_lexicon* lexicon,
                                     int64_t sample_size, double k,
                                     uint64_t seed, ss_token_sets** out);
SS_API ss_status ss_token_sets_load(const char* path, ss_token_sets** out);
SS_API ss_status ss_token_sets_save(const ss_token_sets* sets,
                                    const char* path);
SS_API ss_status ss_token_sets_pool_size(const ss_token_sets* sets,
                                         size_t* out);
SS_API void ss_token_sets_free(ss_token_sets* sets);

SS_API ss_status ss_dictionary_build(const ss_model* model,
                                     const ss_token_sets* sets,
                                     const ss_lexicon* lexicon,
                                     double percentile, ss_dictionary** out);
SS_API ss_status ss_dictionary_load(const char* path, ss_dictionary** out);
SS_API ss_status ss_dictionary_save(const ss_dictionary* dictionary,
                                    const char* path);
SS_API void ss_dictionary_free(ss_dictionary* dictionary);

// ---- Detection --------------------------------------------------------------

typedef struct ss_detector_options {
  int n_iter;
  double p_star;
  double zeta;
  uint64_t seed;
  unsigned threads;
  int verbose;  // nonzero: include per-trial records
} ss_detector_options;

SS_API ss_detector_options ss_detector_options_default(void);

// One JSON verdict per line, in dataset order. Each line carries the
// example's ground-truth "poisoned" flag alongside the verdict.
SS_API ss_status ss_detect_dataset(const ss_model* model,
                                   const ss_dictionary* dictionary,
                                   const ss_token_sets* sets,
                                   const ss_lexicon* lexicon,
                                   const ss_dataset* dataset,
                                   const ss_detector_options* options,
                                   char** verdicts_jsonl);
SS_API ss_status ss_detect_text(const ss_model* model,
                                const ss_dictionary* dictionary,
                                const ss_token_sets* sets,
                                const ss_lexicon* lexicon, const char* text,
                                const ss_detector_options* options,
                                char** verdict_json);
// Confusion counts and metrics for verdict lines that carry "poisoned".
SS_API ss_status ss_detection_summary(const char* verdicts_jsonl,
                                      char** summary_json);

// ---- Forensics --------------------------------------------------------------

// Investigates the flagged lines of a verdict stream.
SS_API ss_status ss_forensics_from_verdicts(const char* verdicts_jsonl,
                                            const ss_token_sets* sets,
                                            char** report_json);
// Sentences of `source_label` rendered in the template's trigger syntax,
// one JSON object per line.
SS_API ss_status ss_simulate(const ss_dictionary* dictionary, int template_id,
                             int source_label, int count, uint64_t seed,
                             char** sentences_jsonl);

// ---- Experiments ------------------------------------------------------------

SS_API ss_status ss_experiment_run(const char* config_json, char** report_json,
                                   char** table_text);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // SUBSTISIFT_SUBSTISIFT_H_
