// Copyright 2026 The NRE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the rule engine.
 *
 * Every function returning nre_status leaves a message retrievable with
 * nre_last_error() on failure. Strings returned through char** are owned by
 * the caller and released with nre_free_string(). */
#ifndef NRE_NRE_H_
#define NRE_NRE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NRE_API __declspec(dllexport)
#else
#define NRE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct nre_engine nre_engine;
typedef struct nre_corpus nre_corpus;

typedef enum nre_status {
  NRE_OK = 0,
  NRE_E_USAGE = 1,    /* bad option, key or argument */
  NRE_E_SYNTAX = 2,   /* rule dialect error */
  NRE_E_LAYOUT = 3,   /* invalid RPN program or execution failure */
  NRE_E_DATA = 4,     /* malformed input file or missing entity */
  NRE_E_IO = 5,
  NRE_E_NUMERIC = 6,  /* non-finite loss or gradient */
  NRE_E_INTERNAL = 7
} nre_status;

NRE_API const char* nre_version(void);

/* Thread-local; valid until the next failing call on this thread. */
NRE_API const char* nre_last_error(void);
/* Error kind name such as "UnbalancedGroup", or "" after success. */
NRE_API const char* nre_last_error_kind(void);
NRE_API void nre_free_string(char* s);

NRE_API nre_status nre_engine_create(nre_engine** out);
NRE_API void nre_engine_destroy(nre_engine* engine);

NRE_API nre_status nre_engine_load_config(nre_engine* engine, const char* path);
NRE_API nre_status nre_engine_set_option(nre_engine* engine, const char* key,
                                         const char* value);
NRE_API nre_status nre_engine_get_option(nre_engine* engine, const char* key,
                                         char** value);

NRE_API nre_status nre_engine_load_rules(nre_engine* engine, const char* path);
NRE_API nre_status nre_engine_add_rule(nre_engine* engine, const char* id,
                                       const char* label, const char* text);
NRE_API size_t nre_engine_rule_count(const nre_engine* engine);
/* NULL when index is out of range. */
NRE_API const char* nre_engine_rule_id(const nre_engine* engine, size_t index);
/* Textual RPN of rule `index`. */
NRE_API nre_status nre_engine_compile_text(nre_engine* engine, size_t index,
                                           char** rpn);

NRE_API nre_status nre_engine_load_embeddings(nre_engine* engine,
                                              const char* path);
NRE_API nre_status nre_engine_load_checkpoint(nre_engine* engine,
                                              const char* path);
NRE_API nre_status nre_engine_save_checkpoint(nre_engine* engine,
                                              const char* path);

NRE_API nre_status nre_corpus_load(nre_engine* engine, const char* path,
                                   nre_corpus** out);
NRE_API void nre_corpus_destroy(nre_corpus* corpus);
NRE_API size_t nre_corpus_size(const nre_corpus* corpus);
NRE_API const char* nre_corpus_id(const nre_corpus* corpus, size_t index);

/* Sorted, comma-separated labels predicted for a raw text. */
NRE_API nre_status nre_engine_match_text(nre_engine* engine, const char* text,
                                         char** labels);
/* One "id<TAB>labels" line per case, in corpus order. */
NRE_API nre_status nre_engine_match(nre_engine* engine,
                                    const nre_corpus* corpus, char** lines);
/* Either output pointer may be NULL. */
NRE_API nre_status nre_engine_evaluate(nre_engine* engine,
                                       const nre_corpus* corpus, char** table,
                                       char** lines, double* precision,
                                       double* recall, double* f1);
NRE_API nre_status nre_engine_explain(nre_engine* engine, const char* rule_id,
                                      const nre_corpus* corpus,
                                      const char* case_id, char** trace);

/* Final-epoch values are written to the optional out pointers. */
NRE_API nre_status nre_engine_train_find(nre_engine* engine,
                                         const nre_corpus* corpus,
                                         double* final_loss);
NRE_API nre_status nre_engine_finetune(nre_engine* engine,
                                       const nre_corpus* corpus, int epochs,
                                       double* final_reward);
NRE_API nre_status nre_engine_grad_check(nre_engine* engine,
                                         double* max_relative_error);

/* Splits the records of a corpus file (is_rules = 0) or rule file
 * (is_rules = 1) into <prefix>.train, <prefix>.validation and <prefix>.test,
 * copying the original lines. Sizes are written to `sizes` when non-NULL. */
NRE_API nre_status nre_split_file(nre_engine* engine, const char* path,
                                  int is_rules, double train, double validation,
                                  double test, uint64_t seed,
                                  const char* out_prefix, size_t sizes[3]);

#ifdef __cplusplus
}
#endif

#endif /* NRE_NRE_H_ */
