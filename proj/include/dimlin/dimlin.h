/* Copyright 2026 The dimlin Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of the dimlin CHC solver. Every function returns a status
 * code; on failure dimlin_last_error() describes the problem. Strings
 * returned through char** parameters are owned by the caller and released
 * with dimlin_string_free().
 */

#ifndef DIMLIN_DIMLIN_H_
#define DIMLIN_DIMLIN_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#pragma GCC visibility push(default)
#endif

typedef enum {
  DIMLIN_OK = 0,
  DIMLIN_ERR_PARSE = 1,
  DIMLIN_ERR_IO = 2,
  DIMLIN_ERR_INVALID = 3,
  DIMLIN_ERR_INTERNAL = 4
} dimlin_status;

typedef enum {
  DIMLIN_SAFE = 0,
  DIMLIN_UNSAFE = 1,
  DIMLIN_UNKNOWN = 2
} dimlin_verdict;

typedef enum {
  DIMLIN_STRATEGY_PERMUTE = 0,
  DIMLIN_STRATEGY_DIM_ORDERED = 1
} dimlin_strategy;

typedef struct dimlin_program dimlin_program;
typedef struct dimlin_result dimlin_result;

typedef struct {
  unsigned max_k;
  dimlin_strategy strategy;
  int reuse;
  int relaxed_guard;
  unsigned widen_delay;
  unsigned narrow_steps;
  unsigned depth_bound;
  unsigned timeout_seconds;
} dimlin_solve_options;

/* Message for the last failed call on this thread. */
const char* dimlin_last_error(void);
void dimlin_string_free(char* s);

/* maxK 5, permute, reuse on, widen delay 2, one narrowing step, depth
 * bound 200, 300 s timeout. */
void dimlin_solve_options_init(dimlin_solve_options* opts);

/* decode_annotations reads p_e3 / p_le3 as annotated predicates. */
dimlin_status dimlin_program_parse(const char* text, int decode_annotations,
                                   dimlin_program** out);
dimlin_status dimlin_program_load(const char* path, int decode_annotations,
                                  dimlin_program** out);
void dimlin_program_free(dimlin_program* p);
size_t dimlin_program_clause_count(const dimlin_program* p);
/* bracket_names selects fib(0)/fib[0] style instead of fib_e0/fib_le0. */
dimlin_status dimlin_program_print(const dimlin_program* p, int bracket_names,
                                   char** out);

dimlin_status dimlin_solve(const dimlin_program* p,
                           const dimlin_solve_options* opts,
                           dimlin_result** out);
void dimlin_result_free(dimlin_result* r);
dimlin_verdict dimlin_result_verdict(const dimlin_result* r);
unsigned dimlin_result_k(const dimlin_result* r);
/* Constrained facts `p(A,B) :- cs.`, one per line; empty unless safe. */
const char* dimlin_result_model(const dimlin_result* r);
/* Trace term over the input program; empty unless unsafe. */
const char* dimlin_result_witness(const dimlin_result* r);
/* Empty unless unknown; "timeout" on timeout. */
const char* dimlin_result_reason(const dimlin_result* r);
/* One line per iteration: `k=<n> <event> clauses=<n> [trace]`. */
const char* dimlin_result_history(const dimlin_result* r);

dimlin_status dimlin_kdim(const dimlin_program* p, unsigned k,
                          int relaxed_guard, int bracket_names, char** out);
/* The linear program for kdim(p, k) and its state table. */
dimlin_status dimlin_linearise(const dimlin_program* p, unsigned k,
                               dimlin_strategy strategy, int relaxed_guard,
                               char** program_out, char** table_out);
dimlin_status dimlin_check_model(const dimlin_program* p,
                                 const char* model_text,
                                 int decode_annotations, int* holds);
dimlin_status dimlin_confirm_cex(const dimlin_program* p, const char* trace,
                                 int* feasible);
/* Feasible trace terms for `target`, one per line, up to the given height. */
dimlin_status dimlin_oracle(const dimlin_program* p, const char* target,
                            int decode_annotations, unsigned depth,
                            size_t max_nodes, char** traces_out,
                            int* complete);

#if defined(__GNUC__)
#pragma GCC visibility pop
#endif

#ifdef __cplusplus
}
#endif

#endif /* DIMLIN_DIMLIN_H_ */
