// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

#include "dimlin/dimlin.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "dimlin/driver.hpp"
#include "dimlin/oracle.hpp"

struct dimlin_program {
  dimlin::Program program;
};

struct dimlin_result {
  dimlin_verdict verdict = DIMLIN_UNKNOWN;
  unsigned k = 0;
  std::string model;
  std::string witness;
  std::string reason;
  std::string history;
};

namespace {

thread_local std::string last_error;

dimlin_status fail(dimlin_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs `body`, mapping exceptions to status codes.
template <typename F>
dimlin_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const dimlin::ParseError& e) {
    return fail(DIMLIN_ERR_PARSE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(DIMLIN_ERR_INVALID, e.what());
  } catch (const std::exception& e) {
    return fail(DIMLIN_ERR_INTERNAL, e.what());
  }
}

dimlin::NameStyle style(int bracket_names) {
  return bracket_names ? dimlin::NameStyle::Bracket : dimlin::NameStyle::Exchange;
}

dimlin::Strategy strategy(dimlin_strategy s) {
  return s == DIMLIN_STRATEGY_DIM_ORDERED ? dimlin::Strategy::DimOrdered
                                          : dimlin::Strategy::Permute;
}

}  // namespace

extern "C" {

const char* dimlin_last_error(void) { return last_error.c_str(); }

void dimlin_string_free(char* s) { std::free(s); }

void dimlin_solve_options_init(dimlin_solve_options* opts) {
  if (!opts) return;
  dimlin::DriverConfig d;
  opts->max_k = d.maxK;
  opts->strategy = DIMLIN_STRATEGY_PERMUTE;
  opts->reuse = d.reuse ? 1 : 0;
  opts->relaxed_guard = 0;
  opts->widen_delay = d.linear.widenDelay;
  opts->narrow_steps = d.linear.narrowSteps;
  opts->depth_bound = d.linear.depthBound;
  opts->timeout_seconds = d.timeoutSeconds;
}

dimlin_status dimlin_program_parse(const char* text, int decode_annotations,
                                   dimlin_program** out) {
  if (!text || !out) return fail(DIMLIN_ERR_INVALID, "null argument");
  return guarded([&] {
    dimlin::ParseOptions opts;
    opts.decode_annotations = decode_annotations != 0;
    auto* p = new dimlin_program{dimlin::parse_program(text, opts)};
    *out = p;
    return DIMLIN_OK;
  });
}

dimlin_status dimlin_program_load(const char* path, int decode_annotations,
                                  dimlin_program** out) {
  if (!path || !out) return fail(DIMLIN_ERR_INVALID, "null argument");
  std::ifstream in(path);
  if (!in) return fail(DIMLIN_ERR_IO, std::string("cannot open ") + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return dimlin_program_parse(ss.str().c_str(), decode_annotations, out);
}

void dimlin_program_free(dimlin_program* p) { delete p; }

size_t dimlin_program_clause_count(const dimlin_program* p) {
  return p ? p->program.clauses.size() : 0;
}

dimlin_status dimlin_program_print(const dimlin_program* p, int bracket_names, char** out) {
  if (!p || !out) return fail(DIMLIN_ERR_INVALID, "null argument");
  return guarded([&] {
    dimlin::PrintOptions po;
    po.names = style(bracket_names);
    po.labels = true;
    *out = dup(dimlin::print_program(p->program, po));
    return DIMLIN_OK;
  });
}

dimlin_status dimlin_solve(const dimlin_program* p, const dimlin_solve_options* opts,
                           dimlin_result** out) {
  if (!p || !out) return fail(DIMLIN_ERR_INVALID, "null argument");
  dimlin_solve_options o;
  dimlin_solve_options_init(&o);
  if (opts) o = *opts;
  return guarded([&] {
    dimlin::DriverConfig cfg;
    cfg.maxK = o.max_k;
    cfg.strategy = strategy(o.strategy);
    cfg.reuse = o.reuse != 0;
    cfg.kdim.relaxed_guard = o.relaxed_guard != 0;
    cfg.linear.widenDelay = o.widen_delay;
    cfg.linear.narrowSteps = o.narrow_steps;
    cfg.linear.depthBound = o.depth_bound;
    cfg.timeoutSeconds = o.timeout_seconds;
    dimlin::Outcome res = dimlin::solve(p->program, cfg);

    auto r = std::make_unique<dimlin_result>();
    r->k = res.k;
    switch (res.kind) {
      case dimlin::Outcome::Kind::Safe: {
        r->verdict = DIMLIN_SAFE;
        auto arities = dimlin::predicate_arities(p->program);
        r->model = dimlin::print_interpretation(res.model, dimlin::NameStyle::Exchange,
                                                &arities);
        break;
      }
      case dimlin::Outcome::Kind::Unsafe:
        r->verdict = DIMLIN_UNSAFE;
        r->witness = dimlin::print_trace(res.witness);
        break;
      case dimlin::Outcome::Kind::Unknown:
        r->verdict = DIMLIN_UNKNOWN;
        r->reason = res.reason;
        break;
    }
    for (const auto& it : res.history) {
      r->history += "k=" + std::to_string(it.k) + " " + it.event +
                    " clauses=" + std::to_string(it.linearClauses);
      if (it.trace) r->history += " " + dimlin::print_trace(*it.trace);
      r->history += "\n";
    }
    *out = r.release();
    return DIMLIN_OK;
  });
}

void dimlin_result_free(dimlin_result* r) { delete r; }

dimlin_verdict dimlin_result_verdict(const dimlin_result* r) {
  return r ? r->verdict : DIMLIN_UNKNOWN;
}

unsigned dimlin_result_k(const dimlin_result* r) { return r ? r->k : 0; }

const char* dimlin_result_model(const dimlin_result* r) { return r ? r->model.c_str() : ""; }

const char* dimlin_result_witness(const dimlin_result* r) {
  return r ? r->witness.c_str() : "";
}

const char* dimlin_result_reason(const dimlin_result* r) { return r ? r->reason.c_str() : ""; }

const char* dimlin_result_history(const dimlin_result* r) {
  return r ? r->history.c_str() : "";
}

dimlin_status dimlin_kdim(const dimlin_program* p, unsigned k, int relaxed_guard,
                          int bracket_names, char** out) {
  if (!p || !out) return fail(DIMLIN_ERR_INVALID, "null argument");
  return guarded([&] {
    dimlin::KdimOptions ko;
    ko.relaxed_guard = relaxed_guard != 0;
    dimlin::Program pk = dimlin::kdim(dimlin::normalize_program(p->program), k, ko);
    dimlin::PrintOptions po;
    po.names = style(bracket_names);
    po.labels = true;
    *out = dup(dimlin::print_program(pk, po));
    return DIMLIN_OK;
  });
}

dimlin_status dimlin_linearise(const dimlin_program* p, unsigned k, dimlin_strategy s,
                               int relaxed_guard, char** program_out, char** table_out) {
  if (!p || !program_out || !table_out) return fail(DIMLIN_ERR_INVALID, "null argument");
  return guarded([&] {
    dimlin::KdimOptions ko;
    ko.relaxed_guard = relaxed_guard != 0;
    dimlin::Program np = dimlin::normalize_program(p->program);
    dimlin::LinearProgram lp =
        dimlin::linearise_pe(dimlin::kdim(np, k, ko), dimlin::index_bound(np, k), strategy(s));
    dimlin::PrintOptions po;
    po.labels = true;
    *program_out = dup(dimlin::print_program(lp.program, po));
    *table_out = dup(dimlin::print_state_table(lp));
    return DIMLIN_OK;
  });
}

dimlin_status dimlin_check_model(const dimlin_program* p, const char* model_text,
                                 int decode_annotations, int* holds) {
  if (!p || !model_text || !holds) return fail(DIMLIN_ERR_INVALID, "null argument");
  return guarded([&] {
    dimlin::ParseOptions opts;
    opts.decode_annotations = decode_annotations != 0;
    dimlin::Interpretation m = dimlin::parse_interpretation(model_text, opts);
    *holds = dimlin::check_model(p->program, m) ? 1 : 0;
    return DIMLIN_OK;
  });
}

dimlin_status dimlin_confirm_cex(const dimlin_program* p, const char* trace, int* feasible) {
  if (!p || !trace || !feasible) return fail(DIMLIN_ERR_INVALID, "null argument");
  return guarded([&] {
    *feasible = dimlin::confirm_cex(p->program, dimlin::parse_trace(trace)) ? 1 : 0;
    return DIMLIN_OK;
  });
}

dimlin_status dimlin_oracle(const dimlin_program* p, const char* target,
                            int decode_annotations, unsigned depth, size_t max_nodes,
                            char** traces_out, int* complete) {
  if (!p || !target || !traces_out || !complete)
    return fail(DIMLIN_ERR_INVALID, "null argument");
  return guarded([&] {
    dimlin::ParseOptions opts;
    opts.decode_annotations = decode_annotations != 0;
    dimlin::EnumBudget b;
    b.maxDepth = depth;
    b.maxNodes = max_nodes;
    dimlin::EnumResult res = dimlin::enumerate_feasible_traces(
        dimlin::normalize_program(p->program), dimlin::parse_pred_name(target, opts), b);
    std::string text;
    for (const auto& t : res.trees) text += dimlin::print_trace(t) + "\n";
    *traces_out = dup(text);
    *complete = res.complete ? 1 : 0;
    return DIMLIN_OK;
  });
}

}  // extern "C"
