// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

// Trace trees, tree dimension, the at-most-k-dimension transformation and
// the interpretation plumbing around it.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "dimlin/chc_ast.hpp"
#include "dimlin/polyhedra.hpp"

namespace dimlin {

struct TraceTree {
  std::string id;
  std::vector<TraceTree> children;

  std::size_t size() const;
  std::size_t height() const;

  friend bool operator==(const TraceTree&, const TraceTree&) = default;
  friend auto operator<=>(const TraceTree&, const TraceTree&) = default;
};

unsigned tree_dimension(const TraceTree& t);

/// `c3(c2(c1,c1),c1)`; leaves print without parentheses.
std::string print_trace(const TraceTree& t);
TraceTree parse_trace(std::string_view text);

/// Throws std::invalid_argument unless every node names a clause of `p` with
/// as many body atoms as the node has children, and the child clause heads
/// match the body predicates.
void check_trace_shape(const Program& p, const TraceTree& t);

/// Predicate -> disjunction of polyhedra over canonical_args(arity). Absent
/// predicates are False.
using Interpretation = std::map<PredId, std::vector<Polyhedron>>;

/// One `p(A,B) :- cs.` line per disjunct; predicates without disjuncts print
/// `p(A,B) :- 1=0.` when listed in `arities`.
std::string print_interpretation(
    const Interpretation& m, NameStyle style = NameStyle::Exchange,
    const std::map<PredId, std::size_t>* arities = nullptr);
/// Reads the format above. Non-head variables are projected out.
Interpretation parse_interpretation(std::string_view text,
                                    const ParseOptions& opts = {});

using ProvenanceMap = std::map<std::string, Provenance>;
ProvenanceMap provenance_map(const Program& p);

struct KdimOptions {
  /// Drop the "d >= 2 if r > 2" guard on the two-children case.
  bool relaxed_guard = false;
};

/// The at-most-k-dimension program. Clause ids: `<c>_d<d>` (linear),
/// `<c>_d<d>_j<j>` and `<c>_d<d>_p<i>_<j>` (non-linear cases),
/// `eps_<pred>_<d>_<e>` (epsilon clauses). The query is false^{<=k}.
Program kdim(const Program& p, unsigned k, const KdimOptions& opts = {});

/// Disjunctive interpretation of p's predicates from one of kdim(p, k).
Interpretation lift(const Interpretation& s, const Program& p, unsigned k);

/// Drops the entries of predicates heading clauses used in t.
Interpretation restrict_interpretation(const Interpretation& s,
                                       const TraceTree& t, const Program& prog);

/// Contracts epsilon nodes and relabels nodes with their origin clauses.
TraceTree map_trace(const TraceTree& t, const ProvenanceMap& prov);

}  // namespace dimlin
