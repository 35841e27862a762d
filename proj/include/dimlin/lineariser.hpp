// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

// Linearisation of dimension-bounded programs by specialising a bounded
// goal-stack interpreter, and partial-model substitution.

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dimlin/chc_ast.hpp"
#include "dimlin/dimension.hpp"

namespace dimlin {

struct GoalState {
  std::vector<PredId> stack;  // front is resolved next

  friend bool operator==(const GoalState&, const GoalState&) = default;
  friend auto operator<=>(const GoalState&, const GoalState&) = default;
};

std::string print_goal_state(const GoalState& g,
                             NameStyle style = NameStyle::Exchange);

enum class Strategy { Permute, DimOrdered };

struct StepProvenance {
  std::string origin;               // clause of the dimension-bounded program
  std::vector<std::size_t> order;   // body indices in stack order
  /// Per body index, the epsilon clause unfolded there (dim-ordered only).
  std::vector<std::string> epsilon;
};

struct LinearProgram {
  Program program;  // query: unannotated false
  std::map<PredId, GoalState> states;
  /// States generated but removed because they cannot reach the empty state.
  std::set<PredId> pruned;
  std::map<std::string, StepProvenance> steps;
  PredId initial;
  PredId empty;
  std::string goal_id = "goal";
  std::string accept_id = "accept";

  /// The state predicate whose stack is exactly [q], if generated.
  const PredId* singleton(const PredId& q) const;
};

/// (i-1)*k+1 with i the maximum body length of the original program; 1 when
/// i <= 1.
unsigned index_bound(const Program& original, unsigned k);

/// Replaces the definition of every predicate in `s` by one fact per
/// nonempty disjunct. Fact ids are `m_<pred>_<n>`.
Program substitute_model(const Program& pk, const Interpretation& s);

LinearProgram linearise_pe(const Program& p, unsigned index,
                           Strategy strategy = Strategy::Permute);

/// Replays the goal stack along a derivation of the goal clause and
/// rebuilds the trace tree over `p` (the program given to linearise_pe).
TraceTree back_map(const std::vector<std::string>& path, const LinearProgram& lp);

std::string print_state_table(const LinearProgram& lp,
                              NameStyle style = NameStyle::Exchange);

}  // namespace dimlin
