// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

// Brute-force bounded derivation enumeration, for tests only.

#pragma once

#include <string>
#include <vector>

#include "dimlin/chc_ast.hpp"
#include "dimlin/dimension.hpp"
#include "dimlin/lineariser.hpp"

namespace dimlin {

struct EnumBudget {
  std::size_t maxDepth = 6;       // tree height, a leaf has height 1
  std::size_t maxNodes = 50000;   // candidate nodes examined
  std::size_t maxTrees = 100000;  // trees returned
};

struct EnumResult {
  std::vector<TraceTree> trees;
  bool complete = true;
};

/// Every feasible trace tree for `target` of height <= maxDepth, ordered by
/// height, then by clause position, then by children.
EnumResult enumerate_feasible_traces(const Program& p, const PredId& target,
                                     const EnumBudget& b);

enum class Derivability { Yes, NoWithinBudget, BudgetExhausted };

const char* to_string(Derivability d);

Derivability derivable(const Program& p, const PredId& target, const EnumBudget& b);

/// Derivability of the goal in a linearised program, bounding the height of
/// the back-mapped tree by maxDepth.
Derivability derivable_linear(const LinearProgram& lp, const EnumBudget& b);

struct PathResult {
  std::vector<std::vector<std::string>> paths;
  bool complete = true;
};

/// Feasible goal-to-accept paths whose back-mapped tree has height <=
/// maxDepth.
PathResult enumerate_linear_paths(const LinearProgram& lp, const EnumBudget& b);

/// Conjunction of the constraints of all clauses along the path with
/// arguments connected between consecutive clauses.
ConstraintSet path_constraint(const Program& p, const std::vector<std::string>& path);

/// Same for a trace tree; every node's clause is renamed apart.
ConstraintSet tree_constraint(const Program& p, const TraceTree& t);

}  // namespace dimlin
