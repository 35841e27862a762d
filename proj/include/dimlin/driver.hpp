// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

// The dimension-bounded refinement loop, model checking and counterexample
// confirmation.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dimlin/dimension.hpp"
#include "dimlin/linear_solver.hpp"
#include "dimlin/lineariser.hpp"

namespace dimlin {

/// Every clause holds under `m`; absent predicates are False and `false`
/// is always False.
bool check_model(const Program& p, const Interpretation& m);

/// The clause constraints along `t`, connected parent to child, are
/// satisfiable. Throws std::invalid_argument on a shape mismatch.
bool confirm_cex(const Program& p, const TraceTree& t);

struct DriverConfig {
  unsigned maxK = 5;
  Strategy strategy = Strategy::Permute;
  bool reuse = true;
  KdimOptions kdim;
  LinearSolverConfig linear;
  unsigned timeoutSeconds = 300;
};

struct Iteration {
  unsigned k = 0;
  std::string event;  // safe, lift-rejected, refined, unsafe, unknown
  std::size_t linearClauses = 0;
  std::optional<TraceTree> trace;  // back-mapped counterexample, if any
};

struct Outcome {
  enum class Kind { Safe, Unsafe, Unknown };
  Kind kind = Kind::Unknown;
  Interpretation model;  // Safe
  TraceTree witness;     // Unsafe, over the original program
  std::string reason;    // Unknown
  unsigned k = 0;
  std::vector<Iteration> history;
};

const char* to_string(Outcome::Kind k);

/// Interpretation of the annotated predicates of `pk` read off a model of
/// its linearisation.
Interpretation extract_annotated(const Program& pk, const LinearProgram& lp,
                                 const Interpretation& linear_model,
                                 const Interpretation& substituted);

Outcome solve(const Program& p, const DriverConfig& cfg = {});

}  // namespace dimlin
