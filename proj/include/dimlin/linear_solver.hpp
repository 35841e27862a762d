// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

// Solver for linear clause systems: a polyhedral fixpoint yields a model or
// a backward search finds a feasible derivation of false.

#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "dimlin/chc_ast.hpp"
#include "dimlin/dimension.hpp"

namespace dimlin {

using Clock = std::chrono::steady_clock;

struct LinearSolverConfig {
  unsigned widenDelay = 2;
  unsigned narrowSteps = 1;
  unsigned depthBound = 200;
  std::size_t maxExpansions = 200000;
  std::optional<Clock::time_point> deadline;
};

class Timeout : public std::runtime_error {
 public:
  Timeout() : std::runtime_error("timeout") {}
};

struct SolverStatus {
  enum class Kind { Safe, Unsafe, Unknown };
  Kind kind = Kind::Unknown;
  Interpretation model;            // Safe
  std::vector<std::string> path;   // Unsafe: feasible; Unknown: abstract
};

/// One polyhedron per predicate; predicates without a derivation are absent.
Interpretation analyze_fixpoint(const Program& p, const LinearSolverConfig& cfg = {});

/// Clause ids from a false-headed clause down to a fact, or none within the
/// depth bound.
std::optional<std::vector<std::string>> find_feasible_path(
    const Program& p, const Interpretation& model, const LinearSolverConfig& cfg = {},
    std::vector<std::string>* abstract_path = nullptr);

SolverStatus solve_linear(const Program& p, const LinearSolverConfig& cfg = {});

}  // namespace dimlin
