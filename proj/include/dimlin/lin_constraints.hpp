// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

// Exact linear rational arithmetic over conjunctions of atomic constraints:
// satisfiability, projection (Fourier-Motzkin), entailment and negation.

#pragma once

#include <initializer_list>
#include <vector>

#include "dimlin/chc_ast.hpp"

namespace dimlin {

/// Conjunction of atomic constraints. Members are kept in normalised form,
/// without syntactic duplicates and without trivially true members.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  ConstraintSet(std::initializer_list<AtomicConstraint> cs);
  explicit ConstraintSet(const std::vector<AtomicConstraint>& cs);

  void add(const AtomicConstraint& c);
  void add_all(const ConstraintSet& other);

  const std::vector<AtomicConstraint>& constraints() const { return cs_; }
  auto begin() const { return cs_.begin(); }
  auto end() const { return cs_.end(); }
  std::size_t size() const { return cs_.size(); }
  bool empty() const { return cs_.empty(); }

  VarSet variables() const;
  /// Contains a variable-free false constraint.
  bool trivially_false() const { return trivially_false_; }

  ConstraintSet rename(const Renaming& renaming) const;

  friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;

 private:
  std::vector<AtomicConstraint> cs_;
  bool trivially_false_ = false;
};

ConstraintSet operator&(ConstraintSet a, const ConstraintSet& b);

/// True iff the conjunction has a rational solution.
bool satisfiable(const ConstraintSet& c);

/// Projects out `vars`. The result is free of redundant constraints; an
/// unsatisfiable input yields `{-1>=0}`.
ConstraintSet eliminate_vars(const VarSet& vars, const ConstraintSet& c);

/// Disjunction equivalent to the negation of `a`.
std::vector<AtomicConstraint> negate_atomic(const AtomicConstraint& a);

bool entails(const ConstraintSet& c, const AtomicConstraint& a);
bool entails(const ConstraintSet& c, const ConstraintSet& d);
bool equivalent(const ConstraintSet& a, const ConstraintSet& b);

/// Drops every member entailed by the remaining ones and turns opposed
/// inequality pairs into equalities.
ConstraintSet remove_redundant(const ConstraintSet& c);

}  // namespace dimlin
