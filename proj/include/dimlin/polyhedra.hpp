// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

// Convex polyhedra in constraint form.

#pragma once

#include <optional>
#include <vector>

#include "dimlin/lin_constraints.hpp"

namespace dimlin {

class Polyhedron {
 public:
  Polyhedron() = default;
  /// Throws std::invalid_argument if `cs` mentions a variable outside `dims`.
  Polyhedron(std::vector<VarId> dims, const ConstraintSet& cs);

  static Polyhedron top(std::vector<VarId> dims);
  static Polyhedron bottom(std::vector<VarId> dims);

  const std::vector<VarId>& dims() const { return dims_; }
  const ConstraintSet& constraints() const { return cs_; }
  bool is_empty() const { return empty_; }

  /// Same set over positionally renamed dimensions.
  Polyhedron rename_dims(const std::vector<VarId>& dims) const;

 private:
  std::vector<VarId> dims_;
  ConstraintSet cs_;
  bool empty_ = false;
};

Polyhedron meet(const Polyhedron& p, const Polyhedron& q);
Polyhedron meet(const Polyhedron& p, const AtomicConstraint& a);
Polyhedron project(const Polyhedron& p, const std::vector<VarId>& keep);
/// q is a subset of p.
bool includes(const Polyhedron& p, const Polyhedron& q);
bool equivalent(const Polyhedron& p, const Polyhedron& q);
Polyhedron convex_hull(const Polyhedron& p, const Polyhedron& q);
/// Constraints of p entailed by q, plus the equalities of q entailed by p.
Polyhedron widen(const Polyhedron& p, const Polyhedron& q);

bool included_in_union(const Polyhedron& q, const std::vector<Polyhedron>& ps);
/// A nonempty part of q outside every member of ps, if any.
std::optional<Polyhedron> uncovered_part(const Polyhedron& q,
                                         const std::vector<Polyhedron>& ps);

}  // namespace dimlin
