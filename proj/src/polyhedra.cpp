// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

#include "dimlin/polyhedra.hpp"

#include <stdexcept>

namespace dimlin {

namespace {

void same_dims(const Polyhedron& p, const Polyhedron& q) {
  if (p.dims() != q.dims())
    throw std::invalid_argument("polyhedra over different dimensions");
}

}  // namespace

Polyhedron::Polyhedron(std::vector<VarId> dims, const ConstraintSet& cs)
    : dims_(std::move(dims)) {
  VarSet allowed(dims_.begin(), dims_.end());
  for (const auto& v : cs.variables()) {
    if (!allowed.count(v))
      throw std::invalid_argument("constraint mentions unknown variable " +
                                  v.name);
  }
  cs_ = remove_redundant(cs);
  empty_ = cs_.trivially_false();
}

Polyhedron Polyhedron::top(std::vector<VarId> dims) {
  return Polyhedron(std::move(dims), {});
}

Polyhedron Polyhedron::bottom(std::vector<VarId> dims) {
  return Polyhedron(std::move(dims), {AtomicConstraint::falsum()});
}

Polyhedron Polyhedron::rename_dims(const std::vector<VarId>& dims) const {
  if (dims.size() != dims_.size())
    throw std::invalid_argument("rename_dims: arity mismatch");
  Renaming r;
  for (std::size_t i = 0; i < dims.size(); ++i) r[dims_[i]] = dims[i];
  Polyhedron out;
  out.dims_ = dims;
  out.cs_ = cs_.rename(r);
  out.empty_ = empty_;
  return out;
}

Polyhedron meet(const Polyhedron& p, const Polyhedron& q) {
  same_dims(p, q);
  if (p.is_empty()) return p;
  if (q.is_empty()) return q;
  return Polyhedron(p.dims(), p.constraints() & q.constraints());
}

Polyhedron meet(const Polyhedron& p, const AtomicConstraint& a) {
  if (p.is_empty()) return p;
  ConstraintSet cs = p.constraints();
  cs.add(a);
  return Polyhedron(p.dims(), cs);
}

Polyhedron project(const Polyhedron& p, const std::vector<VarId>& keep) {
  VarSet have(p.dims().begin(), p.dims().end());
  VarSet kept;
  for (const auto& v : keep) {
    if (!have.count(v))
      throw std::invalid_argument("project: unknown variable " + v.name);
    kept.insert(v);
  }
  if (p.is_empty()) return Polyhedron::bottom(keep);
  VarSet drop;
  for (const auto& v : p.dims())
    if (!kept.count(v)) drop.insert(v);
  return Polyhedron(keep, eliminate_vars(drop, p.constraints()));
}

bool includes(const Polyhedron& p, const Polyhedron& q) {
  same_dims(p, q);
  if (q.is_empty()) return true;
  if (p.is_empty()) return false;
  return entails(q.constraints(), p.constraints());
}

bool equivalent(const Polyhedron& p, const Polyhedron& q) {
  return includes(p, q) && includes(q, p);
}

Polyhedron convex_hull(const Polyhedron& p, const Polyhedron& q) {
  same_dims(p, q);
  if (p.is_empty()) return q;
  if (q.is_empty()) return p;
  // x = y + z, y in l1*P, z in l2*Q, l1 + l2 = 1, l1, l2 >= 0.
  const VarId l1("__l1"), l2("__l2");
  Renaming ry, rz;
  ConstraintSet sys;
  VarSet aux{l1, l2};
  for (std::size_t i = 0; i < p.dims().size(); ++i) {
    const VarId& x = p.dims()[i];
    VarId y("__y" + std::to_string(i)), z("__z" + std::to_string(i));
    ry[x] = y;
    rz[x] = z;
    aux.insert(y);
    aux.insert(z);
    sys.add(AtomicConstraint::eq(LinExpr::variable(x),
                                 LinExpr::variable(y) + LinExpr::variable(z)));
  }
  auto scaled = [&](const Polyhedron& src, const Renaming& r, const VarId& l) {
    for (const auto& a : src.constraints()) {
      LinExpr e = a.expr.rename(r);
      Rational c = e.constant();
      e.add_constant(-c);
      e.add_term(l, c);
      sys.add({e, a.rel == Relation::Gt ? Relation::Ge : a.rel});
    }
  };
  scaled(p, ry, l1);
  scaled(q, rz, l2);
  sys.add(AtomicConstraint::ge(LinExpr::variable(l1), LinExpr()));
  sys.add(AtomicConstraint::ge(LinExpr::variable(l2), LinExpr()));
  sys.add(AtomicConstraint::eq(LinExpr::variable(l1) + LinExpr::variable(l2),
                               LinExpr(Rational(1))));
  return Polyhedron(p.dims(), eliminate_vars(aux, sys));
}

Polyhedron widen(const Polyhedron& p, const Polyhedron& q) {
  same_dims(p, q);
  if (p.is_empty()) return q;
  if (q.is_empty()) return p;
  ConstraintSet kept;
  for (const auto& e : q.constraints()) {
    if (e.rel == Relation::Eq && entails(p.constraints(), e)) kept.add(e);
  }
  for (const auto& a : p.constraints()) {
    if (a.rel == Relation::Eq) {
      for (const auto& half : {AtomicConstraint{a.expr, Relation::Ge},
                               AtomicConstraint{-a.expr, Relation::Ge}}) {
        if (entails(q.constraints(), half)) kept.add(half);
      }
    } else if (entails(q.constraints(), a)) {
      kept.add(a);
    }
  }
  return Polyhedron(p.dims(), kept);
}

namespace {

std::optional<Polyhedron> uncovered_from(const Polyhedron& q,
                                         const std::vector<Polyhedron>& ps,
                                         std::size_t from) {
  if (q.is_empty()) return std::nullopt;
  if (from == ps.size()) return q;
  const Polyhedron& first = ps[from];
  same_dims(q, first);
  if (first.is_empty()) return uncovered_from(q, ps, from + 1);
  if (includes(first, q)) return std::nullopt;
  for (const auto& a : first.constraints()) {
    for (const auto& d : negate_atomic(a)) {
      if (auto w = uncovered_from(meet(q, d), ps, from + 1)) return w;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Polyhedron> uncovered_part(const Polyhedron& q,
                                         const std::vector<Polyhedron>& ps) {
  return uncovered_from(q, ps, 0);
}

bool included_in_union(const Polyhedron& q, const std::vector<Polyhedron>& ps) {
  return !uncovered_part(q, ps).has_value();
}

}  // namespace dimlin
