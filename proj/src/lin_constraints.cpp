// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

#include "dimlin/lin_constraints.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>

namespace dimlin {

// ---------------------------------------------------------------------------
// ConstraintSet

ConstraintSet::ConstraintSet(std::initializer_list<AtomicConstraint> cs) {
  for (const auto& c : cs) add(c);
}

ConstraintSet::ConstraintSet(const std::vector<AtomicConstraint>& cs) {
  for (const auto& c : cs) add(c);
}

void ConstraintSet::add(const AtomicConstraint& c) {
  AtomicConstraint n = c.normalized();
  if (auto t = n.constant_truth()) {
    if (*t) return;
    trivially_false_ = true;
  }
  if (std::find(cs_.begin(), cs_.end(), n) == cs_.end()) {
    cs_.push_back(std::move(n));
  }
}

void ConstraintSet::add_all(const ConstraintSet& other) {
  for (const auto& c : other.cs_) add(c);
}

VarSet ConstraintSet::variables() const {
  VarSet out;
  for (const auto& c : cs_) c.expr.collect_vars(out);
  return out;
}

ConstraintSet ConstraintSet::rename(const Renaming& renaming) const {
  ConstraintSet out;
  for (const auto& c : cs_) out.add(c.rename(renaming));
  return out;
}

ConstraintSet operator&(ConstraintSet a, const ConstraintSet& b) {
  a.add_all(b);
  return a;
}

// ---------------------------------------------------------------------------
// Dense Fourier-Motzkin engine

namespace {

struct Row {
  std::vector<Rational> a;
  Rational c;
  Relation rel = Relation::Ge;
};

enum class RowState { Normal, True, False };

// Scales the coefficient vector to coprime integers (the constant follows
// along and may stay fractional); equalities get a positive leading entry.
RowState normalize_row(Row& r) {
  mpz_class lcm_den = 1;
  bool any = false;
  for (const auto& x : r.a) {
    if (x == 0) continue;
    any = true;
    mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), x.get_den_mpz_t());
  }
  if (!any) {
    bool ok = r.rel == Relation::Eq   ? r.c == 0
              : r.rel == Relation::Ge ? r.c >= 0
                                      : r.c > 0;
    return ok ? RowState::True : RowState::False;
  }
  mpz_class g = 0;
  for (const auto& x : r.a) {
    if (x == 0) continue;
    mpz_class n = x.get_num() * (lcm_den / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  }
  Rational scale = Rational(lcm_den) / Rational(g);
  if (r.rel == Relation::Eq) {
    auto lead = std::find_if(r.a.begin(), r.a.end(),
                             [](const Rational& x) { return x != 0; });
    if (*lead < 0) scale = -scale;
  }
  if (scale != 1) {
    for (auto& x : r.a) x *= scale;
    r.c *= scale;
  }
  return RowState::Normal;
}

class Fm {
 public:
  Fm(std::vector<VarId> vars, const ConstraintSet& cs) : vars_(std::move(vars)) {
    std::map<VarId, std::size_t> index;
    for (std::size_t i = 0; i < vars_.size(); ++i) index[vars_[i]] = i;
    for (const auto& k : cs) {
      Row r;
      r.a.assign(vars_.size(), Rational(0));
      for (const auto& [v, coeff] : k.expr.terms()) r.a[index.at(v)] = coeff;
      r.c = k.expr.constant();
      r.rel = k.rel;
      add(std::move(r));
    }
    simplify();
  }

  bool infeasible() const { return infeasible_; }
  std::size_t rows() const { return rows_.size(); }

  bool mentions(std::size_t j) const {
    return std::any_of(rows_.begin(), rows_.end(),
                       [j](const Row& r) { return r.a[j] != 0; });
  }

  // Next variable to eliminate among `candidates`, or npos when none occurs.
  std::size_t pick(const std::vector<bool>& candidates) const {
    std::size_t best = npos;
    long best_cost = std::numeric_limits<long>::max();
    for (std::size_t j = 0; j < vars_.size(); ++j) {
      if (!candidates[j]) continue;
      long pos = 0, neg = 0;
      bool in_eq = false, any = false;
      for (const auto& r : rows_) {
        if (r.a[j] == 0) continue;
        any = true;
        if (r.rel == Relation::Eq) in_eq = true;
        else if (r.a[j] > 0) ++pos;
        else ++neg;
      }
      if (!any) continue;
      long cost = in_eq ? -1 : pos * neg - pos - neg;
      if (cost < best_cost) {
        best_cost = cost;
        best = j;
      }
    }
    return best;
  }

  void eliminate(std::size_t j) {
    if (infeasible_) return;
    std::size_t eq = npos;
    std::size_t eq_nonzeros = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Row& r = rows_[i];
      if (r.rel != Relation::Eq || r.a[j] == 0) continue;
      std::size_t nz = static_cast<std::size_t>(
          std::count_if(r.a.begin(), r.a.end(),
                        [](const Rational& x) { return x != 0; }));
      if (nz < eq_nonzeros) {
        eq_nonzeros = nz;
        eq = i;
      }
    }
    std::vector<Row> old;
    old.swap(rows_);
    if (eq != npos) {
      Row pivot = old[eq];
      for (std::size_t i = 0; i < old.size(); ++i) {
        if (i == eq) continue;
        Row r = std::move(old[i]);
        if (r.a[j] != 0) {
          Rational f = r.a[j] / pivot.a[j];
          for (std::size_t k = 0; k < r.a.size(); ++k) r.a[k] -= f * pivot.a[k];
          r.c -= f * pivot.c;
        }
        add(std::move(r));
      }
    } else {
      std::vector<const Row*> pos, neg;
      for (auto& r : old) {
        if (r.a[j] > 0) pos.push_back(&r);
        else if (r.a[j] < 0) neg.push_back(&r);
        else add(std::move(r));
      }
      for (const Row* p : pos) {
        for (const Row* n : neg) {
          Rational fp = -n->a[j];
          Rational fn = p->a[j];
          Row r;
          r.a.resize(vars_.size());
          for (std::size_t k = 0; k < r.a.size(); ++k)
            r.a[k] = fp * p->a[k] + fn * n->a[k];
          r.a[j] = 0;
          r.c = fp * p->c + fn * n->c;
          r.rel = (p->rel == Relation::Gt || n->rel == Relation::Gt)
                      ? Relation::Gt
                      : Relation::Ge;
          add(std::move(r));
          if (infeasible_) return;
        }
      }
    }
    simplify();
  }

  ConstraintSet to_set() const {
    ConstraintSet out;
    if (infeasible_) {
      out.add(AtomicConstraint::falsum());
      return out;
    }
    for (const auto& r : rows_) {
      LinExpr e(r.c);
      for (std::size_t k = 0; k < vars_.size(); ++k) e.add_term(vars_[k], r.a[k]);
      out.add({std::move(e), r.rel});
    }
    return out;
  }

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

 private:
  void add(Row r) {
    if (infeasible_) return;
    switch (normalize_row(r)) {
      case RowState::True: return;
      case RowState::False: infeasible_ = true; rows_.clear(); return;
      case RowState::Normal: rows_.push_back(std::move(r)); return;
    }
  }

  // Deduplicates, keeps the tightest of parallel inequalities and merges
  // opposed pairs into equalities.
  void simplify() {
    if (infeasible_) return;
    std::map<std::vector<Rational>, Row> eqs;
    std::map<std::vector<Rational>, Row> ineqs;
    for (auto& r : rows_) {
      if (r.rel == Relation::Eq) {
        auto [it, inserted] = eqs.emplace(r.a, r);
        if (!inserted && it->second.c != r.c) {
          infeasible_ = true;
          rows_.clear();
          return;
        }
      } else {
        auto [it, inserted] = ineqs.emplace(r.a, r);
        if (!inserted) {
          Row& cur = it->second;
          if (r.c < cur.c || (r.c == cur.c && r.rel == Relation::Gt)) cur = r;
        }
      }
    }
    std::vector<Row> out;
    for (auto& [a, r] : eqs) out.push_back(r);
    std::vector<std::vector<Rational>> merged;
    for (auto& [a, r] : ineqs) {
      if (std::find(merged.begin(), merged.end(), a) != merged.end()) continue;
      std::vector<Rational> neg_a = a;
      for (auto& x : neg_a) x = -x;
      auto it = ineqs.find(neg_a);
      if (it != ineqs.end()) {
        Rational sum = r.c + it->second.c;
        bool strict = r.rel == Relation::Gt || it->second.rel == Relation::Gt;
        if (sum < 0 || (sum == 0 && strict)) {
          infeasible_ = true;
          rows_.clear();
          return;
        }
        if (sum == 0) {
          Row e = r;
          e.rel = Relation::Eq;
          normalize_row(e);
          if (auto ex = eqs.find(e.a); ex != eqs.end()) {
            if (ex->second.c != e.c) {
              infeasible_ = true;
              rows_.clear();
              return;
            }
          } else {
            out.push_back(std::move(e));
          }
          merged.push_back(neg_a);
          continue;
        }
      }
      out.push_back(r);
    }
    rows_ = std::move(out);
  }

  std::vector<VarId> vars_;
  std::vector<Row> rows_;
  bool infeasible_ = false;
};

std::vector<VarId> ordered(const VarSet& s) { return {s.begin(), s.end()}; }

// ---------------------------------------------------------------------------
// Bounded-variable simplex over delta-rationals (r + k*delta for an
// infinitesimal delta), deciding feasibility with strict bounds.

struct Delta {
  Rational r, k;

  friend bool operator<(const Delta& a, const Delta& b) {
    return a.r < b.r || (a.r == b.r && a.k < b.k);
  }
  friend bool operator>(const Delta& a, const Delta& b) { return b < a; }
  Delta& operator+=(const Delta& o) {
    r += o.r;
    k += o.k;
    return *this;
  }
  friend Delta operator-(const Delta& a, const Delta& b) { return {a.r - b.r, a.k - b.k}; }
  friend Delta operator*(const Rational& f, const Delta& a) { return {f * a.r, f * a.k}; }
};

class Simplex {
 public:
  // Columns 0..n-1 are the problem variables (unbounded), one slack column
  // per constraint follows.
  Simplex(const std::vector<VarId>& vars, const ConstraintSet& cs) {
    std::map<VarId, std::size_t> index;
    for (std::size_t i = 0; i < vars.size(); ++i) index[vars[i]] = i;
    const std::size_t n = vars.size();
    const std::size_t m = cs.size();
    cols_ = n + m;
    value_.assign(cols_, Delta{});
    lower_.assign(cols_, std::nullopt);
    upper_.assign(cols_, std::nullopt);
    basic_row_.assign(cols_, npos);
    std::size_t i = 0;
    for (const auto& k : cs) {
      std::vector<Rational> row(cols_, Rational(0));
      for (const auto& [v, coeff] : k.expr.terms()) row[index.at(v)] = coeff;
      const std::size_t s = n + i;
      row[s] = -1;  // sum(a x) - s = 0
      Delta bound{-k.expr.constant(), k.rel == Relation::Gt ? Rational(1) : Rational(0)};
      lower_[s] = bound;
      if (k.rel == Relation::Eq) upper_[s] = bound;
      tableau_.push_back(std::move(row));
      basic_.push_back(s);
      basic_row_[s] = i;
      ++i;
    }
  }

  bool feasible() {
    for (;;) {
      // Smallest violated basic variable (Bland's rule).
      std::size_t bad = npos;
      for (std::size_t c = 0; c < cols_; ++c) {
        std::size_t r = basic_row_[c];
        if (r == npos) continue;
        if ((lower_[c] && value_[c] < *lower_[c]) || (upper_[c] && value_[c] > *upper_[c])) {
          bad = c;
          break;
        }
      }
      if (bad == npos) return true;
      const std::size_t r = basic_row_[bad];
      const bool raise = lower_[bad] && value_[bad] < *lower_[bad];
      // Row reads: sum_j t[j] x_j = 0 with t[bad] = -1, i.e.
      // x_bad = sum_{j != bad} t[j] x_j.
      const auto& t = tableau_[r];
      std::size_t entering = npos;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j == bad || basic_row_[j] != npos || t[j] == 0) continue;
        bool up = (t[j] > 0) == raise;
        bool can = up ? (!upper_[j] || value_[j] < *upper_[j])
                      : (!lower_[j] || value_[j] > *lower_[j]);
        if (can) {
          entering = j;
          break;
        }
      }
      if (entering == npos) return false;
      pivot_and_update(bad, entering, raise ? *lower_[bad] : *upper_[bad]);
    }
  }

 private:
  void pivot_and_update(std::size_t leaving, std::size_t entering, const Delta& target) {
    const std::size_t r = basic_row_[leaving];
    const Rational coeff = tableau_[r][entering];
    // x_leaving changes by (target - value); x_entering by that over coeff.
    Delta theta = Rational(1) / coeff * (target - value_[leaving]);
    value_[leaving] = target;
    value_[entering] += theta;
    for (std::size_t q = 0; q < basic_.size(); ++q) {
      if (q == r) continue;
      const Rational& a = tableau_[q][entering];
      if (a != 0) value_[basic_[q]] += a * theta;
    }
    // Solve row r for x_entering: normalise so that t[entering] = -1.
    auto& row = tableau_[r];
    const Rational f = Rational(-1) / coeff;
    for (auto& x : row) {
      if (x != 0) x *= f;
    }
    for (std::size_t q = 0; q < basic_.size(); ++q) {
      if (q == r) continue;
      auto& other = tableau_[q];
      const Rational a = other[entering];
      if (a == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (row[j] != 0) other[j] += a * row[j];
      }
      other[entering] = 0;
    }
    basic_[r] = entering;
    basic_row_[entering] = r;
    basic_row_[leaving] = npos;
  }

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::size_t cols_ = 0;
  std::vector<std::vector<Rational>> tableau_;
  std::vector<std::size_t> basic_;
  std::vector<std::size_t> basic_row_;
  std::vector<Delta> value_;
  std::vector<std::optional<Delta>> lower_, upper_;
};

}  // namespace

bool satisfiable(const ConstraintSet& c) {
  if (c.trivially_false()) return false;
  return Simplex(ordered(c.variables()), c).feasible();
}

ConstraintSet eliminate_vars(const VarSet& vars, const ConstraintSet& c) {
  if (c.trivially_false()) return ConstraintSet{AtomicConstraint::falsum()};
  std::vector<VarId> all = ordered(c.variables());
  std::vector<bool> mask(all.size(), false);
  bool any = false;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (vars.count(all[i])) {
      mask[i] = true;
      any = true;
    }
  }
  if (!any) return c;
  Fm fm(all, c);
  std::size_t limit = std::max<std::size_t>(fm.rows(), 12);
  while (!fm.infeasible()) {
    std::size_t j = fm.pick(mask);
    if (j == Fm::npos) break;
    fm.eliminate(j);
    mask[j] = false;
    // Prune redundant rows once the system has grown.
    if (fm.rows() > limit) {
      fm = Fm(all, remove_redundant(fm.to_set()));
      limit = std::max<std::size_t>(2 * fm.rows(), 12);
    }
  }
  if (fm.infeasible()) return ConstraintSet{AtomicConstraint::falsum()};
  return remove_redundant(fm.to_set());
}

std::vector<AtomicConstraint> negate_atomic(const AtomicConstraint& a) {
  switch (a.rel) {
    case Relation::Ge: return {{-a.expr, Relation::Gt}};
    case Relation::Gt: return {{-a.expr, Relation::Ge}};
    case Relation::Eq: return {{a.expr, Relation::Gt}, {-a.expr, Relation::Gt}};
  }
  return {};
}

bool entails(const ConstraintSet& c, const AtomicConstraint& a) {
  for (const auto& d : negate_atomic(a)) {
    ConstraintSet probe = c;
    probe.add(d);
    if (satisfiable(probe)) return false;
  }
  return true;
}

bool entails(const ConstraintSet& c, const ConstraintSet& d) {
  if (!satisfiable(c)) return true;
  return std::all_of(d.begin(), d.end(),
                     [&](const AtomicConstraint& a) { return entails(c, a); });
}

bool equivalent(const ConstraintSet& a, const ConstraintSet& b) {
  return entails(a, b) && entails(b, a);
}

ConstraintSet remove_redundant(const ConstraintSet& c) {
  if (c.trivially_false()) return ConstraintSet{AtomicConstraint::falsum()};
  Fm fm(ordered(c.variables()), c);
  if (fm.infeasible()) return ConstraintSet{AtomicConstraint::falsum()};
  ConstraintSet base = fm.to_set();
  if (!satisfiable(base)) return ConstraintSet{AtomicConstraint::falsum()};
  std::vector<AtomicConstraint> kept(base.begin(), base.end());
  for (std::size_t i = 0; i < kept.size();) {
    ConstraintSet rest;
    for (std::size_t k = 0; k < kept.size(); ++k)
      if (k != i) rest.add(kept[k]);
    if (entails(rest, kept[i])) {
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  return ConstraintSet(kept);
}

}  // namespace dimlin
