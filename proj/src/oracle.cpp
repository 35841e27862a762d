// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

#include "dimlin/oracle.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace dimlin {

const char* to_string(Derivability d) {
  switch (d) {
    case Derivability::Yes: return "yes";
    case Derivability::NoWithinBudget: return "no-within-budget";
    case Derivability::BudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

namespace {

Renaming from_canonical(const std::vector<VarId>& to) {
  Renaming r;
  std::vector<VarId> canon = canonical_args(to.size());
  for (std::size_t i = 0; i < to.size(); ++i) r[canon[i]] = to[i];
  return r;
}

Renaming to_canonical(const std::vector<VarId>& from) {
  Renaming r;
  std::vector<VarId> canon = canonical_args(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) r[from[i]] = canon[i];
  return r;
}

// Projects `cs` (over clause variables) onto `keep` and renames the result
// to canonical argument names.
ConstraintSet project_to(const ConstraintSet& cs, const VarSet& all,
                         const std::vector<VarId>& keep) {
  VarSet drop = all;
  for (const auto& v : keep) drop.erase(v);
  return eliminate_vars(drop, cs).rename(to_canonical(keep));
}

struct Entry {
  TraceTree tree;
  ConstraintSet head;  // over canonical args of the head predicate
  std::size_t height;
};

class BottomUp {
 public:
  BottomUp(const Program& p, const EnumBudget& b, bool subsume)
      : p_(p), b_(b), subsume_(subsume) {}

  // Runs until maxDepth, or until `target` has an entry when `stop_early`.
  bool run(const PredId& target, bool stop_early) {
    for (std::size_t h = 1; h <= b_.maxDepth; ++h) {
      std::map<PredId, std::vector<Entry>> fresh;
      for (const auto& c : p_.clauses) {
        if (c.body.empty() != (h == 1)) continue;
        VarSet vars = c.variables();
        std::vector<VarId> head = c.head.vars();
        std::vector<const Entry*> picks;
        bool ok = extend(c, vars, head, h, 0, ConstraintSet(c.constraints), false,
                         picks, fresh);
        if (!ok) return false;
      }
      for (auto& [q, es] : fresh) {
        auto& dst = all_[q];
        for (auto& e : es) dst.push_back(std::move(e));
      }
      if (stop_early && all_.count(target) && !all_[target].empty()) return true;
    }
    return true;
  }

  const std::vector<Entry>& entries(const PredId& q) {
    return all_[q];
  }

 private:
  bool extend(const Clause& c, const VarSet& vars, const std::vector<VarId>& head,
              std::size_t h, std::size_t i, const ConstraintSet& acc, bool tall,
              std::vector<const Entry*>& picks,
              std::map<PredId, std::vector<Entry>>& fresh) {
    if (++nodes_ > b_.maxNodes) return false;
    if (i == c.body.size()) {
      if (!c.body.empty() && !tall) return true;
      ConstraintSet hs = project_to(acc, vars, head);
      if (!satisfiable(hs)) return true;
      Entry e{TraceTree{c.id, {}}, std::move(hs), h};
      for (const Entry* k : picks) e.tree.children.push_back(k->tree);
      if (subsume_ && subsumed(c.head.pred, e, fresh)) return true;
      fresh[c.head.pred].push_back(std::move(e));
      return true;
    }
    const Atom& atom = c.body[i];
    auto it = all_.find(atom.pred);
    if (it == all_.end()) return true;
    Renaming r = from_canonical(atom.vars());
    // `all_` is not modified while a level is being built.
    for (const Entry& e : it->second) {
      ConstraintSet next = acc & e.head.rename(r);
      if (!satisfiable(next)) {
        if (++nodes_ > b_.maxNodes) return false;
        continue;
      }
      picks.push_back(&e);
      bool ok = extend(c, vars, head, h, i + 1, next, tall || e.height == h - 1,
                       picks, fresh);
      picks.pop_back();
      if (!ok) return false;
    }
    return true;
  }

  bool subsumed(const PredId& q, const Entry& e,
                const std::map<PredId, std::vector<Entry>>& fresh) {
    auto covers = [&](const Entry& old) { return entails(e.head, old.head); };
    if (auto it = all_.find(q); it != all_.end())
      if (std::any_of(it->second.begin(), it->second.end(), covers)) return true;
    if (auto it = fresh.find(q); it != fresh.end())
      if (std::any_of(it->second.begin(), it->second.end(), covers)) return true;
    return false;
  }

  const Program& p_;
  EnumBudget b_;
  bool subsume_;
  std::size_t nodes_ = 0;
  std::map<PredId, std::vector<Entry>> all_;
};

}  // namespace

EnumResult enumerate_feasible_traces(const Program& p, const PredId& target,
                                     const EnumBudget& b) {
  BottomUp bu(p, b, false);
  EnumResult r;
  r.complete = bu.run(target, false);
  for (const auto& e : bu.entries(target)) {
    if (r.trees.size() >= b.maxTrees) {
      r.complete = false;
      break;
    }
    r.trees.push_back(e.tree);
  }
  return r;
}

Derivability derivable(const Program& p, const PredId& target, const EnumBudget& b) {
  BottomUp bu(p, b, true);
  bool complete = bu.run(target, true);
  if (!bu.entries(target).empty()) return Derivability::Yes;
  return complete ? Derivability::NoWithinBudget : Derivability::BudgetExhausted;
}

// ---------------------------------------------------------------------------
// Linearised programs

namespace {

struct Config {
  PredId pred;
  std::vector<std::size_t> depths;  // back-mapped depth of each stack entry
  ConstraintSet cs;                 // over canonical args of pred
  std::vector<std::string> path;
};

class TopDown {
 public:
  TopDown(const LinearProgram& lp, const EnumBudget& b) : lp_(lp), b_(b) {
    for (const auto& c : lp.program.clauses) by_head_[c.head.pred].push_back(&c);
  }

  // Visits every feasible successor; returns false when the budget runs out.
  template <typename Visit>
  bool expand(const Config& cfg, Visit&& visit) {
    auto it = by_head_.find(cfg.pred);
    if (it == by_head_.end()) return true;
    for (const Clause* c : it->second) {
      if (++nodes_ > b_.maxNodes) return false;
      if (c->body.empty()) {
        Config done{cfg.pred, {}, cfg.cs, cfg.path};
        done.path.push_back(c->id);
        visit(done, true);
        continue;
      }
      const StepProvenance& sp = lp_.steps.at(c->id);
      std::vector<std::size_t> depths;
      if (!sp.order.empty()) {
        std::size_t d = cfg.depths.at(0) + 1;
        if (d > b_.maxDepth) continue;
        bool too_deep = false;
        for (auto idx : sp.order) {
          // An unfolded epsilon node adds one level above the child.
          bool eps = idx < sp.epsilon.size() && !sp.epsilon[idx].empty();
          depths.push_back(d + (eps ? 1 : 0));
          if (depths.back() > b_.maxDepth) too_deep = true;
        }
        if (too_deep) continue;
      }
      depths.insert(depths.end(), cfg.depths.begin() + 1, cfg.depths.end());
      VarSet vars = c->variables();
      ConstraintSet acc = cfg.cs.rename(from_canonical(c->head.vars()));
      acc.add_all(ConstraintSet(c->constraints));
      ConstraintSet next = project_to(acc, vars, c->body[0].vars());
      if (!satisfiable(next)) continue;
      Config n{c->body[0].pred, std::move(depths), std::move(next), cfg.path};
      n.path.push_back(c->id);
      visit(n, false);
    }
    return true;
  }

  std::optional<Config> start() const {
    const Clause* goal = lp_.program.find(lp_.goal_id);
    if (!goal) return std::nullopt;
    ConstraintSet cs = project_to(ConstraintSet(goal->constraints), goal->variables(),
                                  goal->body[0].vars());
    if (!satisfiable(cs)) return std::nullopt;
    return Config{goal->body[0].pred, {1}, cs, {goal->id}};
  }

 private:
  const LinearProgram& lp_;
  EnumBudget b_;
  std::size_t nodes_ = 0;
  std::map<PredId, std::vector<const Clause*>> by_head_;
};

}  // namespace

Derivability derivable_linear(const LinearProgram& lp, const EnumBudget& b) {
  TopDown td(lp, b);
  auto s = td.start();
  if (!s) return Derivability::NoWithinBudget;
  std::map<PredId, std::vector<std::pair<std::vector<std::size_t>, ConstraintSet>>> seen;
  auto subsumed = [&](const Config& c) {
    for (const auto& [ds, cs] : seen[c.pred]) {
      bool le = true;
      for (std::size_t i = 0; i < ds.size() && le; ++i) le = ds[i] <= c.depths[i];
      if (le && entails(c.cs, cs)) return true;
    }
    return false;
  };
  std::deque<Config> work{*s};
  seen[s->pred].emplace_back(s->depths, s->cs);
  bool found = false;
  while (!work.empty() && !found) {
    Config cur = std::move(work.front());
    work.pop_front();
    bool ok = td.expand(cur, [&](const Config& n, bool accepted) {
      if (accepted) {
        found = true;
        return;
      }
      if (subsumed(n)) return;
      seen[n.pred].emplace_back(n.depths, n.cs);
      work.push_back(n);
    });
    if (!ok) return found ? Derivability::Yes : Derivability::BudgetExhausted;
  }
  return found ? Derivability::Yes : Derivability::NoWithinBudget;
}

PathResult enumerate_linear_paths(const LinearProgram& lp, const EnumBudget& b) {
  TopDown td(lp, b);
  PathResult r;
  auto s = td.start();
  if (!s) return r;
  std::deque<Config> work{*s};
  while (!work.empty()) {
    Config cur = std::move(work.front());
    work.pop_front();
    bool ok = td.expand(cur, [&](const Config& n, bool accepted) {
      if (accepted) r.paths.push_back(n.path);
      else work.push_back(n);
    });
    if (!ok || r.paths.size() > b.maxTrees) {
      r.complete = false;
      if (r.paths.size() > b.maxTrees) r.paths.resize(b.maxTrees);
      break;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Accumulated constraints

namespace {

Renaming apart(const Clause& c, std::size_t n) {
  Renaming r;
  for (const auto& v : c.variables()) r[v] = VarId(v.name + "#" + std::to_string(n));
  return r;
}

void link(ConstraintSet& out, const std::vector<LinExpr>& a,
          const std::vector<LinExpr>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("arity mismatch linking atoms");
  for (std::size_t i = 0; i < a.size(); ++i) out.add(AtomicConstraint::eq(a[i], b[i]));
}

std::vector<LinExpr> renamed(const std::vector<LinExpr>& args, const Renaming& r) {
  std::vector<LinExpr> out;
  for (const auto& a : args) out.push_back(a.rename(r));
  return out;
}

}  // namespace

ConstraintSet path_constraint(const Program& p, const std::vector<std::string>& path) {
  ConstraintSet out;
  std::vector<LinExpr> pending;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const Clause* c = p.find(path[i]);
    if (!c) throw std::invalid_argument("unknown clause " + path[i]);
    Renaming r = apart(*c, i);
    if (i > 0) link(out, pending, renamed(c->head.args, r));
    for (const auto& k : c->constraints) out.add(k.rename(r));
    if (c->body.size() > 1) throw std::invalid_argument("path through non-linear clause");
    pending = c->body.empty() ? std::vector<LinExpr>{} : renamed(c->body[0].args, r);
  }
  return out;
}

ConstraintSet tree_constraint(const Program& p, const TraceTree& t) {
  ConstraintSet out;
  std::size_t counter = 0;
  auto walk = [&](auto&& self, const TraceTree& n) -> std::vector<LinExpr> {
    const Clause* c = p.find(n.id);
    if (!c) throw std::invalid_argument("unknown clause " + n.id);
    if (c->body.size() != n.children.size())
      throw std::invalid_argument("arity mismatch at node " + n.id);
    Renaming r = apart(*c, counter++);
    for (const auto& k : c->constraints) out.add(k.rename(r));
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      std::vector<LinExpr> child_head = self(self, n.children[i]);
      link(out, renamed(c->body[i].args, r), child_head);
    }
    return renamed(c->head.args, r);
  };
  walk(walk, t);
  return out;
}

}  // namespace dimlin
