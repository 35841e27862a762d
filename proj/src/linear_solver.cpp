// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

#include "dimlin/linear_solver.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>

#include "dimlin/driver.hpp"

namespace dimlin {

namespace {

void check_deadline(const LinearSolverConfig& cfg) {
  if (cfg.deadline && Clock::now() > *cfg.deadline) throw Timeout();
}

Renaming canonical_to(const std::vector<VarId>& vars) {
  Renaming r;
  std::vector<VarId> canon = canonical_args(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) r[canon[i]] = vars[i];
  return r;
}

// Polyhedron over canonical args of the head, or nullopt when the body
// predicate has no value.
std::optional<Polyhedron> image(const Clause& c, const Interpretation& m) {
  ConstraintSet acc(c.constraints);
  if (!c.body.empty()) {
    auto it = m.find(c.body[0].pred);
    if (it == m.end() || it->second.empty() || it->second[0].is_empty())
      return std::nullopt;
    acc.add_all(it->second[0].constraints().rename(canonical_to(c.body[0].vars())));
  }
  VarSet all = c.variables();
  std::vector<VarId> dims(all.begin(), all.end());
  std::vector<VarId> head = c.head.vars();
  Polyhedron p = project(Polyhedron(dims, acc), head);
  if (p.is_empty()) return std::nullopt;
  return p.rename_dims(canonical_args(head.size()));
}

// Strongly connected components of the body -> head graph, dependencies
// first.
std::vector<std::vector<PredId>> components(const Program& p) {
  std::map<PredId, std::set<PredId>> succ;
  std::vector<PredId> nodes;
  auto add = [&](const PredId& q) {
    if (succ.emplace(q, std::set<PredId>{}).second) nodes.push_back(q);
  };
  for (const auto& c : p.clauses) {
    add(c.head.pred);
    for (const auto& b : c.body) {
      add(b.pred);
      succ[b.pred].insert(c.head.pred);
    }
  }
  std::map<PredId, int> index, low;
  std::set<PredId> on_stack;
  std::vector<PredId> stack;
  std::vector<std::vector<PredId>> out;
  int counter = 0;
  std::function<void(const PredId&)> visit = [&](const PredId& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto& w : succ[v]) {
      if (!index.count(w)) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<PredId> comp;
      for (;;) {
        PredId w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.push_back(w);
        if (w == v) break;
      }
      out.push_back(std::move(comp));
    }
  };
  for (const auto& v : nodes)
    if (!index.count(v)) visit(v);
  // Tarjan emits sinks first; edges point from dependencies to dependents.
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

Interpretation analyze_fixpoint(const Program& p, const LinearSolverConfig& cfg) {
  if (!p.linear()) throw std::invalid_argument("analyze_fixpoint expects a linear program");
  std::map<PredId, std::vector<const Clause*>> defs;
  for (const auto& c : p.clauses) defs[c.head.pred].push_back(&c);

  Interpretation m;
  for (const auto& comp : components(p)) {
    std::set<PredId> members(comp.begin(), comp.end());
    bool recursive = comp.size() > 1;
    for (const auto& q : comp)
      for (const Clause* c : defs[q])
        if (!c->body.empty() && members.count(c->body[0].pred)) recursive = true;

    std::map<PredId, unsigned> joins;
    for (bool changed = true; changed;) {
      changed = false;
      check_deadline(cfg);
      for (const auto& q : comp) {
        std::optional<Polyhedron> acc;
        auto cur = m.find(q);
        if (cur != m.end()) acc = cur->second[0];
        for (const Clause* c : defs[q]) {
          auto img = image(*c, m);
          if (!img) continue;
          if (acc && includes(*acc, *img)) continue;
          acc = acc ? convex_hull(*acc, *img) : *img;
        }
        if (!acc) continue;
        if (cur != m.end() && includes(cur->second[0], *acc)) continue;
        Polyhedron next = *acc;
        if (recursive && cur != m.end() && ++joins[q] > cfg.widenDelay)
          next = widen(cur->second[0], next);
        m[q] = {next};
        changed = true;
      }
    }

    if (!recursive) continue;
    for (unsigned step = 0; step < cfg.narrowSteps; ++step) {
      check_deadline(cfg);
      Interpretation next = m;
      for (const auto& q : comp) {
        if (!m.count(q)) continue;
        std::optional<Polyhedron> acc;
        for (const Clause* c : defs[q]) {
          auto img = image(*c, m);
          if (!img) continue;
          acc = acc ? convex_hull(*acc, *img) : *img;
        }
        if (acc) next[q] = {meet(m[q][0], *acc)};
        else next.erase(q);
      }
      m = std::move(next);
    }
  }
  for (auto it = m.begin(); it != m.end();) {
    if (it->second.empty() || it->second[0].is_empty()) it = m.erase(it);
    else ++it;
  }
  return m;
}

std::optional<std::vector<std::string>> find_feasible_path(
    const Program& p, const Interpretation& model, const LinearSolverConfig& cfg,
    std::vector<std::string>* abstract_path) {
  std::map<PredId, std::vector<const Clause*>> defs;
  for (const auto& c : p.clauses) defs[c.head.pred].push_back(&c);

  struct Node {
    PredId pred;
    ConstraintSet cs;  // over canonical args of pred
    std::vector<std::string> path;
  };
  std::map<PredId, std::vector<ConstraintSet>> seen;
  std::deque<Node> work;
  std::size_t expansions = 0;

  // Conjoins `acc` (over the clause's variables) with the body atom's
  // model value and projects it onto the body arguments.
  auto descend = [&](const Clause& c, ConstraintSet acc,
                     std::vector<std::string> path) -> bool {
    if (c.body.empty()) {
      if (satisfiable(acc)) {
        if (abstract_path) *abstract_path = path;
        return true;
      }
      return false;
    }
    const Atom& b = c.body[0];
    auto it = model.find(b.pred);
    if (it == model.end() || it->second.empty()) return false;
    std::vector<VarId> args = b.vars();
    acc.add_all(it->second[0].constraints().rename(canonical_to(args)));
    VarSet drop = c.variables();
    for (const auto& v : args) drop.erase(v);
    ConstraintSet proj = eliminate_vars(drop, acc);
    if (!satisfiable(proj)) return false;
    Renaming to_canon;
    std::vector<VarId> canon = canonical_args(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) to_canon[args[i]] = canon[i];
    proj = proj.rename(to_canon);
    auto& prev = seen[b.pred];
    for (const auto& s : prev)
      if (entails(proj, s)) return false;
    prev.push_back(proj);
    if (abstract_path && path.size() > abstract_path->size()) *abstract_path = path;
    work.push_back(Node{b.pred, std::move(proj), std::move(path)});
    return false;
  };

  for (const auto& c : p.clauses) {
    if (!c.is_query()) continue;
    if (descend(c, ConstraintSet(c.constraints), {c.id}))
      return std::vector<std::string>{c.id};
  }
  while (!work.empty()) {
    check_deadline(cfg);
    Node n = std::move(work.front());
    work.pop_front();
    if (n.path.size() >= cfg.depthBound) continue;
    if (++expansions > cfg.maxExpansions) break;
    for (const Clause* c : defs[n.pred]) {
      ConstraintSet acc = n.cs.rename(canonical_to(c->head.vars()));
      acc.add_all(ConstraintSet(c->constraints));
      std::vector<std::string> path = n.path;
      path.push_back(c->id);
      if (c->body.empty()) {
        if (satisfiable(acc)) return path;
        continue;
      }
      descend(*c, std::move(acc), std::move(path));
    }
  }
  return std::nullopt;
}

SolverStatus solve_linear(const Program& p, const LinearSolverConfig& cfg) {
  if (!p.linear()) throw std::invalid_argument("solve_linear expects a linear program");
  SolverStatus st;
  Interpretation m = analyze_fixpoint(p, cfg);
  bool reachable = false;
  for (const auto& c : p.clauses) {
    if (c.is_query() && image(c, m)) reachable = true;
  }
  if (!reachable) {
    if (!check_model(p, m))
      throw std::logic_error("fixpoint result fails the model check");
    st.kind = SolverStatus::Kind::Safe;
    st.model = std::move(m);
    return st;
  }
  std::vector<std::string> abstract;
  if (auto path = find_feasible_path(p, m, cfg, &abstract)) {
    st.kind = SolverStatus::Kind::Unsafe;
    st.path = std::move(*path);
    return st;
  }
  st.kind = SolverStatus::Kind::Unknown;
  st.path = std::move(abstract);
  return st;
}

}  // namespace dimlin
