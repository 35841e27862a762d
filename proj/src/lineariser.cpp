// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

#include "dimlin/lineariser.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace dimlin {

std::string print_goal_state(const GoalState& g, NameStyle style) {
  std::string s = "[";
  for (std::size_t i = 0; i < g.stack.size(); ++i) {
    if (i) s += ",";
    s += pred_name(g.stack[i], style);
  }
  return s + "]";
}

const PredId* LinearProgram::singleton(const PredId& q) const {
  for (const auto& [name, g] : states) {
    if (g.stack.size() == 1 && g.stack[0] == q) return &name;
  }
  return nullptr;
}

unsigned index_bound(const Program& original, unsigned k) {
  std::size_t i = max_body_atoms(original);
  if (i <= 1) return 1;
  return static_cast<unsigned>((i - 1) * k + 1);
}

Program substitute_model(const Program& pk, const Interpretation& s) {
  std::map<PredId, std::size_t> arity = predicate_arities(pk);
  Program out;
  out.query = pk.query;
  for (const auto& c : pk.clauses) {
    if (!s.count(c.head.pred)) out.clauses.push_back(c);
  }
  for (const auto& [p, ds] : s) {
    auto it = arity.find(p);
    std::size_t n = 0;
    for (const auto& d : ds) {
      if (it != arity.end() && d.dims().size() != it->second)
        throw std::invalid_argument("arity mismatch substituting " + pred_name(p));
      if (d.is_empty()) continue;
      Clause c;
      c.id = "m_" + pred_name(p) + "_" + std::to_string(++n);
      c.head.pred = p;
      for (const auto& v : d.dims()) c.head.args.push_back(LinExpr::variable(v));
      c.constraints = d.constraints().constraints();
      c.provenance = Provenance{std::nullopt, ProvenanceKind::ModelFact, p};
      out.clauses.push_back(std::move(c));
    }
  }
  return out;
}

namespace {

// A clause body after optional epsilon unfolding; `epsilon[i]` names the
// epsilon clause resolved at position i, if any.
struct Variant {
  std::vector<Atom> body;
  std::vector<std::string> epsilon;
};

// Bodies obtained by resolving every at-most atom defined only by epsilon
// clauses with each of those clauses.
std::vector<Variant> unfold_epsilon(const Clause& c,
                                    const std::map<PredId, std::vector<const Clause*>>& defs) {
  std::vector<Variant> out{Variant{}};
  for (const auto& b : c.body) {
    std::vector<std::pair<Atom, std::string>> options;
    auto it = defs.find(b.pred);
    bool only_eps = it != defs.end() && !it->second.empty() &&
                    std::all_of(it->second.begin(), it->second.end(), [](const Clause* d) {
                      return d->provenance && d->provenance->kind == ProvenanceKind::Epsilon;
                    });
    if (b.pred.annotation == Annotation::AtMost && only_eps) {
      for (const Clause* e : it->second) {
        Renaming rn;
        std::vector<VarId> from = e->head.vars();
        std::vector<VarId> to = b.vars();
        for (std::size_t i = 0; i < from.size(); ++i) rn[from[i]] = to[i];
        Atom a{e->body[0].pred, {}};
        for (const auto& x : e->body[0].args) a.args.push_back(x.rename(rn));
        options.emplace_back(std::move(a), e->id);
      }
    } else {
      options.emplace_back(b, "");
    }
    std::vector<Variant> next;
    for (const auto& v : out) {
      for (const auto& [a, id] : options) {
        Variant w = v;
        w.body.push_back(a);
        w.epsilon.push_back(id);
        next.push_back(std::move(w));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<std::vector<std::size_t>> orders(const std::vector<Atom>& body, Strategy s) {
  std::vector<std::size_t> base(body.size());
  std::iota(base.begin(), base.end(), 0);
  std::vector<std::vector<std::size_t>> out;
  if (s == Strategy::DimOrdered) {
    std::stable_sort(base.begin(), base.end(), [&](std::size_t a, std::size_t b) {
      return body[a].pred.dim < body[b].pred.dim;
    });
    out.push_back(base);
    return out;
  }
  do {
    out.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  return out;
}

}  // namespace

LinearProgram linearise_pe(const Program& p, unsigned index, Strategy strategy) {
  if (index < 1) throw std::invalid_argument("index must be at least 1");
  std::map<PredId, std::size_t> arity = predicate_arities(p);
  arity.emplace(p.query, 0);
  std::map<PredId, std::vector<const Clause*>> defs;
  for (const auto& c : p.clauses) defs[c.head.pred].push_back(&c);

  LinearProgram lp;
  lp.program.query = PredId::falsum();
  std::map<GoalState, PredId> names;
  std::deque<GoalState> work;
  auto name_of = [&](const GoalState& g) -> PredId {
    auto it = names.find(g);
    if (it != names.end()) return it->second;
    PredId id("s" + std::to_string(names.size()));
    names.emplace(g, id);
    lp.states.emplace(id, g);
    work.push_back(g);
    return id;
  };
  auto arity_of = [&](const GoalState& g) {
    std::size_t n = 0;
    for (const auto& q : g.stack) n += arity.at(q);
    return n;
  };

  const GoalState init{{p.query}};
  lp.initial = name_of(init);

  std::vector<Clause> generated;
  std::map<PredId, std::set<PredId>> edges;  // state -> successors
  std::size_t step = 0;
  while (!work.empty()) {
    GoalState g = work.front();
    work.pop_front();
    if (g.stack.empty()) continue;
    const PredId head_name = names.at(g);
    const PredId& q = g.stack.front();
    const std::vector<PredId> rest(g.stack.begin() + 1, g.stack.end());
    auto dit = defs.find(q);
    if (dit == defs.end()) continue;
    for (const Clause* c : dit->second) {
      if (c->body.size() + rest.size() > index) continue;
      std::vector<Variant> variants;
      if (strategy == Strategy::DimOrdered) {
        variants = unfold_epsilon(*c, defs);
      } else {
        variants.push_back(Variant{c->body, std::vector<std::string>(c->body.size())});
      }
      for (const auto& var : variants) {
        for (const auto& ord : orders(var.body, strategy)) {
          GoalState next;
          for (auto i : ord) next.stack.push_back(var.body[i].pred);
          next.stack.insert(next.stack.end(), rest.begin(), rest.end());
          const PredId next_name = name_of(next);
          edges[head_name].insert(next_name);

          // Clause variables become X<n>, the tail of the stack Y<n>.
          Renaming rn;
          std::size_t xi = 0;
          for (const auto& v : c->variables()) rn[v] = VarId("X" + std::to_string(++xi));
          std::vector<LinExpr> tail;
          std::size_t yi = 0;
          for (const auto& r : rest) {
            for (std::size_t a = 0; a < arity.at(r); ++a)
              tail.push_back(LinExpr::variable(VarId("Y" + std::to_string(++yi))));
          }
          Clause out;
          out.id = "t" + std::to_string(++step);
          out.head.pred = head_name;
          for (const auto& a : c->head.args) out.head.args.push_back(a.rename(rn));
          out.head.args.insert(out.head.args.end(), tail.begin(), tail.end());
          for (const auto& k : c->constraints) out.constraints.push_back(k.rename(rn));
          Atom body{next_name, {}};
          for (auto i : ord)
            for (const auto& a : var.body[i].args) body.args.push_back(a.rename(rn));
          body.args.insert(body.args.end(), tail.begin(), tail.end());
          out.body.push_back(std::move(body));
          out.provenance = Provenance{c->id, ProvenanceKind::Linear, std::nullopt};
          lp.steps[out.id] = StepProvenance{c->id, ord, var.epsilon};
          generated.push_back(normalize_clause(out));
        }
      }
    }
  }
  lp.empty = name_of(GoalState{});

  // Keep only states that can reach the empty state.
  std::set<PredId> live{lp.empty};
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [from, tos] : edges) {
      if (live.count(from)) continue;
      for (const auto& t : tos) {
        if (live.count(t)) {
          live.insert(from);
          changed = true;
          break;
        }
      }
    }
  }
  for (const auto& [name, g] : lp.states)
    if (!live.count(name)) lp.pruned.insert(name);

  if (live.count(lp.initial)) {
    Clause goal;
    goal.id = lp.goal_id;
    goal.head.pred = PredId::falsum();
    std::size_t n = arity_of(init);
    Atom b{lp.initial, {}};
    for (const auto& v : canonical_args(n)) b.args.push_back(LinExpr::variable(v));
    goal.body.push_back(std::move(b));
    goal.provenance = Provenance{std::nullopt, ProvenanceKind::Linear, std::nullopt};
    lp.program.clauses.push_back(std::move(goal));
  }
  for (auto& c : generated) {
    if (live.count(c.body[0].pred)) lp.program.clauses.push_back(std::move(c));
    else lp.steps.erase(c.id);
  }
  Clause accept;
  accept.id = lp.accept_id;
  accept.head.pred = lp.empty;
  accept.provenance = Provenance{std::nullopt, ProvenanceKind::Linear, std::nullopt};
  lp.program.clauses.push_back(std::move(accept));
  return lp;
}

TraceTree back_map(const std::vector<std::string>& path, const LinearProgram& lp) {
  if (path.empty() || path.front() != lp.goal_id)
    throw std::invalid_argument("path must start with the goal clause");
  if (path.back() != lp.accept_id)
    throw std::invalid_argument("path must end with the accepting clause");
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Clause* a = lp.program.find(path[i]);
    const Clause* b = lp.program.find(path[i + 1]);
    if (!a || !b) throw std::invalid_argument("unknown clause in path");
    if (a->body.size() != 1 || a->body[0].pred != b->head.pred)
      throw std::invalid_argument("path is not a connected derivation at " + path[i]);
  }

  // Nodes addressed by child-index paths from the root.
  TraceTree root;
  std::vector<std::vector<std::size_t>> holes{{}};
  auto at = [&](const std::vector<std::size_t>& addr) -> TraceTree& {
    TraceTree* t = &root;
    for (auto i : addr) t = &t->children[i];
    return *t;
  };
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    auto it = lp.steps.find(path[i]);
    if (it == lp.steps.end()) throw std::invalid_argument("no step provenance for " + path[i]);
    if (holes.empty()) throw std::logic_error("goal stack underflow replaying " + path[i]);
    std::vector<std::size_t> addr = holes.front();
    holes.erase(holes.begin());
    TraceTree& node = at(addr);
    node.id = it->second.origin;
    const StepProvenance& sp = it->second;
    node.children.assign(sp.order.size(), TraceTree{});
    std::vector<std::vector<std::size_t>> pushed;
    for (auto idx : sp.order) {
      auto child = addr;
      child.push_back(idx);
      // An unfolded epsilon clause sits between the node and its child.
      if (idx < sp.epsilon.size() && !sp.epsilon[idx].empty()) {
        node.children[idx] = TraceTree{sp.epsilon[idx], {TraceTree{}}};
        child.push_back(0);
      }
      pushed.push_back(std::move(child));
    }
    holes.insert(holes.begin(), pushed.begin(), pushed.end());
  }
  if (!holes.empty()) throw std::logic_error("goal stack not empty at the end of the path");
  return root;
}

std::string print_state_table(const LinearProgram& lp, NameStyle style) {
  std::string out;
  for (const auto& [name, g] : lp.states) {
    out += name.base + " = " + print_goal_state(g, style);
    if (lp.pruned.count(name)) out += " (pruned)";
    out += "\n";
  }
  return out;
}

}  // namespace dimlin
