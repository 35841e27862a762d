// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

#include "dimlin/driver.hpp"

#include <set>
#include <stdexcept>

namespace dimlin {

namespace {

Renaming canonical_to(const std::vector<VarId>& vars) {
  Renaming r;
  std::vector<VarId> canon = canonical_args(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) r[canon[i]] = vars[i];
  return r;
}

const std::vector<Polyhedron>& value_of(const Interpretation& m, const PredId& q) {
  static const std::vector<Polyhedron> none;
  if (q.is_false() && !q.annotated()) return none;
  auto it = m.find(q);
  return it == m.end() ? none : it->second;
}

bool clause_holds(const Clause& raw, const Interpretation& m) {
  Clause c = normalize_clause(raw);
  VarSet all = c.variables();
  std::vector<VarId> dims(all.begin(), all.end());
  std::vector<VarId> head = c.head.vars();
  std::vector<std::vector<Polyhedron>> pieces;
  for (const auto& b : c.body) {
    std::vector<VarId> args = b.vars();
    std::vector<Polyhedron> ps;
    for (const auto& d : value_of(m, b.pred)) {
      if (d.dims().size() != args.size())
        throw std::invalid_argument("arity mismatch for " + pred_name(b.pred));
      if (d.is_empty()) continue;
      ps.emplace_back(dims, d.constraints().rename(canonical_to(args)));
    }
    if (ps.empty()) return true;
    pieces.push_back(std::move(ps));
  }
  const std::vector<Polyhedron>& target = value_of(m, c.head.pred);
  for (const auto& d : target)
    if (d.dims().size() != head.size())
      throw std::invalid_argument("arity mismatch for " + pred_name(c.head.pred));

  auto rec = [&](auto&& self, std::size_t i, const Polyhedron& acc) -> bool {
    if (acc.is_empty()) return true;
    if (i == pieces.size()) {
      Polyhedron img = project(acc, head).rename_dims(canonical_args(head.size()));
      return img.is_empty() || included_in_union(img, target);
    }
    for (const auto& d : pieces[i])
      if (!self(self, i + 1, meet(acc, d))) return false;
    return true;
  };
  return rec(rec, 0, Polyhedron(dims, ConstraintSet(c.constraints)));
}

// Head values of the subtree over canonical args; empty when infeasible.
Polyhedron tree_value(const Program& p, const TraceTree& t) {
  const Clause* raw = p.find(t.id);
  Clause c = normalize_clause(*raw);
  ConstraintSet acc(c.constraints);
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    Polyhedron child = tree_value(p, t.children[i]);
    if (child.is_empty()) return Polyhedron::bottom(canonical_args(c.head.args.size()));
    acc.add_all(child.constraints().rename(canonical_to(c.body[i].vars())));
  }
  VarSet all = c.variables();
  std::vector<VarId> dims(all.begin(), all.end());
  std::vector<VarId> head = c.head.vars();
  return project(Polyhedron(dims, acc), head).rename_dims(canonical_args(head.size()));
}

bool uses_model_fact(const TraceTree& t, const Program& prog) {
  const Clause* c = prog.find(t.id);
  if (c && c->provenance && c->provenance->kind == ProvenanceKind::ModelFact) return true;
  for (const auto& ch : t.children)
    if (uses_model_fact(ch, prog)) return true;
  return false;
}

}  // namespace

bool check_model(const Program& p, const Interpretation& m) {
  for (const auto& c : p.clauses)
    if (!clause_holds(c, m)) return false;
  return true;
}

bool confirm_cex(const Program& p, const TraceTree& t) {
  check_trace_shape(p, t);
  return !tree_value(p, t).is_empty();
}

const char* to_string(Outcome::Kind k) {
  switch (k) {
    case Outcome::Kind::Safe: return "safe";
    case Outcome::Kind::Unsafe: return "unsafe";
    case Outcome::Kind::Unknown: return "unknown";
  }
  return "unknown";
}

Interpretation extract_annotated(const Program& pk, const LinearProgram& lp,
                                 const Interpretation& linear_model,
                                 const Interpretation& substituted) {
  std::map<PredId, std::size_t> arity = predicate_arities(pk);
  Interpretation out;
  // Exact-dimension values first, so that at-most predicates without a state
  // of their own can fall back to them.
  std::vector<PredId> preds;
  for (const auto& [q, n] : arity)
    if (q.annotated() && q.annotation == Annotation::Exactly) preds.push_back(q);
  for (const auto& [q, n] : arity)
    if (q.annotated() && q.annotation == Annotation::AtMost) preds.push_back(q);

  for (const auto& q : preds) {
    auto sit = substituted.find(q);
    if (sit != substituted.end()) {
      out[q] = sit->second;
      continue;
    }
    std::vector<VarId> canon = canonical_args(arity.at(q));
    if (const PredId* s = lp.singleton(q)) {
      auto it = linear_model.find(*s);
      if (lp.pruned.count(*s) || it == linear_model.end()) {
        out[q] = {Polyhedron::bottom(canon)};
      } else {
        out[q].clear();
        for (const auto& d : it->second) out[q].push_back(d.rename_dims(canon));
      }
      continue;
    }
    if (q.annotation == Annotation::AtMost) {
      std::vector<Polyhedron> ds;
      for (unsigned e = 0; e <= q.dim; ++e) {
        auto it = out.find(q.with(Annotation::Exactly, e));
        if (it == out.end()) continue;
        for (const auto& d : it->second)
          if (!d.is_empty()) ds.push_back(d);
      }
      out[q] = ds.empty() ? std::vector<Polyhedron>{Polyhedron::bottom(canon)} : ds;
    }
  }
  return out;
}

Outcome solve(const Program& input, const DriverConfig& cfg) {
  const Program p = normalize_program(input);
  const auto deadline = Clock::now() + std::chrono::seconds(cfg.timeoutSeconds);
  LinearSolverConfig lcfg = cfg.linear;
  if (!lcfg.deadline || *lcfg.deadline > deadline) lcfg.deadline = deadline;

  Outcome out;
  Interpretation s;
  std::set<std::string> seen;  // printed back-mapped traces
  unsigned k = 0;
  try {
    while (k <= cfg.maxK) {
      out.k = k;
      Iteration it;
      it.k = k;
      const Program pk = kdim(p, k, cfg.kdim);
      const Program sub = substitute_model(pk, cfg.reuse ? s : Interpretation{});
      const LinearProgram lp = linearise_pe(sub, index_bound(p, k), cfg.strategy);
      it.linearClauses = lp.program.clauses.size();
      const SolverStatus st = solve_linear(lp.program, lcfg);

      if (st.kind == SolverStatus::Kind::Safe) {
        Interpretation annotated =
            extract_annotated(pk, lp, st.model, cfg.reuse ? s : Interpretation{});
        Interpretation lifted = lift(annotated, p, k);
        if (check_model(p, lifted)) {
          it.event = "safe";
          out.history.push_back(std::move(it));
          out.kind = Outcome::Kind::Safe;
          out.model = std::move(lifted);
          return out;
        }
        it.event = "lift-rejected";
        out.history.push_back(std::move(it));
        s = cfg.reuse ? std::move(annotated) : Interpretation{};
        ++k;
        continue;
      }

      if (st.kind == SolverStatus::Kind::Unknown) {
        it.event = "unknown";
        out.history.push_back(std::move(it));
        out.kind = Outcome::Kind::Unknown;
        out.reason = "linear solver returned unknown";
        return out;
      }

      TraceTree t = back_map(st.path, lp);
      if (!seen.insert(print_trace(t)).second)
        throw std::logic_error("counterexample repeated: " + print_trace(t));
      it.trace = t;
      if (uses_model_fact(t, sub)) {
        it.event = "refined";
        out.history.push_back(std::move(it));
        s = restrict_interpretation(s, t, sub);
        continue;
      }
      TraceTree w = map_trace(t, provenance_map(pk));
      if (!confirm_cex(p, w))
        throw std::logic_error("counterexample not confirmed: " + print_trace(w));
      it.event = "unsafe";
      out.history.push_back(std::move(it));
      out.kind = Outcome::Kind::Unsafe;
      out.witness = std::move(w);
      return out;
    }
    out.kind = Outcome::Kind::Unknown;
    out.reason = "dimension bound exceeded";
    out.k = cfg.maxK;
  } catch (const Timeout&) {
    out.kind = Outcome::Kind::Unknown;
    out.reason = "timeout";
  }
  return out;
}

}  // namespace dimlin
