// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

#include "dimlin/dimension.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace dimlin {

// ---------------------------------------------------------------------------
// Trace trees

std::size_t TraceTree::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

std::size_t TraceTree::height() const {
  std::size_t h = 0;
  for (const auto& c : children) h = std::max(h, c.height());
  return h + 1;
}

unsigned tree_dimension(const TraceTree& t) {
  if (t.children.empty()) return 0;
  unsigned best = 0, count = 0;
  for (const auto& c : t.children) {
    unsigned d = tree_dimension(c);
    if (d > best || count == 0) {
      best = d;
      count = 1;
    } else if (d == best) {
      ++count;
    }
  }
  return count == 1 ? best : best + 1;
}

std::string print_trace(const TraceTree& t) {
  std::string s = t.id;
  if (t.children.empty()) return s;
  s += "(";
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i) s += ",";
    s += print_trace(t.children[i]);
  }
  return s + ")";
}

namespace {

class TraceParser {
 public:
  explicit TraceParser(std::string_view s) : s_(s) {}

  TraceTree run() {
    TraceTree t = node();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("trace term: " + what + " at offset " +
                                std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  TraceTree node() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected a clause id");
    TraceTree t{std::string(s_.substr(start, pos_ - start)), {}};
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      for (;;) {
        t.children.push_back(node());
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (pos_ < s_.size() && s_[pos_] == ')') {
          ++pos_;
          break;
        }
        fail("expected ',' or ')'");
      }
    }
    return t;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

TraceTree parse_trace(std::string_view text) { return TraceParser(text).run(); }

void check_trace_shape(const Program& p, const TraceTree& t) {
  const Clause* c = p.find(t.id);
  if (!c) throw std::invalid_argument("unknown clause id " + t.id);
  if (c->body.size() != t.children.size()) {
    throw std::invalid_argument("clause " + t.id + " has " +
                                std::to_string(c->body.size()) +
                                " body atoms but the node has " +
                                std::to_string(t.children.size()) + " children");
  }
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    check_trace_shape(p, t.children[i]);
    const Clause* child = p.find(t.children[i].id);
    if (child->head.pred != c->body[i].pred) {
      throw std::invalid_argument("child " + t.children[i].id +
                                  " does not define " + pred_name(c->body[i].pred));
    }
  }
}

// ---------------------------------------------------------------------------
// Interpretations

std::string print_interpretation(const Interpretation& m, NameStyle style,
                                 const std::map<PredId, std::size_t>* arities) {
  std::string out;
  auto line = [&](const PredId& p, std::size_t arity, const Polyhedron* poly) {
    Atom head{p, {}};
    for (const auto& v : canonical_args(arity))
      head.args.push_back(LinExpr::variable(v));
    out += print_atom(head, style) + " :- ";
    if (!poly || poly->is_empty()) {
      out += "1=0.\n";
      return;
    }
    if (poly->constraints().empty()) {
      out += "0=0.\n";
      return;
    }
    bool first = true;
    for (const auto& c : poly->constraints()) {
      if (!first) out += ", ";
      out += print_constraint(c);
      first = false;
    }
    out += ".\n";
  };
  std::set<PredId> done;
  for (const auto& [p, ds] : m) {
    done.insert(p);
    if (ds.empty()) {
      std::size_t arity = 0;
      if (arities) {
        auto it = arities->find(p);
        if (it != arities->end()) arity = it->second;
      }
      line(p, arity, nullptr);
      continue;
    }
    for (const auto& d : ds) line(p, d.dims().size(), &d);
  }
  if (arities) {
    for (const auto& [p, n] : *arities) {
      if (!done.count(p)) line(p, n, nullptr);
    }
  }
  return out;
}

Interpretation parse_interpretation(std::string_view text,
                                    const ParseOptions& opts) {
  Program prog = parse_program(text, opts);
  Interpretation m;
  std::map<PredId, std::size_t> arity;
  for (const auto& raw : prog.clauses) {
    if (!raw.body.empty()) {
      throw std::invalid_argument("model clause for " + pred_name(raw.head.pred) +
                                  " has body atoms");
    }
    Clause c = normalize_clause(raw);
    auto [it, inserted] = arity.emplace(c.head.pred, c.head.args.size());
    if (!inserted && it->second != c.head.args.size()) {
      throw std::invalid_argument("inconsistent arity for " +
                                  pred_name(c.head.pred));
    }
    std::vector<VarId> head = c.head.vars();
    VarSet vars = c.variables();
    std::vector<VarId> all(vars.begin(), vars.end());
    Polyhedron full(all, ConstraintSet(c.constraints));
    Polyhedron poly =
        project(full, head).rename_dims(canonical_args(head.size()));
    auto& list = m[c.head.pred];
    if (poly.is_empty()) {
      // Kept only to remember the arity of an explicitly false predicate.
      if (list.empty()) list.push_back(std::move(poly));
      continue;
    }
    std::erase_if(list, [](const Polyhedron& q) { return q.is_empty(); });
    list.push_back(std::move(poly));
  }
  return m;
}

ProvenanceMap provenance_map(const Program& p) {
  ProvenanceMap out;
  for (const auto& c : p.clauses) {
    if (c.provenance) out[c.id] = *c.provenance;
  }
  return out;
}

// ---------------------------------------------------------------------------
// At-most-k-dimension programs

namespace {

Atom annotate(const Atom& a, Annotation ann, unsigned d) {
  return Atom{a.pred.with(ann, d), a.args};
}

}  // namespace

Program kdim(const Program& p, unsigned k, const KdimOptions& opts) {
  Program out;
  out.query = PredId::falsum().with(Annotation::AtMost, k);
  std::vector<PredId> preds;
  std::map<PredId, std::size_t> arity;
  auto note = [&](const Atom& a) {
    if (a.pred.annotated())
      throw std::invalid_argument("kdim expects an unannotated program");
    if (!a.flat())
      throw std::invalid_argument("kdim expects a normalised program");
    if (arity.emplace(a.pred, a.args.size()).second) preds.push_back(a.pred);
  };
  for (const auto& c : p.clauses) {
    note(c.head);
    for (const auto& b : c.body) note(b);
  }

  auto emit = [&](const Clause& src, std::string id, Atom head,
                  std::vector<Atom> body, ProvenanceKind kind) {
    Clause c;
    c.id = std::move(id);
    c.head = std::move(head);
    c.constraints = src.constraints;
    c.body = std::move(body);
    c.provenance = Provenance{src.id, kind, std::nullopt};
    out.clauses.push_back(std::move(c));
  };

  for (const auto& c : p.clauses) {
    const std::size_t r = c.body.size();
    if (r == 0) {
      emit(c, c.id + "_d0", annotate(c.head, Annotation::Exactly, 0), {},
           ProvenanceKind::Linear);
      continue;
    }
    if (r == 1) {
      for (unsigned d = 0; d <= k; ++d) {
        emit(c, c.id + "_d" + std::to_string(d),
             annotate(c.head, Annotation::Exactly, d),
             {annotate(c.body[0], Annotation::Exactly, d)},
             ProvenanceKind::Linear);
      }
      continue;
    }
    for (unsigned d = 1; d <= k; ++d) {
      const std::string prefix = c.id + "_d" + std::to_string(d);
      for (std::size_t j = 0; j < r; ++j) {
        std::vector<Atom> body;
        for (std::size_t i = 0; i < r; ++i) {
          body.push_back(i == j ? annotate(c.body[i], Annotation::Exactly, d)
                                : annotate(c.body[i], Annotation::AtMost, d - 1));
        }
        emit(c, prefix + "_j" + std::to_string(j + 1),
             annotate(c.head, Annotation::Exactly, d), std::move(body),
             ProvenanceKind::NonlinearCase);
      }
      if (r > 2 && d < 2 && !opts.relaxed_guard) continue;
      for (std::size_t a = 0; a < r; ++a) {
        for (std::size_t b = a + 1; b < r; ++b) {
          std::vector<Atom> body;
          for (std::size_t i = 0; i < r; ++i) {
            body.push_back(i == a || i == b
                               ? annotate(c.body[i], Annotation::Exactly, d - 1)
                               : annotate(c.body[i], Annotation::AtMost, d - 1));
          }
          emit(c,
               prefix + "_p" + std::to_string(a + 1) + "_" + std::to_string(b + 1),
               annotate(c.head, Annotation::Exactly, d), std::move(body),
               ProvenanceKind::NonlinearCase);
        }
      }
    }
  }

  for (const auto& q : preds) {
    std::vector<LinExpr> args;
    for (const auto& v : canonical_args(arity[q]))
      args.push_back(LinExpr::variable(v));
    for (unsigned d = 0; d <= k; ++d) {
      for (unsigned e = 0; e <= d; ++e) {
        Clause c;
        c.id = "eps_" + q.base + "_" + std::to_string(d) + "_" + std::to_string(e);
        c.head = Atom{q.with(Annotation::AtMost, d), args};
        c.body = {Atom{q.with(Annotation::Exactly, e), args}};
        c.provenance = Provenance{std::nullopt, ProvenanceKind::Epsilon, std::nullopt};
        out.clauses.push_back(std::move(c));
      }
    }
  }
  return out;
}

Interpretation lift(const Interpretation& s, const Program& p, unsigned k) {
  Interpretation out;
  for (const auto& [q, n] : predicate_arities(p)) {
    if (q.is_false() || q.annotated()) continue;
    std::vector<Polyhedron> kept;
    auto consider = [&](const Polyhedron& poly) {
      if (poly.is_empty()) return;
      if (poly.dims().size() != n)
        throw std::invalid_argument("arity mismatch lifting " + q.base);
      for (const auto& have : kept)
        if (includes(have, poly)) return;
      std::erase_if(kept, [&](const Polyhedron& have) { return includes(poly, have); });
      kept.push_back(poly);
    };
    for (unsigned d = 0; d <= k; ++d) {
      for (Annotation a : {Annotation::Exactly, Annotation::AtMost}) {
        auto it = s.find(q.with(a, d));
        if (it == s.end()) continue;
        for (const auto& poly : it->second) consider(poly);
      }
    }
    out[q] = std::move(kept);
  }
  return out;
}

Interpretation restrict_interpretation(const Interpretation& s,
                                       const TraceTree& t, const Program& prog) {
  std::set<PredId> heads;
  auto walk = [&](auto&& self, const TraceTree& n) -> void {
    const Clause* c = prog.find(n.id);
    if (!c) throw std::invalid_argument("unknown clause id " + n.id);
    heads.insert(c->head.pred);
    for (const auto& ch : n.children) self(self, ch);
  };
  walk(walk, t);
  Interpretation out;
  for (const auto& [p, ds] : s)
    if (!heads.count(p)) out.emplace(p, ds);
  return out;
}

TraceTree map_trace(const TraceTree& t, const ProvenanceMap& prov) {
  auto it = prov.find(t.id);
  if (it == prov.end())
    throw std::invalid_argument("no provenance for clause " + t.id);
  const Provenance& pv = it->second;
  switch (pv.kind) {
    case ProvenanceKind::Epsilon:
      if (t.children.size() != 1)
        throw std::invalid_argument("epsilon node " + t.id + " is not unary");
      return map_trace(t.children[0], prov);
    case ProvenanceKind::ModelFact:
      throw std::logic_error("model-fact clause " + t.id +
                             " cannot be mapped to the original program");
    default:
      break;
  }
  TraceTree out{pv.origin.value_or(t.id), {}};
  for (const auto& c : t.children) out.children.push_back(map_trace(c, prov));
  return out;
}

}  // namespace dimlin
