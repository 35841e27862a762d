// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance run: one PASS/FAIL line per criterion. Exits
// nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>

#include "dimlin/driver.hpp"
#include "dimlin/oracle.hpp"
#include "test_util.hpp"

using namespace dimlin;
using dimlin::testing::corpus_files;
using dimlin::testing::load;
using dimlin::testing::poly;
using dimlin::testing::slurp;

namespace {

using Seconds = std::chrono::duration<double>;

struct Check {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

Interpretation fib0_model() {
  ParseOptions po;
  po.decode_annotations = true;
  return parse_interpretation(
      "fib_e0(A,B) :- -A>= -1, A>=0, B=A.\n"
      "fib_le0(A,B) :- -A>= -1, A>=0, B=A.\n",
      po);
}

DriverConfig run_config() {
  DriverConfig cfg;
  cfg.maxK = 3;
  cfg.timeoutSeconds = 30;
  return cfg;
}

struct Run {
  Outcome outcome;
  double seconds = 0;
  std::string error;  // internal consistency failure raised by the driver
};

Run run(const Program& p, const DriverConfig& cfg) {
  Run r;
  auto t0 = Clock::now();
  try {
    r.outcome = solve(p, cfg);
  } catch (const std::logic_error& e) {
    r.error = e.what();
  }
  r.seconds = Seconds(Clock::now() - t0).count();
  return r;
}

// Safe answers carry a model of the input and no shallow derivation of
// false exists; unsafe answers carry a feasible derivation.
std::string soundness_violation(const Program& p, const Run& r) {
  if (!r.error.empty()) return r.error;
  EnumBudget b;
  b.maxDepth = 6;
  b.maxNodes = 20000;
  switch (r.outcome.kind) {
    case Outcome::Kind::Safe:
      if (!check_model(p, r.outcome.model)) return "model rejected";
      if (derivable(p, PredId::falsum(), b) == Derivability::Yes) return "oracle derives false";
      return "";
    case Outcome::Kind::Unsafe:
      return confirm_cex(p, r.outcome.witness) ? "" : "witness infeasible";
    case Outcome::Kind::Unknown:
      return "";
  }
  return "";
}

std::string repeated_trace(const Outcome& o) {
  std::set<std::string> seen;
  for (const auto& it : o.history) {
    if (!it.trace) continue;
    std::string key = std::to_string(it.k) + " " + print_trace(*it.trace);
    if (!seen.insert(key).second) return key;
  }
  return "";
}

}  // namespace

int main() {
  std::map<std::string, Run> corpus;
  for (const auto& f : corpus_files()) corpus[f] = run(load(f), run_config());

  std::mt19937 rng(20260101);
  std::vector<std::pair<Program, Run>> fuzz;
  for (int i = 0; i < 200; ++i) {
    Program p = dimlin::testing::random_program(rng);
    DriverConfig cfg = run_config();
    cfg.timeoutSeconds = 5;
    Run r = run(p, cfg);
    fuzz.emplace_back(std::move(p), std::move(r));
  }

  std::vector<std::pair<std::string, std::function<Check()>>> criteria;

  criteria.emplace_back("Fib safe with verified model at k<=3 within 10 s", [&] {
    Check c;
    Program p = load("corpus/fib.chc");
    const Run& r = corpus.at("corpus/fib.chc");
    c.require(r.error.empty(), r.error);
    c.require(r.outcome.kind == Outcome::Kind::Safe,
              std::string("verdict ") + to_string(r.outcome.kind) + " (" + r.outcome.reason +
                  ") after k=" + std::to_string(r.outcome.k));
    c.require(r.outcome.k <= 3, "k=" + std::to_string(r.outcome.k));
    c.require(check_model(p, r.outcome.model), "model rejected");
    c.require(r.seconds < 10, std::to_string(r.seconds) + " s");
    return c;
  });

  criteria.emplace_back("kdim(Fib,0) and kdim(Fib,1) match the reference listings", [&] {
    Check c;
    Program fib = load("corpus/fib.chc");
    ParseOptions po;
    po.decode_annotations = true;
    Program g0 = normalize_program(parse_program(slurp("tests/golden/fib_k0.chc"), po));
    Program g1 = normalize_program(parse_program(slurp("tests/golden/fib_k1.chc"), po));
    Program k0 = kdim(fib, 0), k1 = kdim(fib, 1);
    c.require(k0.clauses.size() == 4, "k=0 has " + std::to_string(k0.clauses.size()));
    c.require(k1.clauses.size() == 12, "k=1 has " + std::to_string(k1.clauses.size()));
    c.require(alpha_equivalent(k0, g0), "k=0 differs");
    c.require(alpha_equivalent(k1, g1), "k=1 differs");
    return c;
  });

  criteria.emplace_back("level-zero Fib model holds and its linearisation is safe", [&] {
    Check c;
    Program k0 = kdim(load("corpus/fib.chc"), 0);
    c.require(check_model(k0, fib0_model()), "check_model rejected");
    c.require(solve_linear(linearise_pe(k0, 1).program).kind == SolverStatus::Kind::Safe,
              "solve_linear not safe");
    return c;
  });

  criteria.emplace_back("derivability preserved by linearisation (k=0..2, depth 8)", [&] {
    Check c;
    auto t0 = Clock::now();
    EnumBudget b;
    b.maxDepth = 8;
    b.maxNodes = 50000;
    std::size_t compared = 0;
    for (const auto& f : corpus_files()) {
      Program p = load(f);
      for (unsigned k = 0; k <= 2; ++k) {
        Program pk = kdim(p, k);
        Derivability a = derivable(pk, pk.query, b);
        Derivability l = derivable_linear(linearise_pe(pk, index_bound(p, k)), b);
        if (a == Derivability::BudgetExhausted || l == Derivability::BudgetExhausted) continue;
        ++compared;
        c.require(a == l, f + " k=" + std::to_string(k) + ": " + to_string(a) + " vs " +
                              to_string(l));
      }
    }
    double s = Seconds(Clock::now() - t0).count();
    c.require(compared > 0, "nothing compared");
    c.require(s < 120, std::to_string(s) + " s");
    c.detail = c.ok ? std::to_string(compared) + " pairs, " + std::to_string(s) + " s"
                    : c.detail;
    return c;
  });

  criteria.emplace_back("kdim traces map to feasible traces of dimension <= k", [&] {
    Check c;
    EnumBudget b;
    b.maxDepth = 6;
    b.maxNodes = 20000;
    std::size_t n = 0;
    for (const auto& f : corpus_files()) {
      Program p = load(f);
      for (unsigned k = 0; k <= 2; ++k) {
        Program pk = kdim(p, k);
        ProvenanceMap prov = provenance_map(pk);
        for (const auto& [q, arity] : predicate_arities(pk)) {
          for (const auto& t : enumerate_feasible_traces(pk, q, b).trees) {
            TraceTree m = map_trace(t, prov);
            ++n;
            c.require(tree_dimension(m) <= k, f + " " + print_trace(m));
            c.require(satisfiable(tree_constraint(p, m)), f + " infeasible " + print_trace(m));
          }
        }
      }
    }
    if (c.ok) c.detail = std::to_string(n) + " traces";
    return c;
  });

  criteria.emplace_back("Fib_bug unsafe with a confirmed dimension-2 witness", [&] {
    Check c;
    Program p = load("corpus/fib_bug.chc");
    const Run& r = corpus.at("corpus/fib_bug.chc");
    c.require(r.error.empty(), r.error);
    c.require(r.outcome.kind == Outcome::Kind::Unsafe, to_string(r.outcome.kind));
    if (!c.ok) return c;
    const TraceTree& w = r.outcome.witness;
    c.require(confirm_cex(p, w), "confirm_cex rejected");
    c.require(tree_dimension(w) == 2, "dimension " + std::to_string(tree_dimension(w)));
    EnumBudget b;
    b.maxDepth = w.height();
    bool found = false;
    for (const auto& t : enumerate_feasible_traces(p, PredId::falsum(), b).trees)
      found = found || print_trace(t) == print_trace(w);
    c.require(found, "oracle does not derive " + print_trace(w));
    if (c.ok) c.detail = print_trace(w);
    return c;
  });

  criteria.emplace_back("soundness over the corpus and 200 random programs", [&] {
    Check c;
    for (const auto& f : corpus_files()) {
      std::string v = soundness_violation(load(f), corpus.at(f));
      c.require(v.empty(), f + ": " + v);
    }
    std::map<Outcome::Kind, int> tally;
    for (std::size_t i = 0; i < fuzz.size(); ++i) {
      std::string v = soundness_violation(fuzz[i].first, fuzz[i].second);
      c.require(v.empty(), "random #" + std::to_string(i) + ": " + v + "\n" +
                               print_program(fuzz[i].first));
      ++tally[fuzz[i].second.outcome.kind];
    }
    if (c.ok)
      c.detail = std::to_string(tally[Outcome::Kind::Safe]) + " safe, " +
                 std::to_string(tally[Outcome::Kind::Unsafe]) + " unsafe, " +
                 std::to_string(tally[Outcome::Kind::Unknown]) + " unknown";
    return c;
  });

  criteria.emplace_back("no back-mapped counterexample trace repeats", [&] {
    Check c;
    std::size_t refinements = 0;
    auto visit = [&](const std::string& name, const Run& r) {
      c.require(r.error.find("progress") == std::string::npos, name + ": " + r.error);
      std::string rep = repeated_trace(r.outcome);
      c.require(rep.empty(), name + ": " + rep);
      for (const auto& it : r.outcome.history) refinements += it.trace ? 1 : 0;
    };
    for (const auto& [f, r] : corpus) visit(f, r);
    for (std::size_t i = 0; i < fuzz.size(); ++i) visit("random #" + std::to_string(i), fuzz[i].second);
    if (c.ok) c.detail = std::to_string(refinements) + " traces";
    return c;
  });

  criteria.emplace_back("polyhedral domain micro-suite and widening chains", [&] {
    Check c;
    Polyhedron a = poly("A>=0, A=<2, B=A", 2), b2 = poly("A>=1, A=<3, B=A", 2);
    c.require(equivalent(meet(a, b2), poly("A>=1, A=<2, B=A", 2)), "meet");
    c.require(equivalent(convex_hull(a, b2), poly("A>=0, A=<3, B=A", 2)), "hull");
    c.require(includes(convex_hull(a, b2), a), "hull includes");
    c.require(!includes(a, b2), "inclusion");
    c.require(equivalent(project(a, {VarId("A")}), poly("A>=0, A=<2", 1)), "project");
    c.require(meet(a, poly("A>=5", 2)).is_empty(), "empty meet");
    c.require(equivalent(widen(poly("A>=0, A=<1", 1), poly("A>=0, A=<2", 1)), poly("A>=0", 1)),
              "widen");
    c.require(included_in_union(poly("A>=0, A=<2", 1), {poly("A>=0, A=<1", 1), poly("A>=1, A=<2", 1)}),
              "union cover");
    c.require(!included_in_union(poly("A>=0, A=<3", 1), {poly("A>=0, A=<1", 1), poly("A>=2, A=<3", 1)}),
              "union gap");

    // Increasing chains of length 50: widened iterates stabilise.
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> step(0, 3);
    for (int trial = 0; trial < 20; ++trial) {
      int lo = 0, hi = 0, slope = 0;
      Polyhedron cur = poly("A=0, B=0", 2);
      int changes = 0;
      for (int i = 0; i < 50; ++i) {
        lo -= step(rng);
        hi += step(rng);
        slope += step(rng);
        Polyhedron next = convex_hull(
            cur, poly("A>=" + std::to_string(lo) + ", A=<" + std::to_string(hi) +
                          ", B>=0, B=<" + std::to_string(slope) + "*A+" + std::to_string(slope),
                      2));
        Polyhedron w = widen(cur, next);
        c.require(includes(w, next), "widening lost points");
        if (!equivalent(w, cur)) ++changes;
        cur = w;
      }
      c.require(changes <= 8, "chain changed " + std::to_string(changes) + " times");
    }
    return c;
  });

  criteria.emplace_back("corpus covers safe k=1, safe k=2, unsafe and unknown", [&] {
    Check c;
    bool safe1 = false, safe2 = false, unsafe = false, unknown = false;
    for (const auto& [f, r] : corpus) {
      const Outcome& o = r.outcome;
      safe1 = safe1 || (o.kind == Outcome::Kind::Safe && o.k == 1);
      safe2 = safe2 || (o.kind == Outcome::Kind::Safe && o.k == 2);
      unsafe = unsafe || o.kind == Outcome::Kind::Unsafe;
      unknown = unknown || o.kind == Outcome::Kind::Unknown;
    }
    c.require(safe1, "no program safe at k=1");
    c.require(safe2, "no program safe at k=2");
    c.require(unsafe, "no unsafe program");
    c.require(unknown, "no unknown program");
    return c;
  });

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    failed += c.ok ? 0 : 1;
    std::printf("criterion %zu: %s  %s%s%s\n", i + 1, c.ok ? "PASS" : "FAIL",
                criteria[i].first.c_str(), c.detail.empty() ? "" : " | ",
                c.detail.c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
