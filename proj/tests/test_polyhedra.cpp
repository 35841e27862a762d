// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <gtest/gtest.h>

#include "dimlin/polyhedra.hpp"

using namespace dimlin;

namespace {

ConstraintSet cs(const std::string& text) {
  if (text.empty()) return {};
  Program p = parse_program("p :- " + text + ".");
  return ConstraintSet(p.clauses.at(0).constraints);
}

std::vector<VarId> dims(std::initializer_list<const char*> names) {
  std::vector<VarId> out;
  for (const char* n : names) out.emplace_back(n);
  return out;
}

Polyhedron P(const std::string& text, std::vector<VarId> d = dims({"X"})) {
  return Polyhedron(std::move(d), cs(text));
}

bool same(const Polyhedron& a, const Polyhedron& b) { return equivalent(a, b); }

bool holds(const ConstraintSet& c, const std::map<VarId, Rational>& pt) {
  for (const auto& a : c) {
    Rational s = a.expr.constant();
    for (const auto& [x, k] : a.expr.terms()) s += k * pt.at(x);
    bool ok = a.rel == Relation::Eq ? s == 0 : a.rel == Relation::Ge ? s >= 0 : s > 0;
    if (!ok) return false;
  }
  return true;
}

Polyhedron random_poly(std::mt19937& rng, const std::vector<VarId>& d) {
  std::uniform_int_distribution<int> coef(-3, 3), n(1, 3), rel(1, 2);
  ConstraintSet c;
  int m = n(rng);
  for (int i = 0; i < m; ++i) {
    LinExpr e(Rational(coef(rng)));
    for (const auto& v : d) e.add_term(v, coef(rng));
    c.add({e, static_cast<Relation>(rel(rng))});
  }
  return Polyhedron(d, c);
}

}  // namespace

TEST(Polyhedra, Emptiness) {
  EXPECT_TRUE(P("X>=0, 0-X>0").is_empty());
  EXPECT_FALSE(Polyhedron::top(dims({"A"})).is_empty());
  EXPECT_TRUE(P("A>5, 0-A>=0-1", dims({"A"})).is_empty());
}

TEST(Polyhedra, Meet) {
  EXPECT_TRUE(same(meet(P("X>=0"), P("X>=1")), P("X>=1")));
  EXPECT_TRUE(same(meet(P("X>=0"), Polyhedron::top(dims({"X"}))), P("X>=0")));
  EXPECT_TRUE(meet(P("X>=1"), P("0-X>=0")).is_empty());
  EXPECT_THROW(meet(P("X>=0"), Polyhedron::top(dims({"Y"}))),
               std::invalid_argument);
}

TEST(Polyhedra, Project) {
  auto xy = dims({"X", "Y"});
  EXPECT_TRUE(same(project(P("X>=0, Y=X+1", xy), dims({"Y"})),
                   P("Y>=1", dims({"Y"}))));
  Polyhedron p = P("X>=0, Y=X+1", xy);
  EXPECT_TRUE(same(project(p, xy), p));
  EXPECT_TRUE(project(P("X>1, X<0", xy), dims({"Y"})).is_empty());
  EXPECT_THROW(project(p, dims({"Z"})), std::invalid_argument);
}

TEST(Polyhedra, Includes) {
  EXPECT_TRUE(includes(P("X>=0"), P("X>=1")));
  EXPECT_FALSE(includes(P("X>=1"), P("X>=0")));
  EXPECT_TRUE(includes(P("X>=1"), Polyhedron::bottom(dims({"X"}))));
}

TEST(Polyhedra, Hull) {
  EXPECT_TRUE(same(convex_hull(P("X=0"), P("X=1")), P("X>=0, 0-X>=0-1")));
  EXPECT_TRUE(same(convex_hull(P("X>=2"), Polyhedron::bottom(dims({"X"}))),
                   P("X>=2")));
  auto xy = dims({"X", "Y"});
  Polyhedron h = convex_hull(P("X=0, Y=0", xy), P("X=1, Y=1", xy));
  EXPECT_TRUE(same(h, P("X=Y, X>=0, X=<1", xy)));
}

TEST(Polyhedra, HullRelaxesStrictness) {
  Polyhedron h = convex_hull(P("X>0, X<1"), P("X>2, X<3"));
  EXPECT_TRUE(same(h, P("X>=0, X=<3")));
}

TEST(Polyhedra, HullWithUnboundedSide) {
  auto xy = dims({"X", "Y"});
  Polyhedron h = convex_hull(P("X=0, Y=0", xy), P("X>=1, Y=X", xy));
  EXPECT_TRUE(same(h, P("X>=0, Y=X", xy)));
}

TEST(Polyhedra, Widen) {
  EXPECT_TRUE(same(widen(P("X>=0, 0-X>=0-1"), P("X>=0, 0-X>=0-2")), P("X>=0")));
  Polyhedron p = P("X>=0, X=<4");
  EXPECT_TRUE(same(widen(p, p), p));
  EXPECT_TRUE(same(widen(Polyhedron::bottom(dims({"X"})), p), p));
}

TEST(Polyhedra, WidenKeepsEqualityHalves) {
  auto xy = dims({"X", "Y"});
  Polyhedron w = widen(P("X=0, Y=0", xy), P("X>=0, X=<1, Y=X", xy));
  EXPECT_TRUE(same(w, P("X>=0, Y=X", xy)));
}

TEST(Polyhedra, WideningChainStabilises) {
  // Ascending chain [0, n] for n = 1..50, fed through widening.
  Polyhedron acc = P("X>=0, X=<1");
  std::size_t prev = acc.constraints().size();
  int stable_at = -1;
  for (int n = 2; n <= 51; ++n) {
    Polyhedron next = widen(acc, convex_hull(acc, P("X=" + std::to_string(n))));
    EXPECT_LE(next.constraints().size(), prev);
    prev = next.constraints().size();
    if (stable_at < 0 && equivalent(next, acc)) stable_at = n;
    acc = next;
  }
  EXPECT_GE(stable_at, 0);
  EXPECT_LE(stable_at, 51);
  EXPECT_TRUE(same(acc, P("X>=0")));
}

TEST(Polyhedra, WideningChain2D) {
  auto xy = dims({"X", "Y"});
  Polyhedron acc = P("X=0, Y=0", xy);
  int steps = 0;
  for (int n = 1; n <= 50; ++n) {
    std::string pt = "X=" + std::to_string(n) + ", Y=" + std::to_string(2 * n);
    Polyhedron next = widen(acc, convex_hull(acc, P(pt, xy)));
    ++steps;
    if (equivalent(next, acc)) break;
    acc = next;
  }
  EXPECT_LT(steps, 50);
  EXPECT_TRUE(same(acc, P("X>=0, Y=2*X", xy)));
}

TEST(Polyhedra, UnionInclusion) {
  EXPECT_TRUE(included_in_union(P("X>=0, X=<2"),
                                {P("X>=0, X=<1"), P("X>=1, X=<2")}));
  auto gap = uncovered_part(P("X>=0, X=<2"),
                            {P("X>=0, X=<1"), P("2*X>=3, X=<2")});
  ASSERT_TRUE(gap.has_value());
  EXPECT_TRUE(satisfiable(gap->constraints()));
  EXPECT_TRUE(includes(P("X>1, 2*X<3"), *gap));
  EXPECT_TRUE(included_in_union(Polyhedron::bottom(dims({"X"})), {}));
  EXPECT_FALSE(included_in_union(P("X>=0"), {}));
}

class RandomPolyhedra : public ::testing::TestWithParam<int> {};

TEST_P(RandomPolyhedra, Properties) {
  std::mt19937 rng(static_cast<unsigned>(GetParam()));
  auto d = dims({"X", "Y", "Z"});
  std::vector<Rational> grid;
  for (int a = -4; a <= 4; ++a) grid.emplace_back(a);
  for (int iter = 0; iter < 15; ++iter) {
    std::vector<VarId> dd(d.begin(), d.begin() + 1 + iter % 3);
    Polyhedron p = random_poly(rng, dd), q = random_poly(rng, dd);
    Polyhedron h = convex_hull(p, q);
    EXPECT_TRUE(includes(h, p));
    EXPECT_TRUE(includes(h, q));
    Polyhedron w = widen(p, h);
    EXPECT_TRUE(includes(w, p));
    EXPECT_TRUE(includes(w, h));

    // Union inclusion agrees with sampling.
    std::vector<Polyhedron> ps{random_poly(rng, dd), random_poly(rng, dd)};
    Polyhedron r = random_poly(rng, dd);
    auto witness = uncovered_part(r, ps);
    if (witness) {
      EXPECT_TRUE(satisfiable(witness->constraints()));
      EXPECT_TRUE(includes(r, *witness));
      for (const auto& m : ps) EXPECT_FALSE(includes(m, *witness));
    } else {
      std::map<VarId, Rational> pt;
      std::function<void(std::size_t)> walk = [&](std::size_t j) {
        if (j == dd.size()) {
          if (!holds(r.constraints(), pt)) return;
          bool covered = false;
          for (const auto& m : ps) covered = covered || holds(m.constraints(), pt);
          EXPECT_TRUE(covered);
          return;
        }
        for (const auto& g : grid) {
          pt[dd[j]] = g;
          walk(j + 1);
        }
      };
      walk(0);
    }

    // Projection commutes with meet of variable-disjoint constraints.
    if (dd.size() >= 2) {
      std::vector<VarId> first{dd[0]};
      std::vector<VarId> rest(dd.begin() + 1, dd.end());
      Polyhedron a = random_poly(rng, first), b = random_poly(rng, rest);
      Polyhedron ab(dd, a.constraints() & b.constraints());
      Polyhedron lhs = project(ab, first);
      Polyhedron rhs = b.is_empty() ? Polyhedron::bottom(first) : a;
      EXPECT_TRUE(equivalent(lhs, rhs));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomPolyhedra, ::testing::Range(1, 9));
