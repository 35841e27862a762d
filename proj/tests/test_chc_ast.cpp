// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "dimlin/chc_ast.hpp"

using namespace dimlin;

namespace {

std::string slurp(const std::string& rel) {
  std::ifstream in(std::string(DIMLIN_SOURCE_DIR) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kFib = R"(
fib(A, B):- A>=0,  A=<1, B=A.
fib(A, B) :- A > 1, A2 = A - 2, fib(A2, B2),
           A1 = A - 1, fib(A1, B1), B = B1 + B2.
false:- A>5, fib(A,B), B<A.
)";

}  // namespace

TEST(Parse, FibListing) {
  Program p = parse_program(kFib);
  ASSERT_EQ(p.clauses.size(), 3u);
  EXPECT_EQ(p.clauses[0].id, "c1");
  EXPECT_EQ(p.clauses[1].id, "c2");
  EXPECT_EQ(p.clauses[2].id, "c3");
  EXPECT_EQ(p.clauses[1].body.size(), 2u);
  EXPECT_TRUE(p.clauses[2].is_query());
  EXPECT_FALSE(p.linear());
  EXPECT_EQ(max_body_atoms(p), 2u);
}

TEST(Parse, LabelsKeepIds) {
  Program p = parse_program(slurp("corpus/fib.chc"));
  ASSERT_EQ(p.clauses.size(), 3u);
  EXPECT_EQ(p.clauses[2].id, "c3");
  EXPECT_EQ(p.clauses[2].constraints.size(), 2u);
}

TEST(Parse, Empty) {
  EXPECT_TRUE(parse_program("").clauses.empty());
  EXPECT_TRUE(parse_program("  % nothing\n").clauses.empty());
  EXPECT_EQ(max_body_atoms(parse_program("")), 0u);
}

TEST(Parse, RejectsProductOfVariables) {
  try {
    parse_program("p(X) :- X*Y>0.");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("non-linear"), std::string::npos);
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(Parse, RejectsUnknownOperator) {
  EXPECT_THROW(parse_program("p(X) :- X =:= 1."), ParseError);
  EXPECT_THROW(parse_program("p(X) :- X <= 1."), ParseError);
}

TEST(Parse, ReportsPosition) {
  try {
    parse_program("p(X) :- X>=0.\nq(Y) :- Y >= .");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Parse, ScalarMultiplication) {
  Program p = parse_program("p(X) :- 2*X - 3 >= X*4.");
  ASSERT_EQ(p.clauses[0].constraints.size(), 1u);
  const auto& e = p.clauses[0].constraints[0].expr;
  EXPECT_EQ(e.coeff(VarId("X")), -2);
  EXPECT_EQ(e.constant(), -3);
}

TEST(Parse, ConstraintCounts) {
  EXPECT_EQ(max_body_atoms(parse_program("p(X) :- X=0. q(X) :- X>1.")), 0u);
  EXPECT_EQ(max_body_atoms(parse_program(
                "p(X) :- q(X), q(X), q(X), q(X), q(X). q(X) :- X=1.")),
            5u);
}

TEST(Normalize, FlattensTerms) {
  Program p = normalize_program(parse_program("p(X+1) :- X>0."));
  const Clause& c = p.clauses[0];
  ASSERT_TRUE(c.head.flat());
  VarId v = c.head.vars()[0];
  EXPECT_NE(v, VarId("X"));
  ASSERT_EQ(c.constraints.size(), 2u);
  EXPECT_EQ(c.constraints[0].rel, Relation::Eq);
  EXPECT_EQ(c.constraints[0].expr.coeff(v), 1);
  EXPECT_EQ(c.constraints[0].expr.coeff(VarId("X")), -1);
  EXPECT_EQ(c.constraints[0].expr.constant(), -1);
}

TEST(Normalize, RepeatedVariables) {
  Program p = normalize_program(parse_program("q(X,X) :- X=0."));
  const Clause& c = p.clauses[0];
  ASSERT_TRUE(c.head.flat());
  auto vs = c.head.vars();
  EXPECT_NE(vs[0], vs[1]);
  EXPECT_EQ(c.constraints.size(), 2u);
}

TEST(Normalize, NormalClauseUnchanged) {
  Program p = parse_program(kFib);
  Program n = normalize_program(p);
  EXPECT_EQ(print_clause(p.clauses[0]), print_clause(n.clauses[0]));
}

TEST(Normalize, Idempotent) {
  for (const char* text :
       {kFib, "p(X+1,X) :- X>0.", "q(X,X,Y) :- q(Y,Y+2,X), X=0.",
        "false :- r(2*X), r(X)."}) {
    Program once = normalize_program(parse_program(text));
    Program twice = normalize_program(once);
    EXPECT_EQ(print_program(once), print_program(twice)) << text;
  }
}

TEST(Print, AnnotatedNames) {
  PredId e0("fib", Annotation::Exactly, 0);
  PredId le1("fib", Annotation::AtMost, 1);
  EXPECT_EQ(pred_name(e0, NameStyle::Bracket), "fib(0)");
  EXPECT_EQ(pred_name(le1, NameStyle::Bracket), "fib[1]");
  EXPECT_EQ(pred_name(e0, NameStyle::Exchange), "fib_e0");
  EXPECT_EQ(pred_name(le1, NameStyle::Exchange), "fib_le1");
  Atom a{e0, {LinExpr::variable(VarId("A")), LinExpr::variable(VarId("B"))}};
  EXPECT_EQ(print_atom(a, NameStyle::Bracket), "fib(0)(A,B)");
}

TEST(Print, ExchangeNamesRoundTrip) {
  Program p = parse_program("fib_e0(A,B) :- A=B. fib_le1(A,B) :- fib_e0(A,B).",
                            {.decode_annotations = true});
  EXPECT_EQ(p.clauses[0].head.pred, PredId("fib", Annotation::Exactly, 0));
  EXPECT_EQ(p.clauses[1].head.pred, PredId("fib", Annotation::AtMost, 1));
  Program raw = parse_program("fib_e0(A,B) :- A=B.");
  EXPECT_EQ(raw.clauses[0].head.pred, PredId("fib_e0"));
}

TEST(Print, RoundTrip) {
  for (const char* f : {"corpus/fib.chc", "corpus/fib_bug.chc",
                        "corpus/mutual.chc", "corpus/triple.chc"}) {
    Program p = normalize_program(parse_program(slurp(f)));
    std::string text = print_program(p, {.labels = true});
    Program q = parse_program(text);
    EXPECT_EQ(text, print_program(q, {.labels = true})) << f;
  }
}

TEST(Arity, Inconsistent) {
  EXPECT_THROW(predicate_arities(parse_program("p(X) :- p(X,Y).")),
               std::invalid_argument);
}
