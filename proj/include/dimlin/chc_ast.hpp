// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

// Data model, parser, normaliser and printer for constrained Horn clauses
// over linear arithmetic.

#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace dimlin {

using Rational = mpq_class;

std::string to_string(const Rational& q);

struct VarId {
  std::string name;

  VarId() = default;
  explicit VarId(std::string n) : name(std::move(n)) {}

  friend bool operator==(const VarId&, const VarId&) = default;
  friend auto operator<=>(const VarId&, const VarId&) = default;
};

using VarSet = std::set<VarId>;
using Renaming = std::map<VarId, VarId>;

/// Linear expression `sum(coeff * var) + constant`. Zero coefficients are
/// never stored.
class LinExpr {
 public:
  LinExpr() = default;
  explicit LinExpr(Rational constant) : constant_(std::move(constant)) {}

  static LinExpr variable(const VarId& v, const Rational& coeff = 1);

  const std::map<VarId, Rational>& terms() const { return terms_; }
  const Rational& constant() const { return constant_; }
  Rational coeff(const VarId& v) const;

  bool is_constant() const { return terms_.empty(); }
  /// The variable when the expression is exactly `1*V + 0`.
  std::optional<VarId> as_variable() const;

  void add_term(const VarId& v, const Rational& coeff);
  void add_constant(const Rational& c) { constant_ += c; }

  LinExpr& operator+=(const LinExpr& other);
  LinExpr& operator-=(const LinExpr& other);
  LinExpr& operator*=(const Rational& factor);

  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(const Rational& f, LinExpr a) { return a *= f; }
  LinExpr operator-() const;

  LinExpr substitute(const VarId& v, const LinExpr& replacement) const;
  LinExpr rename(const Renaming& renaming) const;
  void collect_vars(VarSet& out) const;

  friend bool operator==(const LinExpr&, const LinExpr&) = default;

 private:
  std::map<VarId, Rational> terms_;
  Rational constant_{0};
};

/// `expr rel 0`.
enum class Relation { Eq, Ge, Gt };

struct AtomicConstraint {
  LinExpr expr;
  Relation rel = Relation::Ge;

  static AtomicConstraint eq(LinExpr lhs, const LinExpr& rhs);
  static AtomicConstraint ge(LinExpr lhs, const LinExpr& rhs);
  static AtomicConstraint gt(LinExpr lhs, const LinExpr& rhs);
  static AtomicConstraint falsum();

  /// Scaled to coprime integer coefficients; equalities get a positive
  /// leading coefficient. Constant constraints become `0>=0` or `-1>=0`.
  AtomicConstraint normalized() const;
  /// Truth value of a variable-free constraint.
  std::optional<bool> constant_truth() const;
  AtomicConstraint rename(const Renaming& renaming) const;

  friend bool operator==(const AtomicConstraint&,
                         const AtomicConstraint&) = default;
};

enum class Annotation { None, Exactly, AtMost };

/// Predicate symbol. Annotated variants (`p^{=d}`, `p^{<=d}`) are only ever
/// produced by the dimension transformation.
struct PredId {
  std::string base;
  Annotation annotation = Annotation::None;
  unsigned dim = 0;

  PredId() = default;
  explicit PredId(std::string b, Annotation a = Annotation::None,
                  unsigned d = 0)
      : base(std::move(b)), annotation(a), dim(a == Annotation::None ? 0 : d) {}

  static PredId falsum() { return PredId("false"); }
  bool is_false() const { return base == "false"; }
  bool annotated() const { return annotation != Annotation::None; }
  PredId with(Annotation a, unsigned d) const { return PredId(base, a, d); }
  PredId unannotated() const { return PredId(base); }

  friend bool operator==(const PredId&, const PredId&) = default;
  friend auto operator<=>(const PredId&, const PredId&) = default;
};

struct Atom {
  PredId pred;
  std::vector<LinExpr> args;

  /// Argument variables; throws if some argument is not a plain variable.
  std::vector<VarId> vars() const;
  bool flat() const;
};

enum class ProvenanceKind { Source, Linear, NonlinearCase, Epsilon, ModelFact };

struct Provenance {
  std::optional<std::string> origin;
  ProvenanceKind kind = ProvenanceKind::Source;
  /// Substituted predicate, for `ModelFact` entries.
  std::optional<PredId> pred;
};

struct Clause {
  std::string id;
  Atom head;  // `false` (no arguments) for integrity constraints
  std::vector<AtomicConstraint> constraints;
  std::vector<Atom> body;
  std::optional<Provenance> provenance;

  bool is_query() const { return head.pred.is_false(); }
  VarSet variables() const;
};

struct Program {
  std::vector<Clause> clauses;
  PredId query = PredId::falsum();

  bool linear() const;
  const Clause* find(std::string_view id) const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct ParseOptions {
  /// Read `p_e3` / `p_le3` as the annotated predicates `p^{=3}` / `p^{<=3}`.
  bool decode_annotations = false;
};

/// A predicate name as written in clause text.
PredId parse_pred_name(std::string_view name, const ParseOptions& opts = {});

/// Parses Prolog-style clause text. Clause ids are `c1, c2, ...` in textual
/// order unless the clause carries an explicit `label.` prefix.
Program parse_program(std::string_view text, const ParseOptions& opts = {});

/// Flattens atom arguments into pairwise-distinct variables, moving terms and
/// repeated variables into equality constraints.
Program normalize_program(const Program& p);
Clause normalize_clause(const Clause& c);

enum class NameStyle {
  Bracket,   // fib(0)(A,B), fib[1](A,B)
  Exchange,  // fib_e0(A,B), fib_le1(A,B); re-parseable
};

struct PrintOptions {
  NameStyle names = NameStyle::Exchange;
  bool labels = false;
};

std::string pred_name(const PredId& p, NameStyle style = NameStyle::Exchange);
std::string print_expr(const LinExpr& e);
std::string print_constraint(const AtomicConstraint& c);
std::string print_atom(const Atom& a, NameStyle style = NameStyle::Exchange);
std::string print_clause(const Clause& c, const PrintOptions& opts = {});
std::string print_program(const Program& p, const PrintOptions& opts = {});

std::size_t max_body_atoms(const Program& p);

/// Clause text with variables renamed by first occurrence (head, then body
/// atoms, then constraints) and constraints sorted; the least such text over
/// all body orders. Ids are ignored.
std::string canonical_clause(const Clause& c);
/// Equal multisets of canonical clauses.
bool alpha_equivalent(const Program& a, const Program& b);

/// Arity of every predicate occurring in `p`; throws std::invalid_argument on
/// inconsistent use.
std::map<PredId, std::size_t> predicate_arities(const Program& p);

/// `A, B, ..., Z, A1, B1, ...`: the argument names used for interpretations.
std::vector<VarId> canonical_args(std::size_t n);

}  // namespace dimlin
