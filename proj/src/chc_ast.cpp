// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

#include "dimlin/chc_ast.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>

namespace dimlin {

std::string to_string(const Rational& q) { return q.get_str(); }

// ---------------------------------------------------------------------------
// LinExpr

LinExpr LinExpr::variable(const VarId& v, const Rational& coeff) {
  LinExpr e;
  e.add_term(v, coeff);
  return e;
}

Rational LinExpr::coeff(const VarId& v) const {
  auto it = terms_.find(v);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::optional<VarId> LinExpr::as_variable() const {
  if (terms_.size() != 1 || constant_ != 0) return std::nullopt;
  const auto& [v, c] = *terms_.begin();
  if (c != 1) return std::nullopt;
  return v;
}

void LinExpr::add_term(const VarId& v, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.emplace(v, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

LinExpr& LinExpr::operator+=(const LinExpr& other) {
  for (const auto& [v, c] : other.terms_) add_term(v, c);
  constant_ += other.constant_;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& other) {
  for (const auto& [v, c] : other.terms_) add_term(v, -c);
  constant_ -= other.constant_;
  return *this;
}

LinExpr& LinExpr::operator*=(const Rational& factor) {
  if (factor == 0) {
    terms_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& [v, c] : terms_) c *= factor;
  constant_ *= factor;
  return *this;
}

LinExpr LinExpr::operator-() const {
  LinExpr r = *this;
  r *= -1;
  return r;
}

LinExpr LinExpr::substitute(const VarId& v, const LinExpr& replacement) const {
  auto it = terms_.find(v);
  if (it == terms_.end()) return *this;
  LinExpr r = *this;
  Rational c = it->second;
  r.terms_.erase(v);
  r += c * replacement;
  return r;
}

LinExpr LinExpr::rename(const Renaming& renaming) const {
  LinExpr r(constant_);
  for (const auto& [v, c] : terms_) {
    auto it = renaming.find(v);
    r.add_term(it == renaming.end() ? v : it->second, c);
  }
  return r;
}

void LinExpr::collect_vars(VarSet& out) const {
  for (const auto& [v, c] : terms_) out.insert(v);
}

// ---------------------------------------------------------------------------
// AtomicConstraint

AtomicConstraint AtomicConstraint::eq(LinExpr lhs, const LinExpr& rhs) {
  return {std::move(lhs -= rhs), Relation::Eq};
}
AtomicConstraint AtomicConstraint::ge(LinExpr lhs, const LinExpr& rhs) {
  return {std::move(lhs -= rhs), Relation::Ge};
}
AtomicConstraint AtomicConstraint::gt(LinExpr lhs, const LinExpr& rhs) {
  return {std::move(lhs -= rhs), Relation::Gt};
}
AtomicConstraint AtomicConstraint::falsum() {
  return {LinExpr(Rational(-1)), Relation::Ge};
}

std::optional<bool> AtomicConstraint::constant_truth() const {
  if (!expr.is_constant()) return std::nullopt;
  const Rational& c = expr.constant();
  switch (rel) {
    case Relation::Eq: return c == 0;
    case Relation::Ge: return c >= 0;
    case Relation::Gt: return c > 0;
  }
  return std::nullopt;
}

AtomicConstraint AtomicConstraint::normalized() const {
  if (auto t = constant_truth()) {
    return *t ? AtomicConstraint{LinExpr(Rational(0)), Relation::Ge}
              : falsum();
  }
  mpz_class lcm_den = 1;
  auto fold_den = [&](const Rational& q) {
    mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(),
            q.get_den_mpz_t());
  };
  for (const auto& [v, c] : expr.terms()) fold_den(c);
  fold_den(expr.constant());
  mpz_class g = 0;
  auto fold_gcd = [&](const Rational& q) {
    mpz_class n = q.get_num() * (lcm_den / q.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  };
  for (const auto& [v, c] : expr.terms()) fold_gcd(c);
  fold_gcd(expr.constant());
  Rational scale = Rational(lcm_den) / Rational(g);
  if (rel == Relation::Eq && expr.terms().begin()->second < 0) scale = -scale;
  AtomicConstraint r{expr, rel};
  r.expr *= scale;
  return r;
}

AtomicConstraint AtomicConstraint::rename(const Renaming& renaming) const {
  return {expr.rename(renaming), rel};
}

// ---------------------------------------------------------------------------
// Atoms, clauses, programs

bool Atom::flat() const {
  VarSet seen;
  for (const auto& a : args) {
    auto v = a.as_variable();
    if (!v || !seen.insert(*v).second) return false;
  }
  return true;
}

std::vector<VarId> Atom::vars() const {
  std::vector<VarId> out;
  out.reserve(args.size());
  for (const auto& a : args) {
    auto v = a.as_variable();
    if (!v) {
      throw std::invalid_argument("atom " + print_atom(*this) +
                                  " is not in normal form");
    }
    out.push_back(*v);
  }
  return out;
}

VarSet Clause::variables() const {
  VarSet out;
  for (const auto& a : head.args) a.collect_vars(out);
  for (const auto& c : constraints) c.expr.collect_vars(out);
  for (const auto& b : body)
    for (const auto& a : b.args) a.collect_vars(out);
  return out;
}

bool Program::linear() const {
  return std::all_of(clauses.begin(), clauses.end(),
                     [](const Clause& c) { return c.body.size() <= 1; });
}

const Clause* Program::find(std::string_view id) const {
  for (const auto& c : clauses)
    if (c.id == id) return &c;
  return nullptr;
}

std::size_t max_body_atoms(const Program& p) {
  std::size_t m = 0;
  for (const auto& c : p.clauses) m = std::max(m, c.body.size());
  return m;
}

std::map<PredId, std::size_t> predicate_arities(const Program& p) {
  std::map<PredId, std::size_t> out;
  auto note = [&](const Atom& a) {
    auto [it, inserted] = out.emplace(a.pred, a.args.size());
    if (!inserted && it->second != a.args.size()) {
      throw std::invalid_argument("predicate " + pred_name(a.pred) +
                                  " used with inconsistent arity");
    }
  };
  for (const auto& c : p.clauses) {
    note(c.head);
    for (const auto& b : c.body) note(b);
  }
  return out;
}

std::vector<VarId> canonical_args(std::size_t n) {
  std::vector<VarId> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string name(1, static_cast<char>('A' + i % 26));
    if (i >= 26) name += std::to_string(i / 26);
    out.emplace_back(std::move(name));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser

ParseError::ParseError(const std::string& what, std::size_t line,
                       std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Var, Int, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_blank();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= text_.size()) {
        out.push_back(t);
        return out;
      }
      char ch = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_'))
          advance();
        t.text = std::string(text_.substr(start, pos_ - start));
        t.kind = std::islower(static_cast<unsigned char>(ch)) ? Tok::Ident
                                                               : Tok::Var;
      } else if (std::isdigit(static_cast<unsigned char>(ch))) {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
          advance();
        t.text = std::string(text_.substr(start, pos_ - start));
        t.kind = Tok::Int;
      } else {
        t.kind = Tok::Sym;
        t.text = symbol(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      char ch = text_[pos_];
      if (ch == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        advance();
      } else {
        return;
      }
    }
  }

  bool starts_with(std::string_view s) const {
    return text_.substr(pos_, s.size()) == s;
  }

  std::string symbol(const Token& t) {
    static const std::vector<std::string_view> known = {":-", "=<", ">="};
    static const std::vector<std::string_view> rejected = {
        "=:=", "=\\=", "\\=", "==", "<=", "=>", "->", "**", "//", "/", "\\",
        "^",   "!",    "|",   "&",  "#",  "$",  "@",  "~",  ";",  "?", ":"};
    for (auto s : known) {
      if (starts_with(s)) {
        for (std::size_t i = 0; i < s.size(); ++i) advance();
        return std::string(s);
      }
    }
    for (auto s : rejected) {
      if (starts_with(s)) {
        throw ParseError("unknown operator '" + std::string(s) + "'", t.line,
                         t.column);
      }
    }
    char ch = text_[pos_];
    if (std::string_view("=<>+-*(),.").find(ch) == std::string_view::npos) {
      throw ParseError(std::string("unexpected character '") + ch + "'",
                       t.line, t.column);
    }
    advance();
    return std::string(1, ch);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, const ParseOptions& opts)
      : toks_(std::move(toks)), opts_(opts) {}

  Program run() {
    Program prog;
    std::set<std::string> ids;
    while (peek().kind != Tok::End) {
      Clause c = clause();
      if (c.id.empty()) c.id = "c" + std::to_string(prog.clauses.size() + 1);
      if (!ids.insert(c.id).second) {
        throw ParseError("duplicate clause id '" + c.id + "'", clause_line_,
                         clause_col_);
      }
      prog.clauses.push_back(std::move(c));
    }
    return prog;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw ParseError(msg, at.line, at.column);
  }

  bool is_sym(const Token& t, std::string_view s) const {
    return t.kind == Tok::Sym && t.text == s;
  }

  void expect(std::string_view s) {
    Token t = next();
    if (!is_sym(t, s)) {
      fail("expected '" + std::string(s) + "' but found '" +
               (t.kind == Tok::End ? std::string("end of input") : t.text) +
               "'",
           t);
    }
  }

  Clause clause() {
    Clause c;
    clause_line_ = peek().line;
    clause_col_ = peek().column;
    // `label. head :- ...` on one line.
    if ((peek().kind == Tok::Ident || peek().kind == Tok::Int) &&
        is_sym(peek(1), ".") && peek(2).kind != Tok::End &&
        peek(2).line == peek(1).line) {
      c.id = next().text;
      next();
    }
    c.head = atom(true);
    if (is_sym(peek(), ":-")) {
      next();
      body(c);
    }
    expect(".");
    return c;
  }

  void body(Clause& c) {
    for (;;) {
      const Token& t = peek();
      if (t.kind == Tok::Ident && t.text == "true" && !is_sym(peek(1), "(")) {
        next();
      } else if (t.kind == Tok::Ident) {
        c.body.push_back(atom(false));
      } else {
        c.constraints.push_back(constraint());
      }
      if (!is_sym(peek(), ",")) return;
      next();
    }
  }

  PredId pred_from(const Token& t) { return parse_pred_name(t.text, opts_); }

  Atom atom(bool head) {
    Token t = next();
    if (t.kind != Tok::Ident) fail("expected a predicate name", t);
    if (t.text == "true") fail("'true' cannot be used as an atom", t);
    Atom a;
    a.pred = pred_from(t);
    if (a.pred.is_false() && !a.pred.annotated() && !head)
      fail("'false' cannot occur in a body", t);
    if (is_sym(peek(), "(")) {
      if (a.pred.is_false()) fail("'false' takes no arguments", t);
      next();
      for (;;) {
        a.args.push_back(expr());
        if (is_sym(peek(), ",")) {
          next();
          continue;
        }
        expect(")");
        break;
      }
    }
    return a;
  }

  AtomicConstraint constraint() {
    LinExpr lhs = expr();
    Token op = next();
    if (op.kind != Tok::Sym) fail("expected a comparison operator", op);
    LinExpr rhs = expr();
    if (op.text == "=") return AtomicConstraint::eq(std::move(lhs), rhs);
    if (op.text == ">=") return AtomicConstraint::ge(std::move(lhs), rhs);
    if (op.text == "=<") return AtomicConstraint::ge(rhs, lhs);
    if (op.text == ">") return AtomicConstraint::gt(std::move(lhs), rhs);
    if (op.text == "<") return AtomicConstraint::gt(rhs, lhs);
    fail("expected a comparison operator but found '" + op.text + "'", op);
  }

  LinExpr expr() {
    LinExpr e = term();
    for (;;) {
      if (is_sym(peek(), "+")) {
        next();
        e += term();
      } else if (is_sym(peek(), "-")) {
        next();
        e -= term();
      } else {
        return e;
      }
    }
  }

  LinExpr term() {
    if (is_sym(peek(), "-")) {
      next();
      return -term();
    }
    Token first = peek();
    LinExpr e = factor();
    while (is_sym(peek(), "*")) {
      Token star = next();
      LinExpr f = factor();
      if (!e.is_constant() && !f.is_constant()) {
        fail("non-linear term: product of variables", star);
      }
      if (e.is_constant()) {
        f *= e.constant();
        e = std::move(f);
      } else {
        e *= f.constant();
      }
    }
    (void)first;
    return e;
  }

  LinExpr factor() {
    Token t = next();
    switch (t.kind) {
      case Tok::Int:
        return LinExpr(Rational(t.text));
      case Tok::Var:
        if (t.text == "_") {
          return LinExpr::variable(VarId("_G" + std::to_string(++anon_)));
        }
        return LinExpr::variable(VarId(t.text));
      case Tok::Sym:
        if (t.text == "(") {
          LinExpr e = expr();
          expect(")");
          return e;
        }
        if (t.text == "-") return -factor();
        break;
      default:
        break;
    }
    fail("unexpected '" +
             (t.kind == Tok::End ? std::string("end of input") : t.text) +
             "' in arithmetic expression",
         t);
  }

  std::vector<Token> toks_;
  ParseOptions opts_;
  std::size_t pos_ = 0;
  std::size_t clause_line_ = 0;
  std::size_t clause_col_ = 0;
  unsigned anon_ = 0;
};

}  // namespace

PredId parse_pred_name(std::string_view name, const ParseOptions& opts) {
  if (opts.decode_annotations) {
    static const std::regex annotated("^(.+)_(e|le)([0-9]+)$");
    std::match_results<std::string_view::const_iterator> m;
    if (std::regex_match(name.begin(), name.end(), m, annotated)) {
      return PredId(m[1].str(),
                    m[2].str() == "e" ? Annotation::Exactly : Annotation::AtMost,
                    static_cast<unsigned>(std::stoul(m[3].str())));
    }
  }
  return PredId(std::string(name));
}

Program parse_program(std::string_view text, const ParseOptions& opts) {
  return Parser(Lexer(text).run(), opts).run();
}

// ---------------------------------------------------------------------------
// Normalisation

Clause normalize_clause(const Clause& c) {
  Clause out = c;
  VarSet used = c.variables();
  unsigned counter = 0;
  auto fresh = [&]() {
    for (;;) {
      VarId v("V" + std::to_string(++counter));
      if (used.insert(v).second) return v;
    }
  };
  std::vector<AtomicConstraint> extra;
  auto flatten = [&](Atom& a) {
    VarSet seen;
    for (auto& arg : a.args) {
      auto v = arg.as_variable();
      if (v && seen.insert(*v).second) continue;
      VarId nv = fresh();
      extra.push_back(AtomicConstraint::eq(LinExpr::variable(nv), arg));
      arg = LinExpr::variable(nv);
      seen.insert(nv);
    }
  };
  flatten(out.head);
  for (auto& b : out.body) flatten(b);
  extra.insert(extra.end(), out.constraints.begin(), out.constraints.end());
  out.constraints = std::move(extra);
  return out;
}

Program normalize_program(const Program& p) {
  Program out;
  out.query = p.query;
  out.clauses.reserve(p.clauses.size());
  for (const auto& c : p.clauses) out.clauses.push_back(normalize_clause(c));
  return out;
}

// ---------------------------------------------------------------------------
// Printing

std::string pred_name(const PredId& p, NameStyle style) {
  switch (p.annotation) {
    case Annotation::None:
      return p.base;
    case Annotation::Exactly:
      return style == NameStyle::Bracket
                 ? p.base + "(" + std::to_string(p.dim) + ")"
                 : p.base + "_e" + std::to_string(p.dim);
    case Annotation::AtMost:
      return style == NameStyle::Bracket
                 ? p.base + "[" + std::to_string(p.dim) + "]"
                 : p.base + "_le" + std::to_string(p.dim);
  }
  return p.base;
}

namespace {

void print_terms(std::ostringstream& os, const LinExpr& e) {
  bool first = true;
  for (const auto& [v, c] : e.terms()) {
    if (c < 0) {
      os << "-";
    } else if (!first) {
      os << "+";
    }
    Rational a = abs(c);
    if (a != 1) os << to_string(a) << "*";
    os << v.name;
    first = false;
  }
}

}  // namespace

std::string print_expr(const LinExpr& e) {
  std::ostringstream os;
  print_terms(os, e);
  if (e.is_constant()) {
    os << to_string(e.constant());
  } else if (e.constant() > 0) {
    os << "+" << to_string(e.constant());
  } else if (e.constant() < 0) {
    os << "-" << to_string(abs(e.constant()));
  }
  return os.str();
}

std::string print_constraint(const AtomicConstraint& c) {
  std::ostringstream os;
  const char* op = c.rel == Relation::Eq   ? "="
                   : c.rel == Relation::Ge ? ">="
                                           : ">";
  if (c.expr.is_constant()) {
    os << to_string(c.expr.constant()) << op << "0";
    return os.str();
  }
  print_terms(os, c.expr);
  os << op << to_string(-c.expr.constant());
  return os.str();
}

std::string print_atom(const Atom& a, NameStyle style) {
  std::string s = pred_name(a.pred, style);
  if (a.args.empty()) return s;
  s += "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) s += ",";
    s += print_expr(a.args[i]);
  }
  return s + ")";
}

std::string print_clause(const Clause& c, const PrintOptions& opts) {
  std::string s;
  if (opts.labels) s += c.id + ". ";
  s += print_atom(c.head, opts.names);
  std::vector<std::string> items;
  for (const auto& k : c.constraints) items.push_back(print_constraint(k));
  for (const auto& b : c.body) items.push_back(print_atom(b, opts.names));
  if (!items.empty()) {
    s += " :- ";
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) s += ", ";
      s += items[i];
    }
  }
  return s + ".";
}

std::string print_program(const Program& p, const PrintOptions& opts) {
  std::string s;
  for (const auto& c : p.clauses) {
    s += print_clause(c, opts);
    s += "\n";
  }
  return s;
}

namespace {

std::string canonical_with_body(const Clause& c, const std::vector<Atom>& body) {
  Renaming r;
  std::size_t n = 0;
  auto visit = [&](const LinExpr& e) {
    for (const auto& [v, k] : e.terms()) {
      if (!r.count(v)) r.emplace(v, VarId("_" + std::to_string(n++)));
    }
  };
  for (const auto& a : c.head.args) visit(a);
  for (const auto& b : body)
    for (const auto& a : b.args) visit(a);
  for (const auto& k : c.constraints) visit(k.expr);
  std::vector<std::string> cs;
  for (const auto& k : c.constraints) {
    AtomicConstraint nk = k.rename(r).normalized();
    if (nk.constant_truth() == true) continue;
    cs.push_back(print_constraint(nk));
  }
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  Atom head = c.head;
  for (auto& a : head.args) a = a.rename(r);
  std::string s = print_atom(head) + " :- ";
  for (const auto& k : cs) s += k + ", ";
  for (Atom b : body) {
    for (auto& a : b.args) a = a.rename(r);
    s += print_atom(b) + ", ";
  }
  return s;
}

}  // namespace

std::string canonical_clause(const Clause& c) {
  std::vector<std::size_t> order(c.body.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::string best;
  bool first = true;
  do {
    std::vector<Atom> body;
    for (auto i : order) body.push_back(c.body[i]);
    std::string s = canonical_with_body(c, body);
    if (first || s < best) best = std::move(s);
    first = false;
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

bool alpha_equivalent(const Program& a, const Program& b) {
  auto canon = [](const Program& p) {
    std::vector<std::string> out;
    for (const auto& c : p.clauses) out.push_back(canonical_clause(c));
    std::sort(out.begin(), out.end());
    return out;
  };
  return canon(a) == canon(b);
}

}  // namespace dimlin
