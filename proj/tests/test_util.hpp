// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

// Shared helpers for the test binaries: corpus access and a random program
// generator.

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dimlin/chc_ast.hpp"
#include "dimlin/dimension.hpp"

namespace dimlin::testing {

inline std::string slurp(const std::string& rel) {
  std::ifstream in(std::string(DIMLIN_SOURCE_DIR) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Program load(const std::string& rel) {
  return normalize_program(parse_program(slurp(rel)));
}

/// Corpus file names (relative to the source tree), sorted.
inline std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& e :
       std::filesystem::directory_iterator(std::string(DIMLIN_SOURCE_DIR) + "/corpus")) {
    if (e.path().extension() == ".chc") out.push_back("corpus/" + e.path().filename().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline Polyhedron poly(const std::string& text, std::size_t arity) {
  std::string args;
  std::vector<VarId> canon = canonical_args(arity);
  for (std::size_t i = 0; i < arity; ++i) args += (i ? "," : "") + canon[i].name;
  Interpretation m = parse_interpretation("p(" + args + ") :- " + text + ".");
  return m.at(PredId("p")).at(0);
}

/// Random clause system: at most `max_clauses` clauses over predicates p
/// and q of arity one, integer coefficients in [-3, 3], bodies of up to two
/// atoms and one query clause.
inline Program random_program(std::mt19937& rng, std::size_t max_clauses = 5) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<int> pick(0, 99);
  const char* preds[] = {"p", "q"};
  auto term = [&](const std::vector<std::string>& vars) {
    std::string e;
    for (const auto& v : vars) {
      int c = coeff(rng);
      if (c == 0) continue;
      e += (e.empty() ? "" : " + ") + std::to_string(c) + "*" + v;
    }
    int k = coeff(rng);
    e += (e.empty() ? "" : " + ") + std::to_string(k);
    return e;
  };
  auto constraint = [&](const std::vector<std::string>& vars) {
    static const char* rels[] = {">=", ">", "=", "=<", "<"};
    return term(vars) + " " + rels[pick(rng) % 5] + " 0";
  };

  std::size_t n = 2 + static_cast<std::size_t>(pick(rng)) % (max_clauses - 1);
  std::string text;
  // Facts first so that something is derivable most of the time.
  text += std::string(preds[pick(rng) % 2]) + "(X) :- " + constraint({"X"}) + ".\n";
  for (std::size_t i = 1; i + 1 < n; ++i) {
    std::string head = preds[pick(rng) % 2];
    int shape = pick(rng) % 3;
    if (shape == 0) {
      text += head + "(X) :- " + constraint({"X"}) + ".\n";
    } else if (shape == 1) {
      text += head + "(X) :- " + preds[pick(rng) % 2] + "(Y), " + constraint({"X", "Y"}) +
              ", " + constraint({"X", "Y"}) + ".\n";
    } else {
      text += head + "(X) :- " + preds[pick(rng) % 2] + "(Y), " + preds[pick(rng) % 2] +
              "(Z), " + constraint({"X", "Y", "Z"}) + ", " + constraint({"X", "Y", "Z"}) +
              ".\n";
    }
  }
  text += std::string("false :- ") + preds[pick(rng) % 2] + "(X), " + constraint({"X"}) + ".\n";
  return normalize_program(parse_program(text));
}

}  // namespace dimlin::testing
