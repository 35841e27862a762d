// Copyright 2026 The dimlin Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Exit codes: 0 safe, 1 unsafe (or a failing model
// check), 2 unknown, 3 usage, input or internal error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dimlin/dimlin.h"

namespace {

constexpr int kExitError = 3;

struct ProgramDeleter {
  void operator()(dimlin_program* p) const { dimlin_program_free(p); }
};
struct ResultDeleter {
  void operator()(dimlin_result* r) const { dimlin_result_free(r); }
};
using ProgramPtr = std::unique_ptr<dimlin_program, ProgramDeleter>;
using ResultPtr = std::unique_ptr<dimlin_result, ResultDeleter>;

// Takes ownership of a string returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  dimlin_string_free(s);
  return out;
}

int report(dimlin_status s) {
  std::cerr << "error: " << dimlin_last_error() << "\n";
  return s == DIMLIN_OK ? 0 : kExitError;
}

ProgramPtr load(const std::string& path, bool annotated, int& rc) {
  dimlin_program* p = nullptr;
  dimlin_status s = dimlin_program_load(path.c_str(), annotated ? 1 : 0, &p);
  if (s != DIMLIN_OK) {
    rc = report(s);
    return nullptr;
  }
  return ProgramPtr(p);
}

const char* verdict_name(dimlin_verdict v) {
  switch (v) {
    case DIMLIN_SAFE: return "safe";
    case DIMLIN_UNSAFE: return "unsafe";
    case DIMLIN_UNKNOWN: return "unknown";
  }
  return "unknown";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dimlin: CHC solving by dimension-bounded linearisation"};
  app.require_subcommand(1);

  std::string file;
  bool annotated = false;
  unsigned k = 0;
  bool relaxed = false;
  bool bracket_names = false;
  std::string strategy = "permute";
  const std::map<std::string, dimlin_strategy> strategies{
      {"permute", DIMLIN_STRATEGY_PERMUTE}, {"dim-ordered", DIMLIN_STRATEGY_DIM_ORDERED}};

  dimlin_solve_options opts;
  dimlin_solve_options_init(&opts);
  std::string reuse = "on";
  std::string format = "human";
  bool verbose = false;

  auto* solve = app.add_subcommand("solve", "Run the refinement loop on a program");
  solve->add_option("FILE", file, "Clause file")->required();
  solve->add_option("--max-k", opts.max_k, "Largest dimension tried")->capture_default_str();
  solve->add_option("--strategy", strategy, "Body ordering: permute or dim-ordered")
      ->check(CLI::IsMember({"permute", "dim-ordered"}));
  solve->add_option("--reuse", reuse, "Reuse lower-dimension solutions: on or off")
      ->check(CLI::IsMember({"on", "off"}));
  solve->add_option("--widen-delay", opts.widen_delay, "Joins before widening")
      ->capture_default_str();
  solve->add_option("--narrow-steps", opts.narrow_steps, "Descending iterations")
      ->capture_default_str();
  solve->add_option("--depth-bound", opts.depth_bound, "Counterexample path bound")
      ->capture_default_str();
  solve->add_option("--timeout", opts.timeout_seconds, "Seconds")->capture_default_str();
  solve->add_option("--format", format, "human or machine")
      ->check(CLI::IsMember({"human", "machine"}));
  solve->add_flag("--relaxed-guard", relaxed, "Drop the d>=2 guard for bodies of three or more atoms");
  solve->add_flag("-v,--verbose", verbose, "Print the iteration history");

  auto* kdim = app.add_subcommand("kdim", "Print the at-most-k-dimension program");
  kdim->add_option("FILE", file, "Clause file")->required();
  kdim->add_option("-k", k, "Dimension bound")->required();
  kdim->add_flag("--bracket-names", bracket_names, "Print fib(0)/fib[0] instead of fib_e0/fib_le0");
  kdim->add_flag("--relaxed-guard", relaxed, "Drop the d>=2 guard for bodies of three or more atoms");

  auto* lin = app.add_subcommand("linearise", "Print the linearised program and state table");
  lin->add_option("FILE", file, "Clause file")->required();
  lin->add_option("-k", k, "Dimension bound")->required();
  lin->add_option("--strategy", strategy, "Body ordering: permute or dim-ordered")
      ->check(CLI::IsMember({"permute", "dim-ordered"}));
  lin->add_flag("--relaxed-guard", relaxed, "Drop the d>=2 guard for bodies of three or more atoms");

  std::string model_file;
  auto* check = app.add_subcommand("check-model", "Check an interpretation against a program");
  check->add_option("FILE", file, "Clause file")->required();
  check->add_option("MODELFILE", model_file, "Constrained facts, one per predicate disjunct")
      ->required();
  check->add_flag("--annotated", annotated, "Read p_e0/p_le0 as annotated predicates");

  std::string target = "false";
  unsigned depth = 6;
  std::size_t max_nodes = 50000;
  auto* oracle = app.add_subcommand("oracle", "Enumerate feasible trace trees");
  oracle->add_option("FILE", file, "Clause file")->required();
  oracle->add_option("--target", target, "Predicate name")->capture_default_str();
  oracle->add_option("--depth", depth, "Maximum tree height")->capture_default_str();
  oracle->add_option("--max-nodes", max_nodes, "Node budget")->capture_default_str();
  oracle->add_flag("--annotated", annotated, "Read p_e0/p_le0 as annotated predicates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return e.get_exit_code() == 0 ? rc : kExitError;
  }

  int rc = 0;
  ProgramPtr prog = load(file, annotated, rc);
  if (!prog) return rc;

  if (solve->parsed()) {
    opts.strategy = strategies.at(strategy);
    opts.reuse = reuse == "on" ? 1 : 0;
    opts.relaxed_guard = relaxed ? 1 : 0;
    auto t0 = std::chrono::steady_clock::now();
    dimlin_result* raw = nullptr;
    dimlin_status s = dimlin_solve(prog.get(), &opts, &raw);
    if (s != DIMLIN_OK) return report(s);
    ResultPtr res(raw);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    dimlin_verdict v = dimlin_result_verdict(res.get());
    unsigned rk = dimlin_result_k(res.get());
    if (format == "machine") {
      std::cout << "verdict=" << verdict_name(v) << " k=" << rk << " time_ms=" << ms << "\n";
      if (v == DIMLIN_SAFE) std::cout << dimlin_result_model(res.get());
      if (v == DIMLIN_UNSAFE) std::cout << dimlin_result_witness(res.get()) << "\n";
      if (v == DIMLIN_UNKNOWN) std::cout << "reason=" << dimlin_result_reason(res.get()) << "\n";
    } else {
      std::cout << verdict_name(v) << " at k=" << rk << " (" << ms << " ms)\n";
      if (v == DIMLIN_SAFE) std::cout << "model:\n" << dimlin_result_model(res.get());
      if (v == DIMLIN_UNSAFE) std::cout << "witness: " << dimlin_result_witness(res.get()) << "\n";
      if (v == DIMLIN_UNKNOWN) std::cout << "reason: " << dimlin_result_reason(res.get()) << "\n";
      if (verbose) std::cout << "history:\n" << dimlin_result_history(res.get());
    }
    return static_cast<int>(v);
  }

  if (kdim->parsed()) {
    char* out = nullptr;
    dimlin_status s = dimlin_kdim(prog.get(), k, relaxed ? 1 : 0, bracket_names ? 1 : 0, &out);
    if (s != DIMLIN_OK) return report(s);
    std::cout << take(out);
    return 0;
  }

  if (lin->parsed()) {
    char* program = nullptr;
    char* table = nullptr;
    dimlin_status s = dimlin_linearise(prog.get(), k, strategies.at(strategy),
                                       relaxed ? 1 : 0, &program, &table);
    if (s != DIMLIN_OK) return report(s);
    std::cout << take(program) << "\n% states\n";
    std::istringstream lines(take(table));
    for (std::string line; std::getline(lines, line);) std::cout << "% " << line << "\n";
    return 0;
  }

  if (check->parsed()) {
    std::ifstream in(model_file);
    if (!in) {
      std::cerr << "error: cannot open " << model_file << "\n";
      return kExitError;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    // A machine-format solve output starts with the verdict line.
    std::string text = ss.str();
    if (text.rfind("verdict=", 0) == 0) text = text.substr(text.find('\n') + 1);
    int holds = 0;
    dimlin_status s = dimlin_check_model(prog.get(), text.c_str(), annotated ? 1 : 0, &holds);
    if (s != DIMLIN_OK) return report(s);
    std::cout << (holds ? "model holds" : "model fails") << "\n";
    return holds ? 0 : 1;
  }

  if (oracle->parsed()) {
    char* traces = nullptr;
    int complete = 0;
    dimlin_status s = dimlin_oracle(prog.get(), target.c_str(), annotated ? 1 : 0, depth,
                                    max_nodes, &traces, &complete);
    if (s != DIMLIN_OK) return report(s);
    std::cout << take(traces) << "complete=" << (complete ? "yes" : "no") << "\n";
    return 0;
  }
  return kExitError;
}
