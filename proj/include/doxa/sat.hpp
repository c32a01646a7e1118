#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "doxa/formula.hpp"

namespace doxa {

// Equisatisfiable CNF for a formula: `text` is the standard "p cnf V C"
// document (clauses 0-terminated, one per line); `variable_map` relates the
// formula's variables to their CNF indices. Only variables that occur in the
// formula are numbered; auxiliary definition variables follow them.
struct DimacsDocument {
  std::string text;
  std::vector<std::pair<std::string, int>> variable_map;
};

DimacsDocument export_dimacs(const Formula& f);

// Satisfiability decisions with per-instance call counting. The builtin
// procedure is a complete search (unit propagation + branching) over the
// auxiliary-variable CNF; an external command can be substituted, invoked as
// `command <cnf-file>` (or with "{}" in the command replaced by the file
// path) and expected to print an "s SATISFIABLE" / "s UNSATISFIABLE" line.
//
// An instance is meant to serve one query pipeline; concurrent pipelines
// should each construct their own (counts are per-instance).
class SatBackend {
 public:
  SatBackend() = default;
  explicit SatBackend(std::string solver_command) : command_(std::move(solver_command)) {}

  // True iff f has at least one model. Counts one decision query.
  // Throws SolverError when an external solver fails (distinct from UNSAT).
  bool is_consistent(const Formula& f);

  // True iff every model of f satisfies g (one decision query, on f & !g).
  bool entails(const Formula& f, const Formula& g);

  // True iff f and g have the same models (two decision queries).
  bool equivalent(const Formula& f, const Formula& g);

  std::uint64_t call_count() const { return calls_; }
  bool is_external() const { return !command_.empty(); }

 private:
  std::string command_;
  std::uint64_t calls_ = 0;
};

}  // namespace doxa
