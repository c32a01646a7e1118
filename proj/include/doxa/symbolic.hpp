#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "doxa/preorder.hpp"
#include "doxa/sat.hpp"

namespace doxa {

// A sequence restricted to the core trio {lex, refi, sev}. The symbolic
// query engine answers min/base/entailment questions on these directly,
// with polynomially many satisfiability calls and no explicit preorder.
struct CoreSequence {
  Alphabet alphabet;
  std::vector<ChangeOp> ops;
};

bool is_core_kind(OpKind kind);

// Map from the position of each sev op in a CoreSequence to its computed
// underformula B — the formula whose models are the union of the classes up
// to and including the first one compatible with the sev's argument, taken
// in the ordering that precedes the sev. Populated strictly left to right;
// each B embeds at most one earlier B (sizes stay polynomial).
using UnderformulaCache = std::map<std::size_t, Formula>;

// Record of one engine run: what was asked, what was traversed, what it cost.
struct QueryTrace {
  std::vector<Formula> step_bases;            // base after each input step
  std::map<std::size_t, Formula> underformulae;  // per sev position
  std::vector<std::string> path;              // traversal events, in order
  std::uint64_t sat_calls = 0;                // grows at most quadratically
};

// Greedy consistent conjunction of P with the given formulas (newest first):
// each formula is conjoined when the result stays consistent, skipped
// otherwise. Characterizes the minimal models of P after a lex-only history.
Formula maxset(SatBackend& sat, const Formula& p, const std::vector<Formula>& newest_first);

// The conjoin-or-disjoin variant: formulas that keep the goal consistent are
// conjoined (strengthening the goal), the others are disjoined around the
// rest. Base case is the constant true.
Formula under(SatBackend& sat, const Formula& s, const std::vector<Formula>& newest_first);

// L_1 ∧ … ∧ L_i for the longest prefix (in the order given) that stays
// consistent. The empty list gives the constant true.
Formula longest(SatBackend& sat, const std::vector<Formula>& ls);

// Minimal models of P after a lex/refi-only core: conjoin backward over the
// lex formulas, then forward over the refi formulas, skipping whatever would
// contradict. The result's models are exactly min(C, P).
Formula back_and_forth(SatBackend& sat, const CoreSequence& core, const Formula& p,
                       QueryTrace* trace = nullptr);

// Underformula of a hypothetical sev(S) sitting at position `pos`, computed
// over core positions [0, pos): walk backward (lex formulas participate
// conjoin-or-disjoin; an earlier sev's underformula is conjoined and bounces
// the walk forward when compatible, and is ignored entirely otherwise), then
// forward over the refinement formulas from the bounce point on.
Formula underformula_at(SatBackend& sat, const CoreSequence& core,
                        const UnderformulaCache& cache, std::size_t pos, const Formula& s,
                        QueryTrace* trace = nullptr);

// Underformulae for every sev in the core, left to right.
UnderformulaCache compute_underformulae(SatBackend& sat, const CoreSequence& core,
                                        QueryTrace* trace = nullptr);

// Minimal models of P after an arbitrary core: walk backward from the end
// (lex conjoins when consistent; a sev whose cached underformula is
// compatible conjoins it and bounces the walk forward), then forward over
// refinements. A sentinel sev with underformula T guards the sequence start,
// so the walk always bounces. Models of the result are min(C, P) for the
// ordering C the core denotes.
Formula back_bounce_forth(SatBackend& sat, const CoreSequence& core, const Formula& p,
                          const UnderformulaCache& cache, QueryTrace* trace = nullptr);

}  // namespace doxa
