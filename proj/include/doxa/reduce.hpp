#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "doxa/symbolic.hpp"

namespace doxa {

// A mixed sequence rewritten into the core trio, together with the
// underformula of every sev and, per input op, the half-open span of core
// positions it produced.
struct Expansion {
  CoreSequence core;
  UnderformulaCache cache;
  std::vector<std::pair<std::size_t, std::size_t>> spans;
};

// Appends the core expansion of `op` to `core`, computing and caching the
// underformula of every sev it emits (including those of auxiliary formulas
// K/K', which are obtained symbolically over the prefix built so far).
// Returns the span [begin, end) of the appended positions.
std::pair<std::size_t, std::size_t> expand_into(SatBackend& sat, CoreSequence& core,
                                                UnderformulaCache& cache, const ChangeOp& op);

// The core ops `op` expands to after `prefix`. Convenience wrapper over
// expand_into that leaves `prefix` untouched.
std::vector<ChangeOp> expand_op(SatBackend& sat, const CoreSequence& prefix,
                                const UnderformulaCache& prefix_cache, const ChangeOp& op);

// Left-to-right fold of expand_into over the whole sequence. Expanding a
// later op never changes the expansion of an earlier one.
Expansion expand_sequence(SatBackend& sat, const ChangeSequence& seq);

// The agent's beliefs after the whole sequence, as a formula: expand, then
// query the minimal models of T. With `trace`, also computes the base after
// every input step and records underformulae, traversal events, and the
// total number of satisfiability calls.
Formula base_after(SatBackend& sat, const ChangeSequence& seq, QueryTrace* trace = nullptr);

// True iff the base after the sequence entails q.
bool entails_after(SatBackend& sat, const ChangeSequence& seq, const Formula& q,
                   QueryTrace* trace = nullptr);

}  // namespace doxa
