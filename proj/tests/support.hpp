#pragma once

// Shared helpers for the test binaries: deterministic random generators for
// formulas, operator sequences, and model sets.

#include <random>
#include <string>
#include <vector>

#include "doxa/formula.hpp"
#include "doxa/preorder.hpp"
#include "doxa/sat.hpp"

namespace doxa::testing {

inline Alphabet xyz() { return Alphabet({"x", "y", "z"}); }

inline Formula random_formula(std::mt19937& rng, const Alphabet& a, int depth) {
  std::uniform_int_distribution<int> leaf(0, 9);
  if (depth <= 0 || a.size() == 0) {
    int pick = leaf(rng);
    if (a.size() == 0 || pick == 8) return Formula::verum();
    if (pick == 9) return Formula::falsum();
    std::uniform_int_distribution<std::size_t> v(0, a.size() - 1);
    return Formula::var(a.name(v(rng)));
  }
  std::uniform_int_distribution<int> pick(0, 6);
  switch (pick(rng)) {
    case 0: return Formula::negate(random_formula(rng, a, depth - 1));
    case 1: return Formula::conj(random_formula(rng, a, depth - 1),
                                 random_formula(rng, a, depth - 1));
    case 2: return Formula::disj(random_formula(rng, a, depth - 1),
                                 random_formula(rng, a, depth - 1));
    case 3: return Formula::implies(random_formula(rng, a, depth - 1),
                                    random_formula(rng, a, depth - 1));
    case 4: return Formula::iff(random_formula(rng, a, depth - 1),
                                random_formula(rng, a, depth - 1));
    default: return random_formula(rng, a, 0);  // extra leaves keep trees small
  }
}

inline Formula random_consistent_formula(std::mt19937& rng, const Alphabet& a, int depth,
                                         SatBackend& sat) {
  for (;;) {
    Formula f = random_formula(rng, a, depth);
    if (sat.is_consistent(f)) return f;
  }
}

// A random preorder built the way the reduction suites need one: by applying
// a few random consistent lex steps to the empty preorder.
inline TotalPreorder random_lex_preorder(std::mt19937& rng, const Alphabet& a, int steps,
                                         SatBackend& sat) {
  TotalPreorder c = empty_preorder(a);
  for (int i = 0; i < steps; ++i) {
    Formula p = random_consistent_formula(rng, a, 2, sat);
    c = apply(c, ChangeOp{OpKind::Lex, p});
  }
  return c;
}

inline OpKind random_kind(std::mt19937& rng) {
  static const OpKind kinds[] = {OpKind::Lex,  OpKind::Refi, OpKind::Sev, OpKind::Nat,
                                 OpKind::Res,  OpKind::Rad,  OpKind::Sevr, OpKind::Msev,
                                 OpKind::Psev, OpKind::Full};
  std::uniform_int_distribution<int> pick(0, 9);
  return kinds[pick(rng)];
}

inline ChangeSequence random_sequence(std::mt19937& rng, const Alphabet& a, int max_len,
                                      SatBackend& sat) {
  std::uniform_int_distribution<int> len(0, max_len);
  ChangeSequence seq{a, {}};
  int n = len(rng);
  for (int i = 0; i < n; ++i)
    seq.ops.push_back({random_kind(rng), random_consistent_formula(rng, a, 2, sat)});
  return seq;
}

// Random operator list drawn from the given kinds only (lex/refi/sev mixes
// for the symbolic engine suites).
inline std::vector<ChangeOp> random_ops(std::mt19937& rng, const Alphabet& a, int max_len,
                                        SatBackend& sat, const std::vector<OpKind>& kinds) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, kinds.size() - 1);
  std::vector<ChangeOp> ops;
  int n = len(rng);
  for (int i = 0; i < n; ++i)
    ops.push_back({kinds[pick(rng)], random_consistent_formula(rng, a, 2, sat)});
  return ops;
}

}  // namespace doxa::testing
