#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "doxa/formula.hpp"

namespace doxa {

// The ten belief-change operator kinds. The first three are the core trio
// every other kind expands into.
enum class OpKind { Lex, Refi, Sev, Nat, Res, Rad, Sevr, Msev, Psev, Full };

const char* to_keyword(OpKind kind);
std::optional<OpKind> op_kind_from_keyword(std::string_view keyword);

// One operator application: a kind plus its (consistent) argument formula.
struct ChangeOp {
  OpKind kind;
  Formula formula;
};

// An ordered list of operator applications, applied left to right to the
// empty preorder over the given alphabet.
struct ChangeSequence {
  Alphabet alphabet;
  std::vector<ChangeOp> ops;
};

// Plausibility order over all interpretations: an ordered partition
// [C(0),…,C(m)] with class 0 the most plausible. Classes may be empty.
// Values are immutable; every operation returns a fresh preorder.
class TotalPreorder {
 public:
  // Validates that the classes are pairwise disjoint and exhaustive.
  TotalPreorder(Alphabet alphabet, std::vector<ModelSet> classes);

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<ModelSet>& classes() const { return classes_; }
  std::size_t size() const { return classes_.size(); }
  const ModelSet& class_at(std::size_t i) const { return classes_.at(i); }

 private:
  Alphabet alphabet_;
  std::vector<ModelSet> classes_;
};

// [Mod(T)]: the single class holding every interpretation.
TotalPreorder empty_preorder(const Alphabet& alphabet, std::size_t var_cap = kDefaultVarCap);

// Models of P in the lowest class that intersects Mod(P); empty when P has
// no models (no error: the empty result is the signal).
ModelSet min_models(const TotalPreorder& c, const Formula& p);

// min_models(c, T): the first non-empty class (empty only for an empty universe).
ModelSet base_models(const TotalPreorder& c);

// Same ordering without empty classes.
TotalPreorder normalize(const TotalPreorder& c);

// True iff the normalized class lists coincide — which decides "same
// min_models for every formula". Throws DomainError on alphabet mismatch.
bool equivalent_preorders(const TotalPreorder& a, const TotalPreorder& b);

// One operator application, following the defining class sequence of the
// kind exactly; empty classes in the result are kept. Throws DomainError
// when op.formula is inconsistent (the defining class indices need a model).
TotalPreorder apply(const TotalPreorder& c, const ChangeOp& op);

// Left fold of apply over the empty preorder. When `trace` is given it
// receives the preorder after every step (not including the start).
TotalPreorder run_sequence_oracle(const ChangeSequence& seq,
                                  std::size_t var_cap = kDefaultVarCap,
                                  std::vector<TotalPreorder>* trace = nullptr);

// True iff applying `kind` with formula P to C keeps C(0)∩Mod(P) as class 0
// and makes C(0)∖Mod(P) class 1. Requires C(0)∩Mod(P) nonempty (DomainError).
bool is_bottom_refining_instance(const TotalPreorder& c, const Formula& p, OpKind kind);

}  // namespace doxa
