#include "doxa/reduce.hpp"

#include <string>

namespace doxa {

namespace {

void note(QueryTrace* trace, std::string line) {
  if (trace != nullptr) trace->path.push_back(std::move(line));
}

// Appends one core op; a sev is decorated with its underformula first, so
// later queries can bounce on it.
void emit(SatBackend& sat, CoreSequence& core, UnderformulaCache& cache, OpKind kind,
          const Formula& f) {
  if (kind == OpKind::Sev) {
    Formula b = underformula_at(sat, core, cache, core.ops.size(), f);
    cache.emplace(core.ops.size(), b);
  }
  core.ops.push_back({kind, f});
}

}  // namespace

std::pair<std::size_t, std::size_t> expand_into(SatBackend& sat, CoreSequence& core,
                                                UnderformulaCache& cache, const ChangeOp& op) {
  if (!sat.is_consistent(op.formula))
    throw DomainError("inconsistent formula for operator " + std::string(to_keyword(op.kind)));
  std::size_t begin = core.ops.size();
  const Formula& p = op.formula;
  switch (op.kind) {
    case OpKind::Lex:
    case OpKind::Refi:
    case OpKind::Sev:
      emit(sat, core, cache, op.kind, p);
      break;
    case OpKind::Nat: {
      // Move the minimal models of P to the bottom, leave the rest as is.
      Formula k = back_bounce_forth(sat, core, p, cache);
      emit(sat, core, cache, OpKind::Lex, k);
      break;
    }
    case OpKind::Res: {
      // Refine by P everywhere, then promote the minimal models of P.
      emit(sat, core, cache, OpKind::Refi, p);
      Formula k = back_bounce_forth(sat, core, p, cache);
      emit(sat, core, cache, OpKind::Lex, k);
      break;
    }
    case OpKind::Rad: {
      // Push all of ¬P above all of P, then order the P side by plausibility.
      Formula np = Formula::negate(p);
      if (sat.is_consistent(np)) emit(sat, core, cache, OpKind::Lex, np);
      emit(sat, core, cache, OpKind::Sev, p);
      emit(sat, core, cache, OpKind::Lex, p);
      break;
    }
    case OpKind::Sevr: {
      // Merge everything up to the first class compatible with P, then
      // promote the minimal models of P out of the merged class.
      emit(sat, core, cache, OpKind::Sev, p);
      Formula k = back_bounce_forth(sat, core, p, cache);
      emit(sat, core, cache, OpKind::Lex, k);
      break;
    }
    case OpKind::Msev: {
      emit(sat, core, cache, OpKind::Sev, p);
      emit(sat, core, cache, OpKind::Lex, p);
      break;
    }
    case OpKind::Psev: {
      // Merge everything up to the class after the one holding the minimal
      // models of P, then promote those models. The merge is expressed as a
      // sev on the complement of the union of classes up to the P class —
      // the underformula a sev(P) would have here.
      Formula k = back_bounce_forth(sat, core, p, cache);
      Formula kprime = underformula_at(sat, core, cache, core.ops.size(), p);
      Formula nkprime = Formula::negate(kprime);
      if (sat.is_consistent(nkprime)) {
        emit(sat, core, cache, OpKind::Sev, nkprime);
        emit(sat, core, cache, OpKind::Lex, k);
      } else {
        // No class above the P class is occupied: collapse to two classes.
        Formula nk = Formula::negate(k);
        if (sat.is_consistent(nk)) emit(sat, core, cache, OpKind::Lex, nk);
        emit(sat, core, cache, OpKind::Sev, k);
        emit(sat, core, cache, OpKind::Lex, k);
      }
      break;
    }
    case OpKind::Full: {
      // Two classes: the minimal models of P, then everything else.
      Formula k = back_bounce_forth(sat, core, p, cache);
      Formula nk = Formula::negate(k);
      if (sat.is_consistent(nk)) emit(sat, core, cache, OpKind::Lex, nk);
      emit(sat, core, cache, OpKind::Sev, k);
      emit(sat, core, cache, OpKind::Lex, k);
      break;
    }
  }
  return {begin, core.ops.size()};
}

std::vector<ChangeOp> expand_op(SatBackend& sat, const CoreSequence& prefix,
                                const UnderformulaCache& prefix_cache, const ChangeOp& op) {
  CoreSequence core = prefix;
  UnderformulaCache cache = prefix_cache;
  auto [begin, end] = expand_into(sat, core, cache, op);
  return std::vector<ChangeOp>(core.ops.begin() + static_cast<long>(begin),
                               core.ops.begin() + static_cast<long>(end));
}

Expansion expand_sequence(SatBackend& sat, const ChangeSequence& seq) {
  Expansion out{CoreSequence{seq.alphabet, {}}, {}, {}};
  for (const auto& op : seq.ops)
    out.spans.push_back(expand_into(sat, out.core, out.cache, op));
  return out;
}

Formula base_after(SatBackend& sat, const ChangeSequence& seq, QueryTrace* trace) {
  std::uint64_t before = sat.call_count();
  if (trace == nullptr) {
    Expansion x = expand_sequence(sat, seq);
    return back_bounce_forth(sat, x.core, Formula::verum(), x.cache);
  }
  CoreSequence core{seq.alphabet, {}};
  UnderformulaCache cache;
  for (std::size_t i = 0; i < seq.ops.size(); ++i) {
    auto [b, e] = expand_into(sat, core, cache, seq.ops[i]);
    note(trace, "step " + std::to_string(i + 1) + ": " +
                    std::string(to_keyword(seq.ops[i].kind)) + "(" +
                    to_string(seq.ops[i].formula) + ") -> core positions [" +
                    std::to_string(b) + ", " + std::to_string(e) + ")");
    trace->step_bases.push_back(back_bounce_forth(sat, core, Formula::verum(), cache));
  }
  Formula base = back_bounce_forth(sat, core, Formula::verum(), cache);
  trace->underformulae.insert(cache.begin(), cache.end());
  trace->sat_calls += sat.call_count() - before;
  return base;
}

bool entails_after(SatBackend& sat, const ChangeSequence& seq, const Formula& q,
                   QueryTrace* trace) {
  Formula base = base_after(sat, seq, trace);
  std::uint64_t before = sat.call_count();
  bool holds = sat.entails(base, q);
  if (trace != nullptr) trace->sat_calls += sat.call_count() - before;
  return holds;
}

}  // namespace doxa
