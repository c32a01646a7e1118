#include "doxa/symbolic.hpp"

#include <utility>

namespace doxa {

namespace {

void note(QueryTrace* trace, std::string line) {
  if (trace != nullptr) trace->path.push_back(std::move(line));
}

void charge(QueryTrace* trace, std::uint64_t calls) {
  if (trace != nullptr) trace->sat_calls += calls;
}

void require_core(const CoreSequence& core) {
  for (const auto& op : core.ops)
    if (!is_core_kind(op.kind))
      throw DomainError("core sequence contains non-core operator '" +
                        std::string(to_keyword(op.kind)) + "'");
}

Formula cached_underformula(const UnderformulaCache& cache, std::size_t pos) {
  auto it = cache.find(pos);
  if (it == cache.end())
    throw DomainError("missing underformula for sev at position " + std::to_string(pos));
  return it->second;
}

// Fold the visited (formula, kept?) pairs, newest outermost: kept formulas
// are conjoined onto the chain, dropped ones are disjoined around it.
Formula fold_chain(const std::vector<std::pair<Formula, bool>>& visited) {
  Formula chain = Formula::verum();
  for (auto it = visited.rbegin(); it != visited.rend(); ++it)
    chain = it->second ? Formula::conj(it->first, chain) : Formula::disj(it->first, chain);
  return chain;
}

}  // namespace

bool is_core_kind(OpKind kind) {
  return kind == OpKind::Lex || kind == OpKind::Refi || kind == OpKind::Sev;
}

Formula maxset(SatBackend& sat, const Formula& p, const std::vector<Formula>& newest_first) {
  Formula m = p;
  for (const auto& l : newest_first) {
    Formula candidate = Formula::conj(m, l);
    if (sat.is_consistent(candidate)) m = candidate;
  }
  return m;
}

Formula under(SatBackend& sat, const Formula& s, const std::vector<Formula>& newest_first) {
  Formula goal = s;
  std::vector<std::pair<Formula, bool>> visited;
  for (const auto& l : newest_first) {
    Formula candidate = Formula::conj(goal, l);
    bool kept = sat.is_consistent(candidate);
    if (kept) goal = candidate;
    visited.emplace_back(l, kept);
  }
  return fold_chain(visited);
}

Formula longest(SatBackend& sat, const std::vector<Formula>& ls) {
  std::vector<Formula> prefix;
  Formula m = Formula::verum();
  for (const auto& l : ls) {
    Formula candidate = Formula::conj(m, l);
    if (!sat.is_consistent(candidate)) break;
    m = candidate;
    prefix.push_back(l);
  }
  return Formula::conj(prefix);
}

Formula back_and_forth(SatBackend& sat, const CoreSequence& core, const Formula& p,
                       QueryTrace* trace) {
  for (const auto& op : core.ops)
    if (op.kind != OpKind::Lex && op.kind != OpKind::Refi)
      throw DomainError("back_and_forth expects lex/refi operators only");
  Formula m = p;
  std::uint64_t calls = 0;
  for (std::size_t i = core.ops.size(); i-- > 0;) {
    const ChangeOp& op = core.ops[i];
    if (op.kind != OpKind::Lex) continue;
    Formula candidate = Formula::conj(m, op.formula);
    ++calls;
    bool kept = sat.is_consistent(candidate);
    if (kept) m = candidate;
    note(trace, "back lex " + to_string(op.formula) + (kept ? ": conjoin" : ": skip"));
  }
  for (std::size_t i = 0; i < core.ops.size(); ++i) {
    const ChangeOp& op = core.ops[i];
    if (op.kind != OpKind::Refi) continue;
    Formula candidate = Formula::conj(m, op.formula);
    ++calls;
    bool kept = sat.is_consistent(candidate);
    if (kept) m = candidate;
    note(trace, "forth refi " + to_string(op.formula) + (kept ? ": conjoin" : ": skip"));
  }
  charge(trace, calls);
  return m;
}

Formula underformula_at(SatBackend& sat, const CoreSequence& core,
                        const UnderformulaCache& cache, std::size_t pos, const Formula& s,
                        QueryTrace* trace) {
  if (pos > core.ops.size())
    throw DomainError("underformula position past the end of the core");
  require_core(core);
  Formula goal = s;
  std::vector<std::pair<Formula, bool>> visited;
  std::size_t bounce_pos = 0;
  std::uint64_t calls = 0;
  for (std::size_t i = pos; i-- > 0;) {
    const ChangeOp& op = core.ops[i];
    if (op.kind == OpKind::Refi) continue;
    if (op.kind == OpKind::Lex) {
      Formula candidate = Formula::conj(goal, op.formula);
      ++calls;
      bool kept = sat.is_consistent(candidate);
      if (kept) goal = candidate;
      visited.emplace_back(op.formula, kept);
      note(trace, "under back lex " + to_string(op.formula) + (kept ? ": conjoin" : ": disjoin"));
      continue;
    }
    // An earlier sev: its underformula bounds everything before it. When
    // compatible it subsumes the tail of the walk; when not, the goal lies
    // strictly above its merged class and the sev contributes nothing.
    Formula b = cached_underformula(cache, i);
    Formula candidate = Formula::conj(goal, b);
    ++calls;
    if (sat.is_consistent(candidate)) {
      goal = candidate;
      visited.emplace_back(b, true);
      bounce_pos = i + 1;
      note(trace, "under back sev @" + std::to_string(i) + ": bounce");
      break;
    }
    note(trace, "under back sev @" + std::to_string(i) + ": ignore");
  }
  for (std::size_t i = bounce_pos; i < pos; ++i) {
    const ChangeOp& op = core.ops[i];
    if (op.kind != OpKind::Refi) continue;
    Formula candidate = Formula::conj(goal, op.formula);
    ++calls;
    bool kept = sat.is_consistent(candidate);
    if (kept) goal = candidate;
    visited.emplace_back(op.formula, kept);
    note(trace, "under forth refi " + to_string(op.formula) + (kept ? ": conjoin" : ": disjoin"));
  }
  charge(trace, calls);
  return fold_chain(visited);
}

UnderformulaCache compute_underformulae(SatBackend& sat, const CoreSequence& core,
                                        QueryTrace* trace) {
  require_core(core);
  UnderformulaCache cache;
  for (std::size_t i = 0; i < core.ops.size(); ++i) {
    if (core.ops[i].kind != OpKind::Sev) continue;
    Formula b = underformula_at(sat, core, cache, i, core.ops[i].formula, trace);
    cache.emplace(i, b);
    if (trace != nullptr) trace->underformulae.emplace(i, b);
  }
  return cache;
}

Formula back_bounce_forth(SatBackend& sat, const CoreSequence& core, const Formula& p,
                          const UnderformulaCache& cache, QueryTrace* trace) {
  require_core(core);
  Formula m = p;
  std::size_t bounce_pos = 0;
  bool bounced = false;
  std::uint64_t calls = 0;
  for (std::size_t i = core.ops.size(); i-- > 0;) {
    const ChangeOp& op = core.ops[i];
    if (op.kind == OpKind::Refi) continue;
    if (op.kind == OpKind::Lex) {
      Formula candidate = Formula::conj(m, op.formula);
      ++calls;
      bool kept = sat.is_consistent(candidate);
      if (kept) m = candidate;
      note(trace, "back lex " + to_string(op.formula) + (kept ? ": conjoin" : ": skip"));
      continue;
    }
    Formula b = cached_underformula(cache, i);
    Formula candidate = Formula::conj(m, b);
    ++calls;
    if (sat.is_consistent(candidate)) {
      m = candidate;
      bounce_pos = i + 1;
      bounced = true;
      note(trace, "back sev @" + std::to_string(i) + ": bounce");
      break;
    }
    note(trace, "back sev @" + std::to_string(i) + ": ignore");
  }
  if (!bounced) {
    // Sentinel guard at the front of the sequence: its underformula is the
    // constant true, so the test is charged but the query is left unchanged.
    ++calls;
    sat.is_consistent(m);
    note(trace, "back sentinel: bounce");
  }
  for (std::size_t i = bounce_pos; i < core.ops.size(); ++i) {
    const ChangeOp& op = core.ops[i];
    if (op.kind != OpKind::Refi) continue;
    Formula candidate = Formula::conj(m, op.formula);
    ++calls;
    bool kept = sat.is_consistent(candidate);
    if (kept) m = candidate;
    note(trace, "forth refi " + to_string(op.formula) + (kept ? ": conjoin" : ": skip"));
  }
  charge(trace, calls);
  return m;
}

}  // namespace doxa
