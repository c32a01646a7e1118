#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "doxa/reduce.hpp"
#include "support.hpp"

using namespace doxa;
using doxa::testing::random_consistent_formula;
using doxa::testing::random_ops;
using doxa::testing::random_sequence;
using doxa::testing::xyz;

namespace {

Formula parse(const std::string& text, const Alphabet& a = xyz()) {
  return parse_formula(text, a);
}

TotalPreorder oracle_of(const Alphabet& a, std::vector<ChangeOp> ops) {
  return run_sequence_oracle(ChangeSequence{a, std::move(ops)});
}

std::vector<ChangeOp> appended(std::vector<ChangeOp> ops, std::vector<ChangeOp> tail) {
  for (auto& t : tail) ops.push_back(std::move(t));
  return ops;
}

// Formula naming the minimal models of p in c, taken from the oracle; the
// reduction laws are stated in terms of it.
Formula min_formula(const TotalPreorder& c, const Formula& p) {
  return formula_of_models(min_models(c, p));
}

void check_ops_equivalent(SatBackend& sat, const std::vector<ChangeOp>& got,
                          const std::vector<OpKind>& kinds,
                          const std::vector<Formula>& formulas) {
  REQUIRE(got.size() == kinds.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].kind == kinds[i]);
    CHECK(sat.equivalent(got[i].formula, formulas[i]));
  }
}

}  // namespace

TEST_CASE("expansion of single steps over given prefixes") {
  SatBackend sat;
  Alphabet a = xyz();

  CoreSequence prefix{a, {{OpKind::Lex, parse("y")}}};
  UnderformulaCache cache;
  auto nat_ops = expand_op(sat, prefix, cache, {OpKind::Nat, parse("!x")});
  check_ops_equivalent(sat, nat_ops, {OpKind::Lex}, {parse("!x & y")});

  CoreSequence prefix2{a, {{OpKind::Lex, parse("y")}, {OpKind::Lex, parse("!x & y")}}};
  auto res_ops = expand_op(sat, prefix2, cache, {OpKind::Res, parse("x & z")});
  check_ops_equivalent(sat, res_ops, {OpKind::Refi, OpKind::Lex},
                       {parse("x & z"), parse("x & y & z")});

  auto rad_ops = expand_op(sat, prefix2, cache, {OpKind::Rad, parse("!z")});
  check_ops_equivalent(sat, rad_ops, {OpKind::Lex, OpKind::Sev, OpKind::Lex},
                       {parse("z"), parse("!z"), parse("!z")});
}

TEST_CASE("expansion of the running example is the seven-op core") {
  SatBackend sat;
  Alphabet a = xyz();
  ChangeSequence seq{a,
                     {{OpKind::Lex, parse("y")},
                      {OpKind::Nat, parse("!x")},
                      {OpKind::Res, parse("x & z")},
                      {OpKind::Rad, parse("!z")}}};
  Expansion x = expand_sequence(sat, seq);
  check_ops_equivalent(sat, x.core.ops,
                       {OpKind::Lex, OpKind::Lex, OpKind::Refi, OpKind::Lex, OpKind::Lex,
                        OpKind::Sev, OpKind::Lex},
                       {parse("y"), parse("!x & y"), parse("x & z"), parse("x & y & z"),
                        parse("z"), parse("!z"), parse("!z")});
  REQUIRE(x.spans.size() == 4);
  CHECK(x.spans[0] == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK(x.spans[1] == std::pair<std::size_t, std::size_t>{1, 2});
  CHECK(x.spans[2] == std::pair<std::size_t, std::size_t>{2, 4});
  CHECK(x.spans[3] == std::pair<std::size_t, std::size_t>{4, 7});
  // The sev at position 5 carries the underformula of the worked example.
  REQUIRE(x.cache.count(5) == 1);
  CHECK(sat.equivalent(x.cache.at(5), parse("z | (!x & y)")));
}

TEST_CASE("core steps expand to themselves") {
  SatBackend sat;
  Alphabet a = xyz();
  ChangeSequence seq{a,
                     {{OpKind::Lex, parse("x")},
                      {OpKind::Refi, parse("y | z")},
                      {OpKind::Lex, parse("!y")},
                      {OpKind::Sev, parse("z")}}};
  Expansion x = expand_sequence(sat, seq);
  REQUIRE(x.core.ops.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(x.core.ops[i].kind == seq.ops[i].kind);
    CHECK(to_string(x.core.ops[i].formula) == to_string(seq.ops[i].formula));
    CHECK(x.spans[i] == std::pair<std::size_t, std::size_t>{i, i + 1});
  }
}

TEST_CASE("full meet from the empty preorder uses P itself") {
  SatBackend sat;
  Alphabet a = xyz();
  Formula p = parse("x | (y & !z)");
  ChangeSequence seq{a, {{OpKind::Full, p}}};
  Expansion x = expand_sequence(sat, seq);
  check_ops_equivalent(sat, x.core.ops, {OpKind::Lex, OpKind::Sev, OpKind::Lex},
                       {Formula::negate(p), p, p});
  CHECK(equivalent_preorders(oracle_of(a, x.core.ops), oracle_of(a, seq.ops)));
}

TEST_CASE("expansion rejects inconsistent formulas") {
  SatBackend sat;
  Alphabet a = xyz();
  ChangeSequence seq{a, {{OpKind::Nat, parse("x & !x")}}};
  CHECK_THROWS_AS(expand_sequence(sat, seq), DomainError);
}

TEST_CASE("natural revision law: a single lex on the minimal models") {
  std::mt19937 rng(31);
  Alphabet a = xyz();
  SatBackend sat;
  for (int trial = 0; trial < 100; ++trial) {
    auto prefix = random_ops(rng, a, 4, sat, {OpKind::Lex});
    Formula p = random_consistent_formula(rng, a, 2, sat);
    Formula k = min_formula(oracle_of(a, prefix), p);
    CHECK(equivalent_preorders(oracle_of(a, appended(prefix, {{OpKind::Nat, p}})),
                               oracle_of(a, appended(prefix, {{OpKind::Lex, k}}))));
  }
}

TEST_CASE("restrained revision law: refine then promote") {
  std::mt19937 rng(32);
  Alphabet a = xyz();
  SatBackend sat;
  for (int trial = 0; trial < 100; ++trial) {
    auto prefix = random_ops(rng, a, 4, sat, {OpKind::Lex});
    Formula p = random_consistent_formula(rng, a, 2, sat);
    CHECK(equivalent_preorders(
        oracle_of(a, appended(prefix, {{OpKind::Res, p}})),
        oracle_of(a, appended(prefix, {{OpKind::Refi, p}, {OpKind::Nat, p}}))));
  }
}

TEST_CASE("very radical revision law: lex up, merge, lex down") {
  std::mt19937 rng(33);
  Alphabet a = xyz();
  SatBackend sat;
  int done = 0;
  while (done < 100) {
    auto prefix = random_ops(rng, a, 4, sat, {OpKind::Lex});
    Formula p = random_consistent_formula(rng, a, 2, sat);
    Formula np = Formula::negate(p);
    if (!sat.is_consistent(np)) continue;  // the law needs a consistent ¬P
    ++done;
    CHECK(equivalent_preorders(
        oracle_of(a, appended(prefix, {{OpKind::Rad, p}})),
        oracle_of(a, appended(prefix, {{OpKind::Lex, np}, {OpKind::Sev, p}, {OpKind::Lex, p}}))));
  }
}

TEST_CASE("severe revision law: merge then promote") {
  std::mt19937 rng(34);
  Alphabet a = xyz();
  SatBackend sat;
  for (int trial = 0; trial < 100; ++trial) {
    auto prefix = random_ops(rng, a, 4, sat, {OpKind::Lex});
    Formula p = random_consistent_formula(rng, a, 2, sat);
    CHECK(equivalent_preorders(
        oracle_of(a, appended(prefix, {{OpKind::Sevr, p}})),
        oracle_of(a, appended(prefix, {{OpKind::Sev, p}, {OpKind::Nat, p}}))));
  }
}

TEST_CASE("moderate severe revision law: merge then lex") {
  std::mt19937 rng(35);
  Alphabet a = xyz();
  SatBackend sat;
  for (int trial = 0; trial < 100; ++trial) {
    auto prefix = random_ops(rng, a, 4, sat, {OpKind::Lex});
    Formula p = random_consistent_formula(rng, a, 2, sat);
    CHECK(equivalent_preorders(
        oracle_of(a, appended(prefix, {{OpKind::Msev, p}})),
        oracle_of(a, appended(prefix, {{OpKind::Sev, p}, {OpKind::Lex, p}}))));
  }
}

TEST_CASE("plain severe revision law: merge past the P class, then promote") {
  std::mt19937 rng(36);
  Alphabet a = xyz();
  SatBackend sat;
  int done = 0;
  while (done < 100) {
    auto prefix = random_ops(rng, a, 4, sat, {OpKind::Lex});
    Formula p = random_consistent_formula(rng, a, 2, sat);
    TotalPreorder c = oracle_of(a, prefix);
    Formula k = min_formula(c, p);
    TotalPreorder after_sev = apply(c, ChangeOp{OpKind::Sev, p});
    Formula kprime = formula_of_models(base_models(after_sev));
    Formula nkprime = Formula::negate(kprime);
    if (!sat.is_consistent(nkprime)) continue;  // no occupied class above P's
    ++done;
    CHECK(equivalent_preorders(
        oracle_of(a, appended(prefix, {{OpKind::Psev, p}})),
        oracle_of(a, appended(prefix, {{OpKind::Sev, nkprime}, {OpKind::Lex, k}}))));
  }
}

TEST_CASE("full meet revision law: two classes via lex, sev, lex") {
  std::mt19937 rng(37);
  Alphabet a = xyz();
  SatBackend sat;
  int done = 0;
  while (done < 100) {
    auto prefix = random_ops(rng, a, 4, sat, {OpKind::Lex});
    Formula p = random_consistent_formula(rng, a, 2, sat);
    Formula k = min_formula(oracle_of(a, prefix), p);
    Formula nk = Formula::negate(k);
    if (!sat.is_consistent(nk)) continue;  // minimal models already everything
    ++done;
    CHECK(equivalent_preorders(
        oracle_of(a, appended(prefix, {{OpKind::Full, p}})),
        oracle_of(a, appended(prefix, {{OpKind::Lex, nk}, {OpKind::Sev, k}, {OpKind::Lex, k}}))));
  }
}

TEST_CASE("expanding a sequence preserves its preorder") {
  std::mt19937 rng(38);
  Alphabet a = xyz();
  SatBackend sat;
  for (int trial = 0; trial < 150; ++trial) {
    ChangeSequence seq = random_sequence(rng, a, 6, sat);
    Expansion x = expand_sequence(sat, seq);
    CHECK(equivalent_preorders(oracle_of(a, seq.ops), oracle_of(a, x.core.ops)));
    // Spans tile the core.
    std::size_t at = 0;
    for (const auto& [b, e] : x.spans) {
      CHECK(b == at);
      CHECK(b <= e);
      at = e;
    }
    CHECK(at == x.core.ops.size());
  }
}

TEST_CASE("expanding a later op never changes earlier expansions") {
  std::mt19937 rng(39);
  Alphabet a = xyz();
  SatBackend sat;
  for (int trial = 0; trial < 60; ++trial) {
    ChangeSequence seq = random_sequence(rng, a, 5, sat);
    ChangeSequence longer = seq;
    longer.ops.push_back({doxa::testing::random_kind(rng),
                          random_consistent_formula(rng, a, 2, sat)});
    Expansion x1 = expand_sequence(sat, seq);
    Expansion x2 = expand_sequence(sat, longer);
    REQUIRE(x2.core.ops.size() >= x1.core.ops.size());
    for (std::size_t i = 0; i < x1.core.ops.size(); ++i) {
      CHECK(x1.core.ops[i].kind == x2.core.ops[i].kind);
      CHECK(to_string(x1.core.ops[i].formula) == to_string(x2.core.ops[i].formula));
    }
    for (std::size_t i = 0; i < x1.spans.size(); ++i) CHECK(x1.spans[i] == x2.spans[i]);
  }
}

TEST_CASE("base_after on the running example") {
  SatBackend sat;
  Alphabet a = xyz();
  ChangeSequence seq{a,
                     {{OpKind::Lex, parse("y")},
                      {OpKind::Nat, parse("!x")},
                      {OpKind::Res, parse("x & z")},
                      {OpKind::Rad, parse("!z")}}};
  Formula base = base_after(sat, seq);
  CHECK(sat.equivalent(base, parse("!x & y & !z")));
  CHECK(entails_after(sat, seq, parse("!z")));
  CHECK(entails_after(sat, seq, parse("y")));
  CHECK_FALSE(entails_after(sat, seq, parse("x")));
  CHECK(entails_after(sat, seq, Formula::verum()));
}

TEST_CASE("base_after matches the oracle base on random sequences") {
  std::mt19937 rng(40);
  Alphabet a = xyz();
  SatBackend sat;
  for (int trial = 0; trial < 150; ++trial) {
    ChangeSequence seq = random_sequence(rng, a, 6, sat);
    Formula base = base_after(sat, seq);
    CHECK(enumerate_models(base, a) == base_models(run_sequence_oracle(seq)));
  }
}

TEST_CASE("base_after of the empty sequence is a tautology") {
  SatBackend sat;
  ChangeSequence seq{xyz(), {}};
  CHECK(sat.equivalent(base_after(sat, seq), Formula::verum()));
}

TEST_CASE("traced runs expose per-step bases, underformulae and call counts") {
  std::mt19937 rng(41);
  Alphabet a = xyz();
  SatBackend sat;
  ChangeSequence seq{a,
                     {{OpKind::Lex, parse("y")},
                      {OpKind::Nat, parse("!x")},
                      {OpKind::Res, parse("x & z")},
                      {OpKind::Rad, parse("!z")}}};
  QueryTrace trace;
  Formula base = base_after(sat, seq, &trace);
  REQUIRE(trace.step_bases.size() == 4);
  // Bases after each step, against the oracle.
  std::vector<TotalPreorder> steps;
  run_sequence_oracle(seq, kDefaultVarCap, &steps);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(enumerate_models(trace.step_bases[i], a) == base_models(steps[i]));
  CHECK(sat.equivalent(base, trace.step_bases.back()));
  CHECK(trace.underformulae.size() == 1);
  CHECK(trace.sat_calls > 0);
  CHECK_FALSE(trace.path.empty());

  // Entailment adds its single check to the tally.
  QueryTrace t2;
  bool holds = entails_after(sat, seq, parse("!z"), &t2);
  CHECK(holds);
  CHECK(t2.sat_calls == trace.sat_calls + 1);
}
