#include "doxa/cli.hpp"

#include <atomic>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace doxa {

namespace {

using nlohmann::json;

std::string trimmed(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Parses a formula found at `offset` within source line `line_no`, shifting
// error positions from formula-local to file coordinates.
Formula parse_formula_at(const std::string& text, const Alphabet& a, std::size_t line_no,
                         std::size_t offset) {
  try {
    return parse_formula(text, a);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line_no, offset + e.column);
  }
}

SatBackend make_backend(const CliOptions& opt) {
  return opt.solver.empty() ? SatBackend() : SatBackend(opt.solver);
}

// Expansion with step provenance on failure: engine errors name the input
// step and source line they arose from.
Expansion expand_with_provenance(SatBackend& sat, const SequenceDocument& doc) {
  Expansion out{CoreSequence{doc.sequence.alphabet, {}}, {}, {}};
  for (std::size_t i = 0; i < doc.sequence.ops.size(); ++i) {
    const ChangeOp& op = doc.sequence.ops[i];
    try {
      out.spans.push_back(expand_into(sat, out.core, out.cache, op));
    } catch (const DomainError& e) {
      throw DomainError("step " + std::to_string(i + 1) + " (" +
                        std::string(to_keyword(op.kind)) + ", line " +
                        std::to_string(doc.op_lines[i]) + "): " + e.what());
    }
  }
  return out;
}

void require_oracle_cap(const SequenceDocument& doc, const CliOptions& opt) {
  if (doc.sequence.alphabet.size() > opt.oracle_cap)
    throw DomainError("alphabet has " + std::to_string(doc.sequence.alphabet.size()) +
                      " variables, above the oracle cap of " + std::to_string(opt.oracle_cap));
}

// Class label for oracle output: parseable, deterministic, and readable for
// the two extremes.
std::string class_label(const ModelSet& s, const Alphabet& a) {
  if (s == ModelSet::all(a)) return "T";
  return to_string(formula_of_models(s));
}

// Oracle fold with step provenance, recording the preorder after every step.
std::vector<TotalPreorder> oracle_steps(const SequenceDocument& doc, const CliOptions& opt) {
  std::vector<TotalPreorder> steps;
  TotalPreorder c = empty_preorder(doc.sequence.alphabet, opt.oracle_cap);
  steps.push_back(c);
  for (std::size_t i = 0; i < doc.sequence.ops.size(); ++i) {
    const ChangeOp& op = doc.sequence.ops[i];
    try {
      c = apply(c, op);
    } catch (const DomainError& e) {
      throw DomainError("step " + std::to_string(i + 1) + " (" +
                        std::string(to_keyword(op.kind)) + ", line " +
                        std::to_string(doc.op_lines[i]) + "): " + e.what());
    }
    steps.push_back(c);
  }
  return steps;
}

}  // namespace

SequenceDocument parse_document(std::istream& in, const std::string& name) {
  SequenceDocument doc{ChangeSequence{Alphabet(std::vector<std::string>{}), {}}, {}, {}, {}};
  bool have_vars = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trimmed(raw);
    if (line.empty() || line[0] == '#') continue;
    if (!have_vars) {
      std::istringstream head(line);
      std::string kw;
      head >> kw;
      if (kw != "vars")
        throw ParseError("expected 'vars' declaration before '" + line + "'", line_no, 1);
      std::vector<std::string> names;
      std::string v;
      while (head >> v) names.push_back(v);
      doc.sequence.alphabet = Alphabet(names);
      have_vars = true;
      continue;
    }
    if (line.rfind("vars", 0) == 0 && (line.size() == 4 || line[4] == ' ' || line[4] == '\t'))
      throw ParseError("duplicate vars declaration", line_no, 1);
    if (line[0] == '?') {
      std::string text = line.substr(1);
      std::size_t offset = raw.find('?') + 1;
      doc.queries.push_back(
          parse_formula_at(text, doc.sequence.alphabet, line_no, offset));
      doc.query_lines.push_back(line_no);
      continue;
    }
    std::size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError("expected '<operator>: <formula>' or '? <formula>'", line_no, 1);
    std::string kw = trimmed(line.substr(0, colon));
    auto kind = op_kind_from_keyword(kw);
    if (!kind.has_value()) throw ParseError("unknown operator '" + kw + "'", line_no, 1);
    std::string text = line.substr(colon + 1);
    std::size_t offset = raw.find(':') + 1;
    doc.sequence.ops.push_back(
        {*kind, parse_formula_at(text, doc.sequence.alphabet, line_no, offset)});
    doc.op_lines.push_back(line_no);
  }
  if (!have_vars)
    throw ParseError("missing 'vars' declaration in " + name, line_no ? line_no : 1, 1);
  return doc;
}

SequenceDocument load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path + "'", 0, 0);
  return parse_document(in, path);
}

int cmd_base(const SequenceDocument& doc, const CliOptions& opt, std::ostream& out) {
  SatBackend sat = make_backend(opt);
  Expansion x = expand_with_provenance(sat, doc);
  Formula base = back_bounce_forth(sat, x.core, Formula::verum(), x.cache);
  if (opt.json) {
    json j{{"base", to_string(base)}, {"sat_calls", sat.call_count()}};
    out << j.dump(2) << "\n";
  } else {
    out << to_string(base) << "\n";
  }
  return kExitOk;
}

int cmd_entails(const SequenceDocument& doc, const CliOptions& opt, std::ostream& out) {
  SatBackend sat = make_backend(opt);
  Expansion x = expand_with_provenance(sat, doc);
  Formula base = back_bounce_forth(sat, x.core, Formula::verum(), x.cache);

  // vector<char>, not vector<bool>: workers write distinct slots concurrently.
  std::vector<char> holds(doc.queries.size(), 0);
  unsigned jobs = opt.jobs == 0 ? 1 : opt.jobs;
  if (jobs <= 1 || doc.queries.size() <= 1) {
    for (std::size_t i = 0; i < doc.queries.size(); ++i)
      holds[i] = sat.entails(base, doc.queries[i]) ? 1 : 0;
  } else {
    // Independent queries, one backend per worker; results keep file order.
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&]() {
      SatBackend own = make_backend(opt);
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= doc.queries.size()) return;
        try {
          holds[i] = own.entails(base, doc.queries[i]) ? 1 : 0;
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    std::size_t n = std::min<std::size_t>(jobs, doc.queries.size());
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  bool all_hold = true;
  if (opt.json) {
    json arr = json::array();
    for (std::size_t i = 0; i < doc.queries.size(); ++i) {
      arr.push_back({{"query", to_string(doc.queries[i])}, {"holds", holds[i] != 0}});
      all_hold = all_hold && holds[i] != 0;
    }
    out << arr.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < doc.queries.size(); ++i) {
      out << to_string(doc.queries[i]) << ": " << (holds[i] ? "true" : "false") << "\n";
      all_hold = all_hold && holds[i];
    }
  }
  return all_hold ? kExitOk : kExitEntailment;
}

int cmd_trace(const SequenceDocument& doc, const CliOptions& opt, std::ostream& out) {
  SatBackend sat = make_backend(opt);
  CoreSequence core{doc.sequence.alphabet, {}};
  UnderformulaCache cache;
  json steps = json::array();
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < doc.sequence.ops.size(); ++i) {
    const ChangeOp& op = doc.sequence.ops[i];
    std::uint64_t before = sat.call_count();
    std::pair<std::size_t, std::size_t> span;
    try {
      span = expand_into(sat, core, cache, op);
    } catch (const DomainError& e) {
      throw DomainError("step " + std::to_string(i + 1) + " (" +
                        std::string(to_keyword(op.kind)) + ", line " +
                        std::to_string(doc.op_lines[i]) + "): " + e.what());
    }
    Formula base = back_bounce_forth(sat, core, Formula::verum(), cache);
    std::uint64_t calls = sat.call_count() - before;
    total += calls;
    std::optional<Formula> under;
    for (std::size_t pos = span.first; pos < span.second; ++pos) {
      auto it = cache.find(pos);
      if (it != cache.end()) under = it->second;
    }
    if (opt.json) {
      json step{{"step", i + 1},
                {"op", std::string(to_keyword(op.kind))},
                {"formula", to_string(op.formula)},
                {"base", to_string(base)},
                {"sat_calls", calls}};
      if (under.has_value()) step["underformula"] = to_string(*under);
      steps.push_back(step);
    } else {
      out << "step " << (i + 1) << ": " << to_keyword(op.kind) << "(" << to_string(op.formula)
          << ")\n";
      out << "  base: " << to_string(base) << "\n";
      if (under.has_value()) out << "  underformula: " << to_string(*under) << "\n";
      out << "  sat calls: " << calls << "\n";
    }
  }
  if (opt.json)
    out << steps.dump(2) << "\n";
  else
    out << "total sat calls: " << total << "\n";
  return kExitOk;
}

int cmd_expand(const SequenceDocument& doc, const CliOptions& opt, std::ostream& out) {
  SatBackend sat = make_backend(opt);
  Expansion x = expand_with_provenance(sat, doc);
  const Alphabet& a = doc.sequence.alphabet;
  if (opt.json) {
    json vars = json::array();
    for (std::size_t i = 0; i < a.size(); ++i) vars.push_back(a.name(i));
    json ops = json::array();
    for (std::size_t pos = 0; pos < x.core.ops.size(); ++pos) {
      const ChangeOp& op = x.core.ops[pos];
      json o{{"op", std::string(to_keyword(op.kind))}, {"formula", to_string(op.formula)}};
      auto it = x.cache.find(pos);
      if (it != x.cache.end()) o["underformula"] = to_string(it->second);
      ops.push_back(o);
    }
    out << json{{"vars", vars}, {"core", ops}}.dump(2) << "\n";
  } else {
    // The output is itself a loadable sequence file.
    out << "vars";
    for (std::size_t i = 0; i < a.size(); ++i) out << " " << a.name(i);
    out << "\n";
    for (std::size_t pos = 0; pos < x.core.ops.size(); ++pos) {
      const ChangeOp& op = x.core.ops[pos];
      out << to_keyword(op.kind) << ": " << to_string(op.formula) << "\n";
      auto it = x.cache.find(pos);
      if (it != x.cache.end())
        out << "# under @" << pos << ": " << to_string(it->second) << "\n";
    }
  }
  return kExitOk;
}

int cmd_oracle(const SequenceDocument& doc, const CliOptions& opt, std::ostream& out) {
  require_oracle_cap(doc, opt);
  std::vector<TotalPreorder> steps = oracle_steps(doc, opt);
  const Alphabet& a = doc.sequence.alphabet;
  json arr = json::array();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    TotalPreorder dense = normalize(steps[i]);
    if (opt.json) {
      json classes = json::array();
      for (const auto& cls : dense.classes()) classes.push_back(class_label(cls, a));
      json step{{"step", i}, {"classes", classes}};
      if (i > 0) {
        step["op"] = std::string(to_keyword(doc.sequence.ops[i - 1].kind));
        step["formula"] = to_string(doc.sequence.ops[i - 1].formula);
      }
      arr.push_back(step);
    } else {
      if (i == 0) {
        out << "step 0:\n";
      } else {
        out << "step " << i << ": " << to_keyword(doc.sequence.ops[i - 1].kind) << "("
            << to_string(doc.sequence.ops[i - 1].formula) << ")\n";
      }
      for (std::size_t k = 0; k < dense.size(); ++k)
        out << "  class " << k << ": " << class_label(dense.class_at(k), a) << "\n";
    }
  }
  if (opt.json) out << arr.dump(2) << "\n";
  return kExitOk;
}

int cmd_compare(const SequenceDocument& doc, const CliOptions& opt, std::ostream& out) {
  require_oracle_cap(doc, opt);
  const Alphabet& a = doc.sequence.alphabet;
  std::vector<TotalPreorder> steps = oracle_steps(doc, opt);

  SatBackend sat = make_backend(opt);
  CoreSequence core{a, {}};
  UnderformulaCache cache;
  bool ok = true;
  json report = json::array();
  for (std::size_t i = 0; i < doc.sequence.ops.size(); ++i) {
    const ChangeOp& op = doc.sequence.ops[i];
    try {
      expand_into(sat, core, cache, op);
    } catch (const DomainError& e) {
      throw DomainError("step " + std::to_string(i + 1) + " (" +
                        std::string(to_keyword(op.kind)) + ", line " +
                        std::to_string(doc.op_lines[i]) + "): " + e.what());
    }
    Formula base = back_bounce_forth(sat, core, Formula::verum(), cache);
    bool match = enumerate_models(base, a, opt.oracle_cap) == base_models(steps[i + 1]);
    ok = ok && match;
    if (opt.json)
      report.push_back(
          {{"step", i + 1}, {"base", to_string(base)}, {"ok", match}});
    else
      out << "step " << (i + 1) << ": " << (match ? "ok" : "MISMATCH") << " (base "
          << to_string(base) << ")\n";
  }

  // The expanded core must denote the same ordering, not just the same base.
  bool preorder_ok =
      equivalent_preorders(run_sequence_oracle(ChangeSequence{a, core.ops}, opt.oracle_cap),
                           steps.back());
  ok = ok && preorder_ok;

  Formula base = back_bounce_forth(sat, core, Formula::verum(), cache);
  ModelSet base_ms = base_models(steps.back());
  json queries = json::array();
  for (std::size_t i = 0; i < doc.queries.size(); ++i) {
    bool symbolic = sat.entails(base, doc.queries[i]);
    bool oracle = (base_ms - enumerate_models(doc.queries[i], a, opt.oracle_cap)).empty();
    bool match = symbolic == oracle;
    ok = ok && match;
    if (opt.json)
      queries.push_back({{"query", to_string(doc.queries[i])},
                         {"holds", symbolic},
                         {"ok", match}});
    else
      out << "query " << to_string(doc.queries[i]) << ": " << (match ? "ok" : "MISMATCH")
          << " (" << (symbolic ? "true" : "false") << ")\n";
  }

  if (opt.json) {
    out << json{{"ok", ok},
                {"steps", report},
                {"preorder_ok", preorder_ok},
                {"queries", queries}}
               .dump(2)
        << "\n";
  } else {
    out << "preorder: " << (preorder_ok ? "ok" : "MISMATCH") << "\n";
    out << "compare: " << (ok ? "ok" : "MISMATCH") << "\n";
  }
  return ok ? kExitOk : kExitEngine;
}

int cmd_stats(const SequenceDocument& doc, const CliOptions& opt, std::ostream& out) {
  SatBackend sat = make_backend(opt);
  std::uint64_t c0 = sat.call_count();
  Expansion x = expand_with_provenance(sat, doc);
  std::uint64_t c1 = sat.call_count();
  Formula base = back_bounce_forth(sat, x.core, Formula::verum(), x.cache);
  std::uint64_t c2 = sat.call_count();
  if (opt.json) {
    json j{{"ops", doc.sequence.ops.size()},
           {"core_ops", x.core.ops.size()},
           {"underformulae", x.cache.size()},
           {"sat_calls_expand", c1 - c0},
           {"sat_calls_base", c2 - c1},
           {"sat_calls_total", c2 - c0},
           {"base", to_string(base)}};
    out << j.dump(2) << "\n";
  } else {
    out << "ops: " << doc.sequence.ops.size() << "\n";
    out << "core ops: " << x.core.ops.size() << "\n";
    out << "underformulae: " << x.cache.size() << "\n";
    out << "sat calls (expand): " << (c1 - c0) << "\n";
    out << "sat calls (base): " << (c2 - c1) << "\n";
    out << "sat calls (total): " << (c2 - c0) << "\n";
    out << "base: " << to_string(base) << "\n";
  }
  return kExitOk;
}

}  // namespace doxa
