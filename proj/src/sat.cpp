#include "doxa/sat.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace doxa {

namespace {

// --- CNF construction (auxiliary-variable encoding) ---

struct Cnf {
  int nvars = 0;
  std::vector<std::vector<int>> clauses;
  std::vector<std::pair<std::string, int>> var_map;  // formula variables only
};

class CnfBuilder {
 public:
  Cnf build(const Formula& f) {
    cnf_.clauses.push_back({encode(f)});
    return std::move(cnf_);
  }

 private:
  int fresh() { return ++cnf_.nvars; }

  int var_literal(const std::string& name) {
    auto it = by_name_.find(name);
    if (it != by_name_.end()) return it->second;
    int v = fresh();
    by_name_.emplace(name, v);
    cnf_.var_map.emplace_back(name, v);
    return v;
  }

  // Literal equisatisfiable with the subformula; shared nodes encode once.
  int encode(const Formula& f) {
    auto it = cache_.find(f.address());
    if (it != cache_.end()) return it->second;

    int lit = 0;
    switch (f.kind()) {
      case Conn::Var:
        lit = var_literal(f.var_name());
        break;
      case Conn::True:
        lit = fresh();
        cnf_.clauses.push_back({lit});
        break;
      case Conn::False:
        lit = fresh();
        cnf_.clauses.push_back({-lit});
        break;
      case Conn::Not:
        lit = -encode(f.operands()[0]);
        break;
      case Conn::And: {
        lit = fresh();
        std::vector<int> back{lit};
        for (const auto& k : f.operands()) {
          int c = encode(k);
          cnf_.clauses.push_back({-lit, c});
          back.push_back(-c);
        }
        cnf_.clauses.push_back(std::move(back));
        break;
      }
      case Conn::Or: {
        lit = fresh();
        std::vector<int> fwd{-lit};
        for (const auto& k : f.operands()) {
          int c = encode(k);
          cnf_.clauses.push_back({lit, -c});
          fwd.push_back(c);
        }
        cnf_.clauses.push_back(std::move(fwd));
        break;
      }
      case Conn::Imp: {
        int a = encode(f.operands()[0]);
        int b = encode(f.operands()[1]);
        lit = fresh();
        cnf_.clauses.push_back({-lit, -a, b});
        cnf_.clauses.push_back({lit, a});
        cnf_.clauses.push_back({lit, -b});
        break;
      }
      case Conn::Iff: {
        int a = encode(f.operands()[0]);
        int b = encode(f.operands()[1]);
        lit = fresh();
        cnf_.clauses.push_back({-lit, -a, b});
        cnf_.clauses.push_back({-lit, a, -b});
        cnf_.clauses.push_back({lit, a, b});
        cnf_.clauses.push_back({lit, -a, -b});
        break;
      }
    }
    cache_.emplace(f.address(), lit);
    return lit;
  }

  Cnf cnf_;
  std::map<const Formula::Node*, int> cache_;
  std::map<std::string, int> by_name_;
};

// --- Complete search: unit propagation + branching, two watched literals ---

class Solver {
 public:
  explicit Solver(const Cnf& cnf) : nvars_(cnf.nvars), value_(cnf.nvars + 1, 0) {
    watchers_.resize(2 * (cnf.nvars + 1));
    for (const auto& c : cnf.clauses) {
      if (c.empty()) { contradiction_ = true; return; }
      if (c.size() == 1) {
        if (!enqueue(c[0])) { contradiction_ = true; return; }
        continue;
      }
      clauses_.push_back(c);
      std::size_t idx = clauses_.size() - 1;
      watch_[0].push_back(c[0]);
      watch_[1].push_back(c[1]);
      watchers_[slot(c[0])].push_back(idx);
      watchers_[slot(c[1])].push_back(idx);
    }
  }

  bool solve() {
    if (contradiction_) return false;
    if (!propagate()) return false;
    for (;;) {
      int v = next_unassigned();
      if (v == 0) return true;  // every variable assigned, no conflict
      decide(v);
      while (!propagate()) {
        if (!backtrack()) return false;
      }
    }
  }

 private:
  // Watcher slots: literal l -> index (positive literals even, negative odd).
  static std::size_t slot(int lit) {
    return lit > 0 ? 2 * static_cast<std::size_t>(lit)
                   : 2 * static_cast<std::size_t>(-lit) + 1;
  }

  int value_of(int lit) const {
    int v = value_[std::abs(lit)];
    return lit > 0 ? v : -v;
  }

  bool enqueue(int lit) {
    int v = value_of(lit);
    if (v == 1) return true;
    if (v == -1) return false;
    value_[std::abs(lit)] = lit > 0 ? 1 : -1;
    trail_.push_back(lit);
    return true;
  }

  int next_unassigned() const {
    for (int v = 1; v <= nvars_; ++v)
      if (value_[v] == 0) return v;
    return 0;
  }

  void decide(int var) {
    level_start_.push_back(trail_.size());
    level_flipped_.push_back(false);
    level_lit_.push_back(var);
    enqueue(var);  // try the positive phase first; deterministic
  }

  // Undo assignments of the deepest level; flip its decision if untried,
  // else drop the level and keep unwinding. False when no level remains.
  bool backtrack() {
    while (!level_start_.empty()) {
      std::size_t mark = level_start_.back();
      while (trail_.size() > mark) {
        value_[std::abs(trail_.back())] = 0;
        trail_.pop_back();
      }
      qhead_ = trail_.size();
      if (!level_flipped_.back()) {
        level_flipped_.back() = true;
        int lit = -level_lit_.back();
        level_lit_.back() = lit;
        enqueue(lit);
        return true;
      }
      level_start_.pop_back();
      level_flipped_.pop_back();
      level_lit_.pop_back();
    }
    return false;
  }

  bool propagate() {
    while (qhead_ < trail_.size()) {
      int lit = trail_[qhead_++];
      int falsified = -lit;
      auto& ws = watchers_[slot(falsified)];
      std::size_t keep = 0;
      for (std::size_t i = 0; i < ws.size(); ++i) {
        std::size_t ci = ws[i];
        int which = watch_[0][ci] == falsified ? 0 : 1;
        int other = watch_[1 - which][ci];
        if (value_of(other) == 1) { ws[keep++] = ci; continue; }
        // Look for a non-false replacement literal to watch instead.
        const auto& clause = clauses_[ci];
        int replacement = 0;
        for (int cand : clause) {
          if (cand == falsified || cand == other) continue;
          if (value_of(cand) != -1) { replacement = cand; break; }
        }
        if (replacement != 0) {
          watch_[which][ci] = replacement;
          watchers_[slot(replacement)].push_back(ci);
          continue;  // dropped from this watcher list
        }
        ws[keep++] = ci;
        if (!enqueue(other)) {  // conflict: clause fully falsified
          for (++i; i < ws.size(); ++i) ws[keep++] = ws[i];
          ws.resize(keep);
          return false;
        }
      }
      ws.resize(keep);
    }
    return true;
  }

  int nvars_;
  bool contradiction_ = false;
  std::vector<std::vector<int>> clauses_;
  std::vector<int> watch_[2];  // per clause: the two watched literals
  std::vector<std::vector<std::size_t>> watchers_;
  std::vector<std::int8_t> value_;
  std::vector<int> trail_;
  std::size_t qhead_ = 0;
  std::vector<std::size_t> level_start_;
  std::vector<bool> level_flipped_;
  std::vector<int> level_lit_;
};

// --- External solver bridge ---

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& contents) {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    std::ostringstream name;
    name << "doxa-" << rd() << "-" << counter++ << ".cnf";
    path = std::filesystem::temp_directory_path() / name.str();
    std::ofstream out(path);
    out << contents;
    if (!out) throw SolverError("cannot write CNF file " + path.string());
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
};

bool run_external(const std::string& command, const Formula& f) {
  DimacsDocument doc = export_dimacs(f);
  TempFile tmp(doc.text);

  std::string cmd = command;
  std::size_t hole = cmd.find("{}");
  if (hole != std::string::npos)
    cmd.replace(hole, 2, tmp.path.string());
  else
    cmd += " " + tmp.path.string();
  cmd += " 2>/dev/null";

  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw SolverError("cannot launch solver command: " + command);
  std::string output;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, got);
  int status = pclose(pipe);

  std::istringstream lines(output);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("s ", 0) != 0) continue;
    std::istringstream ls(line);
    std::string s, verdict;
    ls >> s >> verdict;
    if (verdict == "SATISFIABLE") return true;
    if (verdict == "UNSATISFIABLE") return false;
  }
  throw SolverError("solver produced no verdict (exit status " +
                    std::to_string(status) + "): " + command);
}

}  // namespace

DimacsDocument export_dimacs(const Formula& f) {
  Cnf cnf = CnfBuilder().build(f);
  std::ostringstream out;
  out << "p cnf " << cnf.nvars << " " << cnf.clauses.size() << "\n";
  for (const auto& clause : cnf.clauses) {
    for (int lit : clause) out << lit << " ";
    out << "0\n";
  }
  return DimacsDocument{out.str(), std::move(cnf.var_map)};
}

bool SatBackend::is_consistent(const Formula& f) {
  ++calls_;
  if (!command_.empty()) return run_external(command_, f);
  Cnf cnf = CnfBuilder().build(f);
  return Solver(cnf).solve();
}

bool SatBackend::entails(const Formula& f, const Formula& g) {
  return !is_consistent(Formula::conj(f, Formula::negate(g)));
}

bool SatBackend::equivalent(const Formula& f, const Formula& g) {
  return entails(f, g) && entails(g, f);
}

}  // namespace doxa
