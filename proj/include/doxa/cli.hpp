#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "doxa/reduce.hpp"

namespace doxa {

// A parsed sequence file: one alphabet declaration, the operator lines in
// order, and any entailment query lines, with source lines for diagnostics.
struct SequenceDocument {
  ChangeSequence sequence;
  std::vector<std::size_t> op_lines;     // 1-based source line per op
  std::vector<Formula> queries;
  std::vector<std::size_t> query_lines;  // 1-based source line per query
};

// File format, line oriented; blank lines and whole-line # comments ignored:
//   vars x y z          first non-comment line: the alphabet
//   lex: y              one operator per line, "<kind>: <formula>"
//   ? x & y             optional entailment queries against the final base
// Throws ParseError (with file line/column) or DomainError as appropriate.
SequenceDocument parse_document(std::istream& in, const std::string& name);
SequenceDocument load_document(const std::string& path);

struct CliOptions {
  bool json = false;
  std::size_t oracle_cap = kDefaultVarCap;
  std::string solver;  // external solver command; empty = builtin
  unsigned jobs = 1;   // concurrent evaluation of independent queries
};

// Exit codes shared by every command: 0 success, 1 usage/parse error,
// 2 engine error, 3 entailment assertion failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitEngine = 2;
inline constexpr int kExitEntailment = 3;

int cmd_base(const SequenceDocument& doc, const CliOptions& opt, std::ostream& out);
int cmd_entails(const SequenceDocument& doc, const CliOptions& opt, std::ostream& out);
int cmd_trace(const SequenceDocument& doc, const CliOptions& opt, std::ostream& out);
int cmd_expand(const SequenceDocument& doc, const CliOptions& opt, std::ostream& out);
int cmd_oracle(const SequenceDocument& doc, const CliOptions& opt, std::ostream& out);
int cmd_compare(const SequenceDocument& doc, const CliOptions& opt, std::ostream& out);
int cmd_stats(const SequenceDocument& doc, const CliOptions& opt, std::ostream& out);

}  // namespace doxa
