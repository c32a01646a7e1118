#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "doxa/cli.hpp"

namespace {

struct Invocation {
  std::string file;
  doxa::CliOptions options;
};

// Attaches the shared flag set to one subcommand.
void add_common_options(CLI::App* cmd, Invocation& inv) {
  cmd->add_option("--file", inv.file, "sequence file to load")->required();
  cmd->add_flag("--json", inv.options.json, "machine-readable JSON output");
  cmd->add_option("--oracle-cap", inv.options.oracle_cap,
                  "variable limit for explicit model enumeration");
  cmd->add_option("--solver", inv.options.solver,
                  "external SAT solver command; '{}' is replaced by the CNF path")
      ->envname("DOXA_SOLVER");
  cmd->add_option("--jobs", inv.options.jobs, "worker threads for independent queries");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"belief change engine: bases and entailments after operator sequences"};
  app.require_subcommand(1);

  Invocation inv;
  using Command = int (*)(const doxa::SequenceDocument&, const doxa::CliOptions&,
                          std::ostream&);
  struct Entry {
    const char* name;
    const char* help;
    Command run;
  };
  const Entry entries[] = {
      {"base", "print the belief base after the whole sequence", doxa::cmd_base},
      {"entails", "check each '?' query against the final base", doxa::cmd_entails},
      {"trace", "print the base after every step, with underformulae", doxa::cmd_trace},
      {"expand", "print the lex/refi/sev core form of the sequence", doxa::cmd_expand},
      {"oracle", "print explicit plausibility classes after every step", doxa::cmd_oracle},
      {"compare", "cross-check the symbolic engine against the oracle", doxa::cmd_compare},
      {"stats", "print sequence size and SAT call counters", doxa::cmd_stats},
  };
  for (const Entry& e : entries) add_common_options(app.add_subcommand(e.name, e.help), inv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? doxa::kExitOk : doxa::kExitUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    doxa::SequenceDocument doc = doxa::load_document(inv.file);
    for (const Entry& e : entries)
      if (name == e.name) return e.run(doc, inv.options, std::cout);
    std::cerr << "unknown command '" << name << "'\n";
    return doxa::kExitUsage;
  } catch (const doxa::ParseError& e) {
    std::cerr << inv.file << ":" << e.line << ":" << e.column << ": " << e.what() << "\n";
    return doxa::kExitUsage;
  } catch (const doxa::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return doxa::kExitEngine;
  } catch (const doxa::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return doxa::kExitEngine;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return doxa::kExitEngine;
  }
}
