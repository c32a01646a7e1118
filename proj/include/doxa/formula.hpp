#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace doxa {

// Default upper bound on alphabet size for anything that enumerates all
// interpretations (the explicit-preorder oracle). 2^20 bits per model set.
inline constexpr std::size_t kDefaultVarCap = 20;

// A formula or document that cannot be parsed. Positions are 1-based;
// what() carries the bare message, callers prepend file/line/column.
struct ParseError : std::runtime_error {
  std::size_t line;
  std::size_t column;
  ParseError(const std::string& message, std::size_t line_, std::size_t column_)
      : std::runtime_error(message), line(line_), column(column_) {}
};

// Semantic misuse: undeclared variables, alphabet mismatches, inconsistent
// operator formulas, violated preconditions, exceeded enumeration caps.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// External solver process failure — distinct from an UNSAT verdict.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ordered list of distinct propositional variable names.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t index) const { return names_.at(index); }
  const std::vector<std::string>& names() const { return names_; }
  // Position of `name`, or npos when undeclared.
  std::size_t index_of(const std::string& name) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  bool operator==(const Alphabet& other) const { return names_ == other.names_; }
  bool operator!=(const Alphabet& other) const { return !(*this == other); }

 private:
  std::vector<std::string> names_;
};

enum class Conn : std::uint8_t { Var, True, False, Not, And, Or, Imp, Iff };

// Immutable propositional formula. Copies share structure, so equal subtrees
// created once stay one node — consumers may cache per node address.
class Formula {
 public:
  struct Node {
    Conn kind;
    std::string var;              // Conn::Var only
    std::vector<Formula> kids;    // connective operands
  };

  Formula() : Formula(verum()) {}

  static Formula var(std::string name);
  static Formula verum();
  static Formula falsum();
  static Formula negate(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula conj(std::vector<Formula> fs);  // n-ary; empty = verum
  static Formula disj(std::vector<Formula> fs);  // n-ary; empty = falsum
  static Formula implies(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);

  Conn kind() const { return node_->kind; }
  const std::string& var_name() const { return node_->var; }
  const std::vector<Formula>& operands() const { return node_->kids; }
  const Node* address() const { return node_.get(); }

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Conn kind, std::string var, std::vector<Formula> kids);
  std::shared_ptr<const Node> node_;
};

// Grammar (precedence low to high, "->" right-associative):
//   formula := iff
//   iff     := imp ("<->" imp)*
//   imp     := or ("->" imp)?
//   or      := and ("|" and)*
//   and     := not ("&" not)*
//   not     := "!" not | atom
//   atom    := IDENT | "T" | "F" | "(" formula ")"
// Throws ParseError (position within `text`, line counted from 1) on syntax
// errors and on variables missing from `alphabet` (named in the message).
Formula parse_formula(const std::string& text, const Alphabet& alphabet);

// Rendering with minimal parentheses; parse_formula(to_string(f)) == shape of f.
std::string to_string(const Formula& f);

// One total truth assignment over an alphabet. Bit k of `index` is the value
// of variable k in alphabet order; the empty alphabet has the single index 0.
class Interpretation {
 public:
  Interpretation(Alphabet alphabet, std::uint32_t index)
      : alphabet_(std::move(alphabet)), index_(index) {}

  const Alphabet& alphabet() const { return alphabet_; }
  std::uint32_t index() const { return index_; }
  bool value(std::size_t var_index) const { return (index_ >> var_index) & 1u; }
  bool value(const std::string& name) const;

 private:
  Alphabet alphabet_;
  std::uint32_t index_;
};

// Finite set of interpretations over one alphabet, stored as a bitset over
// all 2^n interpretation indices.
class ModelSet {
 public:
  static ModelSet none(const Alphabet& alphabet);
  static ModelSet all(const Alphabet& alphabet);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t universe_size() const { return std::size_t{1} << alphabet_.size(); }

  bool contains(std::uint32_t index) const;
  void insert(std::uint32_t index);
  std::size_t count() const;
  bool empty() const;
  bool intersects(const ModelSet& other) const;

  ModelSet operator&(const ModelSet& other) const;
  ModelSet operator|(const ModelSet& other) const;
  ModelSet operator-(const ModelSet& other) const;
  ModelSet complement() const;
  bool operator==(const ModelSet& other) const;
  bool operator!=(const ModelSet& other) const { return !(*this == other); }

  std::vector<Interpretation> members() const;

 private:
  explicit ModelSet(Alphabet alphabet);
  void check_same_alphabet(const ModelSet& other) const;

  Alphabet alphabet_;
  std::vector<std::uint64_t> bits_;
};

// All models of f over the alphabet, by exhaustive evaluation (shared
// subtrees evaluated once). Throws DomainError when the alphabet exceeds
// `var_cap` or when f mentions a variable outside the alphabet.
ModelSet enumerate_models(const Formula& f, const Alphabet& alphabet,
                          std::size_t var_cap = kDefaultVarCap);

// Unsimplified minterm disjunction, one complete conjunction per model;
// the empty set yields the constant false. enumerate_models round-trips.
Formula formula_of_models(const ModelSet& models);

}  // namespace doxa
