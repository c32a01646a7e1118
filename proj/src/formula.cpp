#include "doxa/formula.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <unordered_set>
#include <utility>

namespace doxa {

// --- Alphabet ---

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw DomainError("alphabet contains an empty variable name");
    if (!seen.insert(n).second)
      throw DomainError("alphabet contains duplicate variable '" + n + "'");
  }
}

std::size_t Alphabet::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? npos : static_cast<std::size_t>(it - names_.begin());
}

// --- Formula builders ---

Formula Formula::make(Conn kind, std::string var, std::vector<Formula> kids) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->var = std::move(var);
  node->kids = std::move(kids);
  return Formula(std::shared_ptr<const Node>(std::move(node)));
}

Formula Formula::var(std::string name) { return make(Conn::Var, std::move(name), {}); }
Formula Formula::verum() { return make(Conn::True, {}, {}); }
Formula Formula::falsum() { return make(Conn::False, {}, {}); }
Formula Formula::negate(Formula f) { return make(Conn::Not, {}, {std::move(f)}); }
Formula Formula::conj(Formula a, Formula b) {
  return make(Conn::And, {}, {std::move(a), std::move(b)});
}
Formula Formula::disj(Formula a, Formula b) {
  return make(Conn::Or, {}, {std::move(a), std::move(b)});
}
Formula Formula::conj(std::vector<Formula> fs) {
  if (fs.empty()) return verum();
  if (fs.size() == 1) return fs.front();
  return make(Conn::And, {}, std::move(fs));
}
Formula Formula::disj(std::vector<Formula> fs) {
  if (fs.empty()) return falsum();
  if (fs.size() == 1) return fs.front();
  return make(Conn::Or, {}, std::move(fs));
}
Formula Formula::implies(Formula a, Formula b) {
  return make(Conn::Imp, {}, {std::move(a), std::move(b)});
}
Formula Formula::iff(Formula a, Formula b) {
  return make(Conn::Iff, {}, {std::move(a), std::move(b)});
}

// --- Parser ---

namespace {

enum class Tok { Ident, True, False, Not, And, Or, Imp, Iff, LParen, RParen, End };

struct Lexer {
  const std::string& text;
  std::size_t pos = 0;
  Tok tok = Tok::End;
  std::string ident;
  std::size_t tok_pos = 0;  // offset of current token

  explicit Lexer(const std::string& t) : text(t) { advance(); }

  [[noreturn]] void fail(const std::string& message, std::size_t at) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < text.size(); ++i) {
      if (text[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
    throw ParseError(message, line, col);
  }

  void advance() {
    while (pos < text.size() &&
           (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r' || text[pos] == '\n'))
      ++pos;
    tok_pos = pos;
    if (pos >= text.size()) { tok = Tok::End; return; }
    char c = text[pos];
    if (c == '(') { tok = Tok::LParen; ++pos; return; }
    if (c == ')') { tok = Tok::RParen; ++pos; return; }
    if (c == '!') { tok = Tok::Not; ++pos; return; }
    if (c == '&') { tok = Tok::And; ++pos; return; }
    if (c == '|') { tok = Tok::Or; ++pos; return; }
    if (c == '-') {
      if (pos + 1 < text.size() && text[pos + 1] == '>') { tok = Tok::Imp; pos += 2; return; }
      fail("expected '->'", pos);
    }
    if (c == '<') {
      if (pos + 2 < text.size() && text[pos + 1] == '-' && text[pos + 2] == '>') {
        tok = Tok::Iff; pos += 3; return;
      }
      fail("expected '<->'", pos);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
        ++pos;
      ident = text.substr(start, pos - start);
      if (ident == "T") tok = Tok::True;
      else if (ident == "F") tok = Tok::False;
      else tok = Tok::Ident;
      return;
    }
    fail(std::string("unexpected character '") + c + "'", pos);
  }
};

struct Parser {
  Lexer lex;
  const Alphabet& alphabet;

  Parser(const std::string& text, const Alphabet& a) : lex(text), alphabet(a) {}

  Formula parse() {
    Formula f = parse_iff();
    if (lex.tok != Tok::End) lex.fail("unexpected trailing input", lex.tok_pos);
    return f;
  }

  Formula parse_iff() {
    Formula f = parse_imp();
    while (lex.tok == Tok::Iff) {
      lex.advance();
      f = Formula::iff(std::move(f), parse_imp());
    }
    return f;
  }

  Formula parse_imp() {
    Formula f = parse_or();
    if (lex.tok == Tok::Imp) {
      lex.advance();
      f = Formula::implies(std::move(f), parse_imp());  // right-associative
    }
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (lex.tok == Tok::Or) {
      lex.advance();
      f = Formula::disj(std::move(f), parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_not();
    while (lex.tok == Tok::And) {
      lex.advance();
      f = Formula::conj(std::move(f), parse_not());
    }
    return f;
  }

  Formula parse_not() {
    if (lex.tok == Tok::Not) {
      lex.advance();
      return Formula::negate(parse_not());
    }
    return parse_atom();
  }

  Formula parse_atom() {
    switch (lex.tok) {
      case Tok::True: lex.advance(); return Formula::verum();
      case Tok::False: lex.advance(); return Formula::falsum();
      case Tok::Ident: {
        std::string name = lex.ident;
        if (alphabet.index_of(name) == Alphabet::npos)
          lex.fail("undeclared variable '" + name + "'", lex.tok_pos);
        lex.advance();
        return Formula::var(std::move(name));
      }
      case Tok::LParen: {
        lex.advance();
        Formula f = parse_iff();
        if (lex.tok != Tok::RParen) lex.fail("expected ')'", lex.tok_pos);
        lex.advance();
        return f;
      }
      case Tok::End: lex.fail("unexpected end of input", lex.tok_pos);
      default: lex.fail("expected a formula", lex.tok_pos);
    }
  }
};

}  // namespace

Formula parse_formula(const std::string& text, const Alphabet& alphabet) {
  return Parser(text, alphabet).parse();
}

// --- Printer ---

namespace {

// Binding strength: higher binds tighter. Parentheses are emitted when a
// child binds strictly looser than its context requires.
int level_of(Conn k) {
  switch (k) {
    case Conn::Iff: return 1;
    case Conn::Imp: return 2;
    case Conn::Or: return 3;
    case Conn::And: return 4;
    case Conn::Not: return 5;
    default: return 6;
  }
}

void print(const Formula& f, int context, std::string& out) {
  int mine = level_of(f.kind());
  bool parens = mine < context;
  if (parens) out += '(';
  switch (f.kind()) {
    case Conn::Var: out += f.var_name(); break;
    case Conn::True: out += 'T'; break;
    case Conn::False: out += 'F'; break;
    case Conn::Not:
      out += '!';
      print(f.operands()[0], 5, out);
      break;
    case Conn::And:
    case Conn::Or: {
      const char* sep = f.kind() == Conn::And ? " & " : " | ";
      for (std::size_t i = 0; i < f.operands().size(); ++i) {
        if (i) out += sep;
        print(f.operands()[i], mine, out);
      }
      break;
    }
    case Conn::Imp:
      print(f.operands()[0], 3, out);  // left side must be an or-level term
      out += " -> ";
      print(f.operands()[1], 2, out);  // right-associative
      break;
    case Conn::Iff:
      print(f.operands()[0], 1, out);  // left-associative chain
      out += " <-> ";
      print(f.operands()[1], 2, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

// --- Interpretation ---

bool Interpretation::value(const std::string& name) const {
  std::size_t idx = alphabet_.index_of(name);
  if (idx == Alphabet::npos)
    throw DomainError("variable '" + name + "' is not in the alphabet");
  return value(idx);
}

// --- ModelSet ---

ModelSet::ModelSet(Alphabet alphabet) : alphabet_(std::move(alphabet)) {
  std::size_t n = universe_size();
  bits_.assign((n + 63) / 64, 0);
}

ModelSet ModelSet::none(const Alphabet& alphabet) { return ModelSet(alphabet); }

ModelSet ModelSet::all(const Alphabet& alphabet) {
  ModelSet s(alphabet);
  for (auto& w : s.bits_) w = ~std::uint64_t{0};
  std::size_t tail = s.universe_size() % 64;
  if (tail) s.bits_.back() = (std::uint64_t{1} << tail) - 1;
  return s;
}

bool ModelSet::contains(std::uint32_t index) const {
  return (bits_[index / 64] >> (index % 64)) & 1u;
}

void ModelSet::insert(std::uint32_t index) {
  if (index >= universe_size())
    throw DomainError("interpretation index out of range for the alphabet");
  bits_[index / 64] |= std::uint64_t{1} << (index % 64);
}

std::size_t ModelSet::count() const {
  std::size_t c = 0;
  for (auto w : bits_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool ModelSet::empty() const {
  for (auto w : bits_)
    if (w) return false;
  return true;
}

bool ModelSet::intersects(const ModelSet& other) const {
  check_same_alphabet(other);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] & other.bits_[i]) return true;
  return false;
}

void ModelSet::check_same_alphabet(const ModelSet& other) const {
  if (alphabet_ != other.alphabet_)
    throw DomainError("model sets over different alphabets");
}

ModelSet ModelSet::operator&(const ModelSet& other) const {
  check_same_alphabet(other);
  ModelSet r(*this);
  for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] &= other.bits_[i];
  return r;
}

ModelSet ModelSet::operator|(const ModelSet& other) const {
  check_same_alphabet(other);
  ModelSet r(*this);
  for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] |= other.bits_[i];
  return r;
}

ModelSet ModelSet::operator-(const ModelSet& other) const {
  check_same_alphabet(other);
  ModelSet r(*this);
  for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] &= ~other.bits_[i];
  return r;
}

ModelSet ModelSet::complement() const { return all(alphabet_) - *this; }

bool ModelSet::operator==(const ModelSet& other) const {
  return alphabet_ == other.alphabet_ && bits_ == other.bits_;
}

std::vector<Interpretation> ModelSet::members() const {
  std::vector<Interpretation> out;
  for (std::uint32_t i = 0; i < universe_size(); ++i)
    if (contains(i)) out.emplace_back(alphabet_, i);
  return out;
}

// --- Model enumeration ---

namespace {

ModelSet eval(const Formula& f, const Alphabet& alphabet,
              std::map<const Formula::Node*, ModelSet>& memo) {
  auto it = memo.find(f.address());
  if (it != memo.end()) return it->second;

  ModelSet result = ModelSet::none(alphabet);
  switch (f.kind()) {
    case Conn::Var: {
      std::size_t k = alphabet.index_of(f.var_name());
      if (k == Alphabet::npos)
        throw DomainError("variable '" + f.var_name() + "' is not in the alphabet");
      for (std::uint32_t i = 0; i < result.universe_size(); ++i)
        if ((i >> k) & 1u) result.insert(i);
      break;
    }
    case Conn::True: result = ModelSet::all(alphabet); break;
    case Conn::False: break;
    case Conn::Not: result = eval(f.operands()[0], alphabet, memo).complement(); break;
    case Conn::And: {
      result = ModelSet::all(alphabet);
      for (const auto& k : f.operands()) result = result & eval(k, alphabet, memo);
      break;
    }
    case Conn::Or: {
      for (const auto& k : f.operands()) result = result | eval(k, alphabet, memo);
      break;
    }
    case Conn::Imp:
      result = eval(f.operands()[0], alphabet, memo).complement() |
               eval(f.operands()[1], alphabet, memo);
      break;
    case Conn::Iff: {
      ModelSet a = eval(f.operands()[0], alphabet, memo);
      ModelSet b = eval(f.operands()[1], alphabet, memo);
      result = (a & b) | (a.complement() & b.complement());
      break;
    }
  }
  memo.emplace(f.address(), result);
  return result;
}

}  // namespace

ModelSet enumerate_models(const Formula& f, const Alphabet& alphabet, std::size_t var_cap) {
  if (alphabet.size() > var_cap)
    throw DomainError("alphabet of " + std::to_string(alphabet.size()) +
                      " variables exceeds the enumeration cap of " + std::to_string(var_cap));
  std::map<const Formula::Node*, ModelSet> memo;
  return eval(f, alphabet, memo);
}

Formula formula_of_models(const ModelSet& models) {
  const Alphabet& a = models.alphabet();
  std::vector<Formula> minterms;
  for (std::uint32_t i = 0; i < models.universe_size(); ++i) {
    if (!models.contains(i)) continue;
    std::vector<Formula> lits;
    lits.reserve(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      Formula v = Formula::var(a.name(k));
      lits.push_back(((i >> k) & 1u) ? v : Formula::negate(v));
    }
    minterms.push_back(Formula::conj(std::move(lits)));
  }
  return Formula::disj(std::move(minterms));
}

}  // namespace doxa
