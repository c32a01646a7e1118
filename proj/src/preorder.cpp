#include "doxa/preorder.hpp"

#include <utility>

namespace doxa {

const char* to_keyword(OpKind kind) {
  switch (kind) {
    case OpKind::Lex: return "lex";
    case OpKind::Refi: return "refi";
    case OpKind::Sev: return "sev";
    case OpKind::Nat: return "nat";
    case OpKind::Res: return "res";
    case OpKind::Rad: return "rad";
    case OpKind::Sevr: return "sevr";
    case OpKind::Msev: return "msev";
    case OpKind::Psev: return "psev";
    case OpKind::Full: return "full";
  }
  return "?";
}

std::optional<OpKind> op_kind_from_keyword(std::string_view keyword) {
  static const std::pair<std::string_view, OpKind> table[] = {
      {"lex", OpKind::Lex},   {"refi", OpKind::Refi}, {"sev", OpKind::Sev},
      {"nat", OpKind::Nat},   {"res", OpKind::Res},   {"rad", OpKind::Rad},
      {"sevr", OpKind::Sevr}, {"msev", OpKind::Msev}, {"psev", OpKind::Psev},
      {"full", OpKind::Full}};
  for (const auto& [kw, kind] : table)
    if (kw == keyword) return kind;
  return std::nullopt;
}

TotalPreorder::TotalPreorder(Alphabet alphabet, std::vector<ModelSet> classes)
    : alphabet_(std::move(alphabet)), classes_(std::move(classes)) {
  ModelSet seen = ModelSet::none(alphabet_);
  for (const auto& cls : classes_) {
    if (cls.alphabet() != alphabet_)
      throw DomainError("preorder class over a different alphabet");
    if (seen.intersects(cls))
      throw DomainError("preorder classes are not pairwise disjoint");
    seen = seen | cls;
  }
  if (seen != ModelSet::all(alphabet_))
    throw DomainError("preorder classes do not cover every interpretation");
}

TotalPreorder empty_preorder(const Alphabet& alphabet, std::size_t var_cap) {
  if (alphabet.size() > var_cap)
    throw DomainError("alphabet of " + std::to_string(alphabet.size()) +
                      " variables exceeds the enumeration cap of " + std::to_string(var_cap));
  return TotalPreorder(alphabet, {ModelSet::all(alphabet)});
}

ModelSet min_models(const TotalPreorder& c, const Formula& p) {
  ModelSet mp = enumerate_models(p, c.alphabet(), c.alphabet().size());
  for (const auto& cls : c.classes()) {
    ModelSet hit = cls & mp;
    if (!hit.empty()) return hit;
  }
  return ModelSet::none(c.alphabet());  // p inconsistent
}

ModelSet base_models(const TotalPreorder& c) {
  for (const auto& cls : c.classes())
    if (!cls.empty()) return cls;
  return ModelSet::none(c.alphabet());
}

TotalPreorder normalize(const TotalPreorder& c) {
  std::vector<ModelSet> kept;
  for (const auto& cls : c.classes())
    if (!cls.empty()) kept.push_back(cls);
  if (kept.empty()) kept.push_back(ModelSet::all(c.alphabet()));  // empty universe
  return TotalPreorder(c.alphabet(), std::move(kept));
}

bool equivalent_preorders(const TotalPreorder& a, const TotalPreorder& b) {
  if (a.alphabet() != b.alphabet())
    throw DomainError("cannot compare preorders over different alphabets");
  return normalize(a).classes() == normalize(b).classes();
}

namespace {

// Least class index whose intersection with `mp` is non-empty. The caller
// guarantees mp is non-empty, so some class must hit it.
std::size_t min_class_index(const TotalPreorder& c, const ModelSet& mp) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.class_at(i).intersects(mp)) return i;
  throw DomainError("no class intersects a non-empty model set (broken partition)");
}

ModelSet union_prefix(const TotalPreorder& c, std::size_t upto_inclusive) {
  ModelSet u = ModelSet::none(c.alphabet());
  for (std::size_t k = 0; k <= upto_inclusive; ++k) u = u | c.class_at(k);
  return u;
}

}  // namespace

TotalPreorder apply(const TotalPreorder& c, const ChangeOp& op) {
  const Alphabet& a = c.alphabet();
  ModelSet mp = enumerate_models(op.formula, a, a.size());
  if (mp.empty())
    throw DomainError(std::string("inconsistent formula for operator ") + to_keyword(op.kind));

  const std::size_t m = c.size();
  std::vector<ModelSet> out;

  switch (op.kind) {
    case OpKind::Lex: {
      // All models of P first, all others after, both in the original order.
      for (std::size_t k = 0; k < m; ++k) out.push_back(c.class_at(k) & mp);
      for (std::size_t k = 0; k < m; ++k) out.push_back(c.class_at(k) - mp);
      break;
    }
    case OpKind::Refi: {
      // Split every class by P in place; order between classes unchanged.
      for (std::size_t k = 0; k < m; ++k) {
        out.push_back(c.class_at(k) & mp);
        out.push_back(c.class_at(k) - mp);
      }
      break;
    }
    case OpKind::Sev: {
      // Merge every class up to the first one compatible with P.
      std::size_t i = min_class_index(c, mp);
      out.push_back(union_prefix(c, i));
      for (std::size_t k = i + 1; k < m; ++k) out.push_back(c.class_at(k));
      break;
    }
    case OpKind::Nat: {
      // Cut the minimal models of P out and put them first.
      std::size_t i = min_class_index(c, mp);
      out.push_back(c.class_at(i) & mp);
      for (std::size_t k = 0; k < i; ++k) out.push_back(c.class_at(k));
      out.push_back(c.class_at(i) - mp);
      for (std::size_t k = i + 1; k < m; ++k) out.push_back(c.class_at(k));
      break;
    }
    case OpKind::Res: {
      // Minimal models of P first, then every class split by P, keeping the
      // remainder of the minimal class in its original position.
      std::size_t i = min_class_index(c, mp);
      out.push_back(c.class_at(i) & mp);
      for (std::size_t k = 0; k < i; ++k) {
        out.push_back(c.class_at(k) & mp);
        out.push_back(c.class_at(k) - mp);
      }
      out.push_back(c.class_at(i) - mp);
      for (std::size_t k = i + 1; k < m; ++k) {
        out.push_back(c.class_at(k) & mp);
        out.push_back(c.class_at(k) - mp);
      }
      break;
    }
    case OpKind::Rad: {
      // Models of P keep their relative order; everything else goes last.
      for (std::size_t k = 0; k < m; ++k) out.push_back(c.class_at(k) & mp);
      out.push_back(union_prefix(c, m - 1) - mp);
      break;
    }
    case OpKind::Sevr: {
      // Minimal models of P first, the rest of the merged prefix second.
      std::size_t i = min_class_index(c, mp);
      out.push_back(c.class_at(i) & mp);
      out.push_back(union_prefix(c, i) - mp);
      for (std::size_t k = i + 1; k < m; ++k) out.push_back(c.class_at(k));
      break;
    }
    case OpKind::Msev: {
      // Models of P in order, then the merged prefix remainder, then the
      // remaining classes without their models of P.
      std::size_t i = min_class_index(c, mp);
      for (std::size_t k = 0; k < m; ++k) out.push_back(c.class_at(k) & mp);
      out.push_back(union_prefix(c, i) - mp);
      for (std::size_t k = i + 1; k < m; ++k) out.push_back(c.class_at(k) - mp);
      break;
    }
    case OpKind::Psev: {
      // Minimal models of P first; one class absorbing everything up to the
      // next non-empty class; the remaining classes unchanged.
      std::size_t i = min_class_index(c, mp);
      std::size_t j = i + 1;
      while (j < m && c.class_at(j).empty()) ++j;
      if (j == m) j = i + 1;  // no later non-empty class: fall back
      ModelSet second = (i == 0) ? ModelSet::none(a) : union_prefix(c, i - 1);
      second = second | (c.class_at(i) - mp);
      if (j < m) second = second | c.class_at(j);
      out.push_back(c.class_at(i) & mp);
      out.push_back(second);
      for (std::size_t k = j + 1; k < m; ++k) out.push_back(c.class_at(k));
      break;
    }
    case OpKind::Full: {
      // Memoryless: minimal models of P against everything else.
      std::size_t i = min_class_index(c, mp);
      ModelSet first = c.class_at(i) & mp;
      out.push_back(first);
      out.push_back(first.complement());
      break;
    }
  }
  return TotalPreorder(a, std::move(out));
}

TotalPreorder run_sequence_oracle(const ChangeSequence& seq, std::size_t var_cap,
                                  std::vector<TotalPreorder>* trace) {
  TotalPreorder c = empty_preorder(seq.alphabet, var_cap);
  for (const auto& op : seq.ops) {
    c = apply(c, op);
    if (trace) trace->push_back(c);
  }
  return c;
}

bool is_bottom_refining_instance(const TotalPreorder& c, const Formula& p, OpKind kind) {
  ModelSet mp = enumerate_models(p, c.alphabet(), c.alphabet().size());
  if (c.size() == 0 || (c.class_at(0) & mp).empty())
    throw DomainError("bottom-refining check requires models of the formula in class 0");
  TotalPreorder r = apply(c, ChangeOp{kind, p});
  ModelSet want0 = c.class_at(0) & mp;
  ModelSet want1 = c.class_at(0) - mp;
  const ModelSet& got0 = r.class_at(0);
  ModelSet got1 = r.size() > 1 ? r.class_at(1) : ModelSet::none(c.alphabet());
  return got0 == want0 && got1 == want1;
}

}  // namespace doxa
