#include "chr/ast.hpp"

#include <unordered_map>

namespace chr {

std::vector<Term> ChrRule::heads() const {
  std::vector<Term> out = kept;
  out.insert(out.end(), removed.begin(), removed.end());
  return out;
}

std::string pred_key(const Term& atom) {
  return atom->name + "/" + std::to_string(atom->args.size());
}

bool priority_is_static(const Term& p) { return p->ground; }

namespace {

bool alpha_rec(const Term& a, const Term& b,
               std::unordered_map<std::int64_t, std::int64_t>& fwd,
               std::unordered_map<std::int64_t, std::int64_t>& bwd) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Var: {
      auto f = fwd.find(a->value);
      auto g = bwd.find(b->value);
      if (f == fwd.end() && g == bwd.end()) {
        fwd.emplace(a->value, b->value);
        bwd.emplace(b->value, a->value);
        return true;
      }
      return f != fwd.end() && g != bwd.end() && f->second == b->value &&
             g->second == a->value;
    }
    case TermKind::Int:
      return a->value == b->value;
    case TermKind::Compound:
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i) {
        if (!alpha_rec(a->args[i], b->args[i], fwd, bwd)) return false;
      }
      return true;
  }
  return false;
}

Term wrap_cmp(const Comparison& c) {
  return mk_compound(std::string("cmp") + cmp_symbol(c.op), {c.lhs, c.rhs});
}

Term wrap_body(const BodyItem& b) {
  if (b.kind == BodyItem::Kind::Tell) return mk_compound("tell", {b.lhs, b.rhs});
  return mk_compound("atom", {b.atom});
}

}  // namespace

bool alpha_equal(const std::vector<Term>& a, const std::vector<Term>& b) {
  if (a.size() != b.size()) return false;
  std::unordered_map<std::int64_t, std::int64_t> fwd, bwd;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!alpha_rec(a[i], b[i], fwd, bwd)) return false;
  }
  return true;
}

std::vector<Term> flatten(const LARule& r) {
  std::vector<Term> out{mk_atom(r.name), mk_compound("prio", {r.priority})};
  for (const auto& a : r.antecedents) {
    switch (a.kind) {
      case LAAntecedent::Kind::Positive:
        out.push_back(mk_compound("pos", {a.atom}));
        break;
      case LAAntecedent::Kind::Negative:
        out.push_back(mk_compound("neg", {a.atom}));
        break;
      case LAAntecedent::Kind::Compare:
        out.push_back(wrap_cmp(a.cmp));
        break;
    }
  }
  out.push_back(mk_atom("=>"));
  for (const auto& c : r.conclusions) {
    out.push_back(mk_compound(c.del ? "neg" : "pos", {c.atom}));
  }
  return out;
}

std::vector<Term> flatten(const ChrRule& r) {
  std::vector<Term> out{mk_atom(r.name), mk_compound("prio", {r.priority})};
  for (const auto& h : r.kept) out.push_back(mk_compound("kept", {h}));
  for (const auto& h : r.removed) out.push_back(mk_compound("removed", {h}));
  for (const auto& g : r.guard) out.push_back(wrap_cmp(g));
  out.push_back(mk_atom("|"));
  for (const auto& b : r.body) out.push_back(wrap_body(b));
  return out;
}

bool ast_equal(const LARule& a, const LARule& b) {
  return alpha_equal(flatten(a), flatten(b));
}

bool ast_equal(const ChrRule& a, const ChrRule& b) {
  return alpha_equal(flatten(a), flatten(b));
}

bool ast_equal(const LAProgram& a, const LAProgram& b) {
  if (a.rules.size() != b.rules.size()) return false;
  for (std::size_t i = 0; i < a.rules.size(); ++i) {
    if (!ast_equal(a.rules[i], b.rules[i])) return false;
  }
  return true;
}

bool ast_equal(const ChrProgram& a, const ChrProgram& b) {
  if (a.rules.size() != b.rules.size()) return false;
  for (std::size_t i = 0; i < a.rules.size(); ++i) {
    if (!ast_equal(a.rules[i], b.rules[i])) return false;
  }
  return true;
}

std::vector<Term> vars_of(const LARule& r) {
  std::vector<Term> out;
  for (const auto& t : flatten(r)) collect_vars(t, out);
  return out;
}

std::vector<Term> vars_of(const ChrRule& r) {
  std::vector<Term> out;
  for (const auto& t : flatten(r)) collect_vars(t, out);
  return out;
}

}  // namespace chr
