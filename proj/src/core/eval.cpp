#include "chr/eval.hpp"

namespace chr {

const char* cmp_symbol(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "=<";
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "\\=";
  }
  return "?";
}

std::string to_string(const Comparison& c) {
  return to_string(c.lhs) + " " + cmp_symbol(c.op) + " " + to_string(c.rhs);
}

bool comparison_equal(const Comparison& a, const Comparison& b) {
  return a.op == b.op && term_equal(a.lhs, b.lhs) && term_equal(a.rhs, b.rhs);
}

Comparison apply(const Substitution& s, const Comparison& c) {
  return {c.op, s.apply(c.lhs), s.apply(c.rhs)};
}

void collect_vars(const Comparison& c, std::vector<Term>& out) {
  collect_vars(c.lhs, out);
  collect_vars(c.rhs, out);
}

namespace {

std::int64_t checked(bool overflow, const std::int64_t& v) {
  if (overflow) throw EvalError("integer overflow");
  return v;
}

std::int64_t eval_resolved(const Term& t) {
  switch (t->kind) {
    case TermKind::Int:
      return t->value;
    case TermKind::Var:
      throw EvalError("unbound variable " + t->name + " in arithmetic");
    case TermKind::Compound:
      break;
  }
  if (!is_arith(t)) {
    throw EvalError("not an arithmetic expression: " + to_string(t));
  }
  std::int64_t r = 0;
  if (t->args.size() == 1) {
    std::int64_t a = eval_resolved(t->args[0]);
    return checked(__builtin_sub_overflow(std::int64_t{0}, a, &r), r);
  }
  std::int64_t a = eval_resolved(t->args[0]);
  std::int64_t b = eval_resolved(t->args[1]);
  switch (t->name[0]) {
    case '+': return checked(__builtin_add_overflow(a, b, &r), r);
    case '-': return checked(__builtin_sub_overflow(a, b, &r), r);
    default: return checked(__builtin_mul_overflow(a, b, &r), r);
  }
}

Term fold(const Term& t) {
  if (!is_compound(t) || t->args.empty()) return t;
  if (is_arith(t) && t->ground) return mk_int(eval_resolved(t));
  std::vector<Term> args;
  args.reserve(t->args.size());
  bool changed = false;
  for (const auto& a : t->args) {
    args.push_back(fold(a));
    changed = changed || args.back().get() != a.get();
  }
  if (!changed) return t;
  return mk_compound(t->name, std::move(args));
}

bool has_var(const Term& t) { return !t->ground; }

bool contains_arith(const Term& t) {
  if (!is_compound(t)) return false;
  if (is_arith(t)) return true;
  for (const auto& a : t->args) {
    if (contains_arith(a)) return true;
  }
  return false;
}

Tri eval_resolved_cmp(CmpOp op, const Term& l0, const Term& r0,
                      const BuiltinStore* store) {
  Term l = fold(l0);
  Term r = fold(r0);
  if (op == CmpOp::Lt || op == CmpOp::Le) {
    if (has_var(l) || has_var(r)) return Tri::Unknown;
    if (!is_int(l) || !is_int(r)) return Tri::Disentailed;
    bool holds = op == CmpOp::Lt ? l->value < r->value : l->value <= r->value;
    return holds ? Tri::Entailed : Tri::Disentailed;
  }
  bool eq;
  if (term_equal(l, r)) {
    eq = true;
  } else {
    // Not syntactically equal: decided only if no unifier exists.
    if (has_var(l) || has_var(r)) {
      if (contains_arith(l) || contains_arith(r)) return Tri::Unknown;
      bool unifiable;
      if (store) {
        BuiltinStore copy = *store;
        unifiable = copy.unify(l, r);
      } else {
        unifiable = mgu(l, r).has_value();
      }
      if (unifiable) return Tri::Unknown;
    }
    eq = false;
  }
  if (op == CmpOp::Eq) return eq ? Tri::Entailed : Tri::Disentailed;
  return eq ? Tri::Disentailed : Tri::Entailed;
}

}  // namespace

std::int64_t eval_arith(const Term& expr, const BuiltinStore& store) {
  return eval_resolved(store.resolve(expr));
}

std::int64_t eval_arith(const Term& expr) { return eval_resolved(expr); }

Term normalize_arith(const Term& t, const BuiltinStore& store) {
  return fold(store.resolve(t));
}

Term normalize_arith(const Term& t) { return fold(t); }

Tri eval_comparison(const Comparison& c, const BuiltinStore& store) {
  return eval_resolved_cmp(c.op, store.resolve(c.lhs), store.resolve(c.rhs),
                           &store);
}

Tri eval_comparison(const Comparison& c) {
  return eval_resolved_cmp(c.op, c.lhs, c.rhs, nullptr);
}

bool maybe_satisfiable(const Comparison& c) {
  Term l = fold(c.lhs);
  Term r = fold(c.rhs);
  if (term_equal(l, r)) return c.op != CmpOp::Lt && c.op != CmpOp::Ne;
  if (l->ground && r->ground) {
    return eval_resolved_cmp(c.op, l, r, nullptr) == Tri::Entailed;
  }
  if (c.op == CmpOp::Eq) return mgu(l, r).has_value();
  return true;
}

}  // namespace chr
