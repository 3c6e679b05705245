#include "chr/store.hpp"

#include <utility>

namespace chr {

std::int64_t BuiltinStore::find(std::int64_t var) const {
  auto it = parent_.find(var);
  if (it == parent_.end()) return var;
  std::int64_t root = var;
  while (true) {
    auto p = parent_.find(root);
    if (p == parent_.end() || p->second == root) break;
    root = p->second;
  }
  // path compression
  std::int64_t cur = var;
  while (cur != root) {
    auto p = parent_.find(cur);
    std::int64_t next = p->second;
    p->second = root;
    cur = next;
  }
  return root;
}

Term BuiltinStore::root_var_term(std::int64_t root,
                                 const Term& fallback) const {
  auto it = root_term_.find(root);
  if (it != root_term_.end()) return it->second;
  return fallback;
}

Term BuiltinStore::deref(const Term& t) const {
  if (!is_var(t)) return t;
  std::int64_t r = find(t->value);
  auto b = binding_.find(r);
  if (b != binding_.end()) return b->second;
  if (r == t->value) return t;
  return root_var_term(r, t);
}

Term BuiltinStore::resolve(const Term& t) const {
  if (t->ground) return t;
  if (is_var(t)) {
    Term d = deref(t);
    if (is_var(d)) return d;
    return resolve(d);
  }
  std::vector<Term> args;
  args.reserve(t->args.size());
  bool changed = false;
  for (const auto& a : t->args) {
    args.push_back(resolve(a));
    changed = changed || args.back().get() != a.get();
  }
  if (!changed) return t;
  return mk_compound(t->name, std::move(args));
}

bool BuiltinStore::unify(const Term& a, const Term& b,
                         std::vector<std::int64_t>* touched) {
  if (failed_) return false;
  ++tells_;
  std::vector<std::pair<Term, Term>> work{{a, b}};
  while (!work.empty()) {
    auto [x0, y0] = work.back();
    work.pop_back();
    Term x = deref(x0);
    Term y = deref(y0);
    if (is_var(x) && is_var(y)) {
      std::int64_t rx = find(x->value), ry = find(y->value);
      if (rx == ry) continue;
      int kx = rank_[rx], ky = rank_[ry];
      if (kx < ky) std::swap(rx, ry), std::swap(x, y);
      parent_[ry] = rx;
      parent_.try_emplace(rx, rx);
      root_term_.try_emplace(rx, x);
      if (kx == ky) rank_[rx] = kx + 1;
      if (touched) touched->push_back(ry);
      continue;
    }
    if (is_var(y)) std::swap(x, y);
    if (is_var(x)) {
      std::int64_t rx = find(x->value);
      if (occurs(rx, resolve(y))) {
        failed_ = true;
        return false;
      }
      binding_[rx] = y;
      if (touched) touched->push_back(rx);
      continue;
    }
    if (x->kind != y->kind) {
      failed_ = true;
      return false;
    }
    if (is_int(x)) {
      if (x->value != y->value) {
        failed_ = true;
        return false;
      }
      continue;
    }
    if (x->name != y->name || x->args.size() != y->args.size()) {
      failed_ = true;
      return false;
    }
    for (std::size_t i = 0; i < x->args.size(); ++i) {
      work.emplace_back(x->args[i], y->args[i]);
    }
  }
  return true;
}

std::optional<BuiltinStore> unify(const Term& a, const Term& b,
                                  const BuiltinStore& store) {
  BuiltinStore copy = store;
  if (!copy.unify(a, b)) return std::nullopt;
  return copy;
}

}  // namespace chr
