#include "chr/term.hpp"

#include <atomic>
#include <sstream>

namespace chr {

namespace {

std::atomic<std::int64_t> g_next_var{1};

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

std::int64_t fresh_var_id() { return g_next_var.fetch_add(1); }

Term mk_var_with_id(std::int64_t id, const std::string& name) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Var;
  n->value = id;
  n->name = name;
  n->hash = mix(0x51, static_cast<std::size_t>(id));
  n->ground = false;
  return n;
}

Term mk_var(const std::string& name) {
  return mk_var_with_id(fresh_var_id(), name);
}

Term mk_int(std::int64_t v) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Int;
  n->value = v;
  n->hash = mix(0x17, static_cast<std::size_t>(v));
  n->ground = true;
  return n;
}

Term mk_compound(const std::string& functor, std::vector<Term> args) {
  auto n = std::make_shared<TermNode>();
  n->kind = TermKind::Compound;
  n->value = 0;
  n->name = functor;
  std::size_t h = mix(std::hash<std::string>{}(functor), args.size());
  bool g = true;
  for (const auto& a : args) {
    h = mix(h, a->hash);
    g = g && a->ground;
  }
  n->args = std::move(args);
  n->hash = h;
  n->ground = g;
  return n;
}

Term mk_atom(const std::string& name) { return mk_compound(name, {}); }

Term mk_list(const std::vector<Term>& items, Term tail) {
  Term acc = tail ? tail : mk_atom("[]");
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    acc = mk_compound(".", {*it, acc});
  }
  return acc;
}

bool is_arith_functor(const std::string& f, std::size_t n) {
  if (n == 2) return f == "+" || f == "-" || f == "*";
  if (n == 1) return f == "-";
  return false;
}

bool is_arith(const Term& t) {
  return is_compound(t) && is_arith_functor(t->name, t->args.size());
}

int compare_terms(const Term& a, const Term& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind) {
    return static_cast<int>(a->kind) < static_cast<int>(b->kind) ? -1 : 1;
  }
  switch (a->kind) {
    case TermKind::Var:
    case TermKind::Int:
      return a->value < b->value ? -1 : (a->value > b->value ? 1 : 0);
    case TermKind::Compound: {
      if (a->args.size() != b->args.size()) {
        return a->args.size() < b->args.size() ? -1 : 1;
      }
      int c = a->name.compare(b->name);
      if (c != 0) return c < 0 ? -1 : 1;
      for (std::size_t i = 0; i < a->args.size(); ++i) {
        int r = compare_terms(a->args[i], b->args[i]);
        if (r != 0) return r;
      }
      return 0;
    }
  }
  return 0;
}

bool term_equal(const Term& a, const Term& b) {
  if (a.get() == b.get()) return true;
  if (a->hash != b->hash) return false;
  return compare_terms(a, b) == 0;
}

void collect_vars(const Term& t, std::vector<Term>& out) {
  if (t->ground) return;
  if (is_var(t)) {
    for (const auto& v : out) {
      if (v->value == t->value) return;
    }
    out.push_back(t);
    return;
  }
  for (const auto& a : t->args) collect_vars(a, out);
}

std::vector<Term> vars_of(const Term& t) {
  std::vector<Term> out;
  collect_vars(t, out);
  return out;
}

bool occurs(std::int64_t var_id, const Term& t) {
  if (t->ground) return false;
  if (is_var(t)) return t->value == var_id;
  for (const auto& a : t->args) {
    if (occurs(var_id, a)) return true;
  }
  return false;
}

namespace {

int precedence(const Term& t) {
  if (!is_arith(t)) return 0;
  if (t->args.size() == 1) return 1;
  return t->name == "*" ? 2 : 3;
}

bool is_list_cell(const Term& t) {
  return is_compound(t) && t->name == "." && t->args.size() == 2;
}

void print(std::ostream& os, const Term& t);

void print_operand(std::ostream& os, const Term& t, int max_prec) {
  bool neg_int = is_int(t) && t->value < 0;
  if (precedence(t) > max_prec || (neg_int && max_prec < 3) || max_prec < 0) {
    os << '(';
    print(os, t);
    os << ')';
  } else {
    print(os, t);
  }
}

void print(std::ostream& os, const Term& t) {
  switch (t->kind) {
    case TermKind::Var:
      os << t->name;
      return;
    case TermKind::Int:
      os << t->value;
      return;
    case TermKind::Compound:
      break;
  }
  if (is_arith(t)) {
    if (t->args.size() == 1) {
      os << '-';
      // "-3" would read back as a negative literal
      print_operand(os, t->args[0], is_int(t->args[0]) ? -1 : 1);
      return;
    }
    int p = precedence(t);
    print_operand(os, t->args[0], p);
    os << t->name;
    // right operand binds tighter for left-associative operators
    print_operand(os, t->args[1], p - 1);
    return;
  }
  if (is_list_cell(t) || (is_atom(t) && t->name == "[]")) {
    os << '[';
    Term cur = t;
    bool first = true;
    while (is_list_cell(cur)) {
      if (!first) os << ',';
      print(os, cur->args[0]);
      first = false;
      cur = cur->args[1];
    }
    if (!(is_atom(cur) && cur->name == "[]")) {
      os << '|';
      print(os, cur);
    }
    os << ']';
    return;
  }
  os << t->name;
  if (!t->args.empty()) {
    os << '(';
    for (std::size_t i = 0; i < t->args.size(); ++i) {
      if (i) os << ',';
      print(os, t->args[i]);
    }
    os << ')';
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::ostringstream os;
  print(os, t);
  return os.str();
}

Term Substitution::apply(const Term& t) const {
  if (t->ground || map_.empty()) return t;
  if (is_var(t)) {
    auto it = map_.find(t->value);
    if (it == map_.end()) return t;
    if (is_var(it->second) && it->second->value == t->value) return t;
    return apply(it->second);
  }
  std::vector<Term> args;
  args.reserve(t->args.size());
  bool changed = false;
  for (const auto& a : t->args) {
    args.push_back(apply(a));
    changed = changed || args.back().get() != a.get();
  }
  if (!changed) return t;
  return mk_compound(t->name, std::move(args));
}

Substitution Substitution::compose(const Substitution& other) const {
  Substitution out;
  for (const auto& [v, val] : other.map_) out.map_[v] = apply(val);
  for (const auto& [v, val] : map_) {
    if (!out.map_.count(v)) out.map_[v] = val;
  }
  return out;
}

bool match_into(const Term& pattern, const Term& target, Substitution& s) {
  if (is_var(pattern)) {
    if (const Term* b = s.lookup(pattern->value)) {
      return term_equal(*b, target);
    }
    s.bind(pattern->value, target);
    return true;
  }
  if (pattern->kind != target->kind) return false;
  if (is_int(pattern)) return pattern->value == target->value;
  if (pattern->name != target->name ||
      pattern->args.size() != target->args.size()) {
    return false;
  }
  for (std::size_t i = 0; i < pattern->args.size(); ++i) {
    if (!match_into(pattern->args[i], target->args[i], s)) return false;
  }
  return true;
}

std::optional<Substitution> match(const Term& pattern, const Term& target) {
  Substitution s;
  if (!match_into(pattern, target, s)) return std::nullopt;
  return s;
}

namespace {

Term walk(const Term& t, const Substitution& s) {
  Term cur = t;
  while (is_var(cur)) {
    const Term* b = s.lookup(cur->value);
    if (!b) break;
    cur = *b;
  }
  return cur;
}

bool unify_syntactic(const Term& a, const Term& b, Substitution& s) {
  Term x = walk(a, s);
  Term y = walk(b, s);
  if (is_var(x) && is_var(y) && x->value == y->value) return true;
  if (is_var(x)) {
    if (occurs(x->value, s.apply(y))) return false;
    s.bind(x->value, y);
    return true;
  }
  if (is_var(y)) return unify_syntactic(y, x, s);
  if (x->kind != y->kind) return false;
  if (is_int(x)) return x->value == y->value;
  if (x->name != y->name || x->args.size() != y->args.size()) return false;
  for (std::size_t i = 0; i < x->args.size(); ++i) {
    if (!unify_syntactic(x->args[i], y->args[i], s)) return false;
  }
  return true;
}

Substitution normalize(const Substitution& s) {
  Substitution out;
  for (const auto& [v, val] : s.bindings()) out.bind(v, s.apply(val));
  return out;
}

}  // namespace

std::optional<Substitution> mgu(const Term& a, const Term& b) {
  Substitution s;
  if (!unify_syntactic(a, b, s)) return std::nullopt;
  return normalize(s);
}

std::optional<Substitution> mgu_of_set(const std::vector<Term>& terms) {
  Substitution s;
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (!unify_syntactic(terms[0], terms[i], s)) return std::nullopt;
  }
  return normalize(s);
}

Term rename_apart(const Term& t,
                  std::unordered_map<std::int64_t, Term>& map) {
  if (t->ground) return t;
  if (is_var(t)) {
    auto it = map.find(t->value);
    if (it != map.end()) return it->second;
    Term v = mk_var(t->name);
    map.emplace(t->value, v);
    return v;
  }
  std::vector<Term> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) args.push_back(rename_apart(a, map));
  return mk_compound(t->name, std::move(args));
}

}  // namespace chr
