#include "chr/printer.hpp"

#include <map>
#include <set>
#include <unordered_map>

namespace chr {

namespace {

class Namer {
 public:
  explicit Namer(const std::vector<Term>& terms) {
    std::vector<Term> vars;
    std::unordered_map<std::int64_t, int> uses;
    for (const auto& t : terms) count(t, vars, uses);
    std::set<std::string> taken;
    for (const auto& v : vars) {
      if (v->name != "_") taken.insert(v->name);
    }
    std::set<std::string> used;
    for (const auto& v : vars) {
      std::string base = v->name;
      if (base == "_") {
        if (uses[v->value] == 1) {
          names_[v->value] = "_";
          continue;
        }
        base = "G";
      }
      std::string name = base;
      for (int k = 2; used.count(name) || (name != base && taken.count(name)); ++k) {
        name = base + "_" + std::to_string(k);
      }
      used.insert(name);
      names_[v->value] = name;
    }
  }

  Term rename(const Term& t) const {
    if (t->ground) return t;
    if (is_var(t)) {
      auto it = names_.find(t->value);
      if (it == names_.end() || it->second == t->name) return t;
      return mk_var_with_id(t->value, it->second);
    }
    std::vector<Term> args;
    args.reserve(t->args.size());
    for (const auto& a : t->args) args.push_back(rename(a));
    return mk_compound(t->name, std::move(args));
  }

  std::string str(const Term& t) const { return to_string(rename(t)); }
  std::string str(const Comparison& c) const {
    return str(c.lhs) + " " + cmp_symbol(c.op) + " " + str(c.rhs);
  }
  std::string str(const BodyItem& b) const {
    if (b.kind == BodyItem::Kind::Tell) return str(b.lhs) + " = " + str(b.rhs);
    return str(b.atom);
  }

 private:
  static void count(const Term& t, std::vector<Term>& vars,
                    std::unordered_map<std::int64_t, int>& uses) {
    if (t->ground) return;
    if (is_var(t)) {
      if (uses[t->value]++ == 0) vars.push_back(t);
      return;
    }
    for (const auto& a : t->args) count(a, vars, uses);
  }

  std::unordered_map<std::int64_t, std::string> names_;
};

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out;
}

std::vector<Term> terms_of(const IntermediateRule& r) {
  std::vector<Term> out{r.priority};
  for (const auto& it : r.items) {
    out.push_back(it.head);
    for (const auto& g : it.post_guard) {
      out.push_back(g.lhs);
      out.push_back(g.rhs);
    }
  }
  for (const auto& b : r.body) {
    if (b.kind == BodyItem::Kind::Tell) {
      out.push_back(b.lhs);
      out.push_back(b.rhs);
    } else {
      out.push_back(b.atom);
    }
  }
  return out;
}

std::string body_text(const Namer& n, const std::vector<BodyItem>& body) {
  if (body.empty()) return "true";
  std::vector<std::string> parts;
  for (const auto& b : body) parts.push_back(n.str(b));
  return join(parts);
}

}  // namespace

std::string to_string(const BodyItem& b) { return Namer({}).str(b); }

std::string to_string(const LAConclusion& c) {
  return c.del ? "del(" + to_string(c.atom) + ")" : to_string(c.atom);
}

std::string to_string(const LARule& r) {
  Namer n(flatten(r));
  std::vector<std::string> ants;
  for (const auto& a : r.antecedents) {
    switch (a.kind) {
      case LAAntecedent::Kind::Positive: ants.push_back(n.str(a.atom)); break;
      case LAAntecedent::Kind::Negative:
        ants.push_back("del(" + n.str(a.atom) + ")");
        break;
      case LAAntecedent::Kind::Compare: ants.push_back(n.str(a.cmp)); break;
    }
  }
  std::vector<std::string> concl;
  for (const auto& c : r.conclusions) {
    concl.push_back(c.del ? "del(" + n.str(c.atom) + ")" : n.str(c.atom));
  }
  if (concl.empty()) concl.push_back("true");
  return r.name + " @ " + n.str(r.priority) + " : " + join(ants) + " => " +
         join(concl) + ".";
}

std::string to_string(const ChrRule& r) {
  Namer n(flatten(r));
  std::vector<std::string> kept, removed, guard;
  for (const auto& h : r.kept) kept.push_back(n.str(h));
  for (const auto& h : r.removed) removed.push_back(n.str(h));
  for (const auto& g : r.guard) guard.push_back(n.str(g));
  std::string out = n.str(r.priority) + " :: " + r.name + " @ ";
  switch (r.kind()) {
    case RuleKind::Simplification: out += join(removed) + " <=> "; break;
    case RuleKind::Propagation: out += join(kept) + " ==> "; break;
    case RuleKind::Simpagation:
      out += join(kept) + " \\ " + join(removed) + " <=> ";
      break;
  }
  if (!guard.empty()) out += join(guard) + " | ";
  return out + body_text(n, r.body) + ".";
}

std::string to_string(const IntermediateRule& r) {
  Namer n(terms_of(r));
  std::vector<std::string> parts;
  for (const auto& it : r.items) {
    parts.push_back((it.kept ? "+" : "-") + n.str(it.head));
    if (it.post_guard.empty()) {
      parts.push_back("?true");
    } else {
      std::vector<std::string> g;
      for (const auto& c : it.post_guard) g.push_back(n.str(c));
      parts.push_back("?(" + join(g) + ")");
    }
  }
  return n.str(r.priority) + " :: " + r.name + " @ " + join(parts) + " <=> " +
         body_text(n, r.body) + ".";
}

std::string pretty_print_la(const LAProgram& p, const LAGoal* goal) {
  std::string out;
  for (const auto& r : p.rules) out += to_string(r) + "\n";
  if (goal) {
    std::vector<std::string> parts;
    for (const auto& c : *goal) parts.push_back(to_string(c));
    out += "goal " + join(parts) + ".\n";
  }
  return out;
}

std::string pretty_print_chrrp(const ChrProgram& p, const ChrGoal* goal) {
  std::string out;
  for (const auto& r : p.rules) out += to_string(r) + "\n";
  if (goal) {
    std::vector<Term> ts;
    for (const auto& b : *goal) {
      if (b.kind == BodyItem::Kind::Tell) {
        ts.push_back(b.lhs);
        ts.push_back(b.rhs);
      } else {
        ts.push_back(b.atom);
      }
    }
    Namer n(ts);
    out += "goal " + (goal->empty() ? std::string() : body_text(n, *goal)) + ".\n";
  }
  return out;
}

}  // namespace chr
