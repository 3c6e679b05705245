#include <algorithm>
#include <functional>
#include <set>

#include "chr/normalize.hpp"
#include "chr/translate.hpp"

namespace chr {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::P: return "p";
    case Mode::N: return "n";
    case Mode::B: return "b";
  }
  return "?";
}

std::string name_map_tsv(const std::vector<NameMapEntry>& m) {
  std::string out;
  for (const auto& e : m) out += e.generated + "\t" + e.source + "\n";
  return out;
}

std::pair<std::vector<LAAntecedent>, std::vector<LAAntecedent>> split(
    const std::vector<LAAntecedent>& antecedents) {
  std::pair<std::vector<LAAntecedent>, std::vector<LAAntecedent>> out;
  for (const auto& a : antecedents) (a.is_user() ? out.first : out.second).push_back(a);
  return out;
}

namespace {

Term as_term(const LAAntecedent& a) {
  return a.kind == LAAntecedent::Kind::Negative ? mk_compound("del", {a.atom}) : a.atom;
}

// Restricted growth strings: a[i] <= 1 + max(a[0..i-1]).
void each_partition(std::size_t m, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> a(m, 0);
  if (m == 0) {
    f(a);
    return;
  }
  while (true) {
    f(a);
    std::size_t i = m;
    while (i-- > 1) {
      int mx = *std::max_element(a.begin(), a.begin() + static_cast<long>(i));
      if (a[i] <= mx) {
        ++a[i];
        std::fill(a.begin() + static_cast<long>(i) + 1, a.end(), 0);
        break;
      }
    }
    if (i == 0) return;
  }
}

std::string fresh(std::set<std::string>& used, const std::string& base) {
  std::string name = base;
  for (int k = 2; used.count(name); ++k) name = base + std::to_string(k);
  used.insert(name);
  return name;
}

Term plus_two(const Term& p) {
  if (is_int(p)) return mk_int(p->value + 2);
  if (p->kind == TermKind::Compound && p->name == "+" && p->args.size() == 2 &&
      is_int(p->args[1])) {
    return mk_compound("+", {p->args[0], mk_int(p->args[1]->value + 2)});
  }
  return mk_compound("+", {p, mk_int(2)});
}

void collect_preds(const Term& atom, std::vector<std::pair<std::string, std::size_t>>& out) {
  std::pair<std::string, std::size_t> key{atom->name, atom->args.size()};
  if (std::find(out.begin(), out.end(), key) == out.end()) out.push_back(key);
}

ChrRule sd_rule(int prio, const std::string& name, std::vector<Term> kept,
                std::vector<Term> removed, std::vector<Comparison> guard,
                std::vector<BodyItem> body) {
  ChrRule r;
  r.priority = mk_int(prio);
  r.name = name;
  r.kept = std::move(kept);
  r.removed = std::move(removed);
  r.guard = std::move(guard);
  r.body = std::move(body);
  return r;
}

}  // namespace

std::vector<HeadPartition> enumerate_partitions(const std::vector<LAAntecedent>& user,
                                                const std::vector<LAAntecedent>& comparisons,
                                                std::size_t limit) {
  if (user.size() > limit) {
    throw TranslationError(std::to_string(user.size()) +
                           " user antecedents exceed the partition limit of " +
                           std::to_string(limit));
  }
  std::vector<HeadPartition> out;
  each_partition(user.size(), [&](const std::vector<int>& a) {
    HeadPartition hp;
    int nblocks = a.empty() ? 0 : *std::max_element(a.begin(), a.end()) + 1;
    hp.blocks.assign(static_cast<std::size_t>(nblocks), {});
    for (std::size_t i = 0; i < a.size(); ++i) hp.blocks[a[i]].push_back(static_cast<int>(i));
    for (const auto& block : hp.blocks) {
      std::vector<Term> terms;
      for (int i : block) terms.push_back(hp.theta.apply(as_term(user[i])));
      auto s = mgu_of_set(terms);
      if (!s) return;
      hp.theta = s->compose(hp.theta);
    }
    for (const auto& c : comparisons) {
      if (!maybe_satisfiable(apply(hp.theta, c.cmp))) return;
    }
    out.push_back(std::move(hp));
  });
  // Finest partitions first.
  std::stable_sort(out.begin(), out.end(), [](const HeadPartition& a, const HeadPartition& b) {
    return a.blocks.size() > b.blocks.size();
  });
  return out;
}

std::vector<LAAntecedent> filter_representatives(const std::vector<LAAntecedent>& user,
                                                 const HeadPartition& rho) {
  std::vector<LAAntecedent> out;
  for (std::size_t i = 0; i < user.size(); ++i) {
    bool rep = false;
    for (const auto& b : rho.blocks) rep = rep || b.front() == static_cast<int>(i);
    if (!rep) continue;
    LAAntecedent a = user[i];
    a.atom = rho.theta.apply(a.atom);
    out.push_back(std::move(a));
  }
  return out;
}

std::string partition_label(const HeadPartition& rho) {
  std::string out;
  for (std::size_t b = 0; b < rho.blocks.size(); ++b) {
    if (b) out += "_";
    for (int i : rho.blocks[b]) out += std::to_string(i + 1);
  }
  return out;
}

std::string rep_functor(const std::string& functor) { return functor + "_r"; }

std::pair<std::vector<Term>, std::vector<Comparison>> add_modes(
    const std::vector<LAAntecedent>& heads, std::set<std::string>& used) {
  std::pair<std::vector<Term>, std::vector<Comparison>> out;
  for (const auto& h : heads) {
    std::vector<Term> args = h.atom->args;
    if (h.kind == LAAntecedent::Kind::Positive) {
      args.push_back(mk_atom("p"));
    } else {
      Term n = mk_var(fresh(used, "N"));
      args.push_back(n);
      out.second.push_back({CmpOp::Ne, n, mk_atom("p")});
    }
    out.first.push_back(mk_compound(rep_functor(h.atom->name), std::move(args)));
  }
  return out;
}

La2ChrResult translate_la_program(const LAProgram& source, const LAGoal* goal) {
  La2ChrResult res;
  res.normalized = normalize_la_priority(source);
  std::vector<std::pair<std::string, std::size_t>> preds;
  for (const auto& r : res.normalized.rules) {
    for (const auto& a : r.antecedents) {
      if (a.is_user()) collect_preds(a.atom, preds);
    }
    for (const auto& c : r.conclusions) collect_preds(c.atom, preds);
  }
  if (goal) {
    for (const auto& g : *goal) collect_preds(g.atom, preds);
  }
  std::set<std::string> names;
  for (const auto& [f, n] : preds) names.insert(f);
  for (const auto& [f, n] : preds) {
    if (f == "del") throw TranslationError("predicate del/" + std::to_string(n) + " is reserved");
    if (names.count(rep_functor(f))) {
      throw TranslationError("predicate " + f + " clashes with representation " +
                             rep_functor(f));
    }
  }

  for (const auto& [f, n] : preds) {
    std::vector<Term> xs;
    for (std::size_t i = 1; i <= n; ++i) xs.push_back(mk_var("X" + std::to_string(i)));
    Term m = mk_var("M");
    auto rep = [&](const Term& mode) {
      std::vector<Term> args = xs;
      args.push_back(mode);
      return mk_compound(rep_functor(f), std::move(args));
    };
    Term a = mk_compound(f, xs);
    Term da = mk_compound("del", {a});
    Term p = mk_atom("p"), nn = mk_atom("n"), b = mk_atom("b");
    std::string base = "sd_" + f + "_" + std::to_string(n) + "_";
    std::vector<ChrRule> rules{
        sd_rule(1, base + "1", {rep(m)}, {a}, {{CmpOp::Ne, m, nn}}, {}),
        sd_rule(1, base + "2", {}, {rep(nn), a}, {}, {BodyItem::user(rep(b))}),
        sd_rule(2, base + "3", {}, {a}, {}, {BodyItem::user(rep(p))}),
        sd_rule(1, base + "4", {rep(m)}, {da}, {{CmpOp::Ne, m, p}}, {}),
        sd_rule(1, base + "5", {}, {rep(p), da}, {}, {BodyItem::user(rep(b))}),
        sd_rule(2, base + "6", {}, {da}, {}, {BodyItem::user(rep(nn))}),
    };
    for (auto& r : rules) {
      res.name_map.push_back({r.name, f + "/" + std::to_string(n)});
      res.program.rules.push_back(std::move(r));
    }
    res.rep_to_pred[rep_functor(f)] = f;
  }

  for (const auto& r : res.normalized.rules) {
    auto [user, cmps] = split(r.antecedents);
    for (const auto& hp : enumerate_partitions(user, cmps)) {
      std::set<std::string> used;
      for (const auto& v : vars_of(r)) used.insert(v->name);
      auto [heads, g1] = add_modes(filter_representatives(user, hp), used);
      ChrRule out;
      out.priority = plus_two(hp.theta.apply(r.priority));
      out.name = r.name + "__" + partition_label(hp);
      out.kept = std::move(heads);
      out.guard = std::move(g1);
      for (const auto& c : cmps) out.guard.push_back(apply(hp.theta, c.cmp));
      for (const auto& c : r.conclusions) {
        Term t = hp.theta.apply(c.atom);
        out.body.push_back(BodyItem::user(c.del ? mk_compound("del", {t}) : t));
      }
      res.name_map.push_back({out.name, r.name});
      res.program.rules.push_back(std::move(out));
    }
  }
  return res;
}

ChrGoal la_goal_to_chr(const LAGoal& goal) {
  ChrGoal out;
  for (const auto& g : goal) {
    out.push_back(BodyItem::user(g.del ? mk_compound("del", {g.atom}) : g.atom));
  }
  return out;
}

LAState chrtola(const ExecState& s, const std::map<std::string, std::string>& rep_to_pred) {
  LAState out;
  auto add = [&](const Term& raw) {
    Term t = normalize_arith(s.builtins.resolve(raw));
    if (t->kind == TermKind::Compound) {
      auto it = rep_to_pred.find(t->name);
      if (it != rep_to_pred.end() && !t->args.empty() && is_atom(t->args.back())) {
        const std::string& mode = t->args.back()->name;
        std::vector<Term> args(t->args.begin(), t->args.end() - 1);
        Term a = mk_compound(it->second, std::move(args));
        if (mode != "n") out.positive.insert(a);
        if (mode != "p") out.negative.insert(a);
        return;
      }
      if (t->name == "del" && t->args.size() == 1) {
        out.negative.insert(t->args[0]);
        return;
      }
    }
    out.positive.insert(t);
  };
  for (const auto& g : s.goal) {
    if (g.kind == BodyItem::Kind::Atom) add(g.atom);
  }
  for (const auto& c : s.store) add(c.atom);
  return out;
}

}  // namespace chr
