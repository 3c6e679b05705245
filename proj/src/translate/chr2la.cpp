#include <algorithm>
#include <set>

#include "chr/normalize.hpp"
#include "chr/translate.hpp"

namespace chr {

namespace {

std::string fresh(std::set<std::string>& used, const std::string& base) {
  std::string name = base;
  for (int k = 2; used.count(name); ++k) name = base + std::to_string(k);
  used.insert(name);
  return name;
}

Term with_id(const Term& atom, const Term& id) {
  std::vector<Term> args = atom->args;
  args.push_back(id);
  return mk_compound(atom->name, std::move(args));
}

Term offset(const Term& base, std::int64_t k) {
  return k == 0 ? base : mk_compound("+", {base, mk_int(k)});
}

bool is_reserved(const Term& atom) {
  return (atom->name == "next_id" && atom->args.size() == 1) ||
         (atom->name == "token" && atom->args.size() == 2) ||
         (atom->name == "del" && atom->args.size() == 1);
}

}  // namespace

std::string segment_violation(const ChrRule& r) {
  std::vector<Term> head_vars;
  for (const auto& h : r.heads()) {
    collect_vars(h, head_vars);
    if (is_reserved(h)) return "head " + to_string(h) + " uses a reserved predicate";
  }
  for (const auto& b : r.body) {
    if (b.kind == BodyItem::Kind::Tell) {
      return "body contains the built-in tell " + to_string(b.lhs) + " = " + to_string(b.rhs);
    }
    if (is_reserved(b.atom)) return "body atom " + to_string(b.atom) + " uses a reserved predicate";
    std::vector<Term> vs;
    collect_vars(b.atom, vs);
    for (const auto& v : vs) {
      bool found = false;
      for (const auto& h : head_vars) found = found || h->value == v->value;
      if (!found) return "not variable restricted: body variable " + v->name + " is not in a head";
    }
  }
  return {};
}

void check_segment(const ChrSource& src) {
  for (const auto& r : src.program.rules) {
    std::string why = segment_violation(r);
    if (!why.empty()) throw TranslationError("rule " + r.name + ": " + why);
  }
  for (const auto& g : src.goal) {
    if (g.kind == BodyItem::Kind::Tell) {
      throw TranslationError("goal contains a built-in tell");
    }
    if (!g.atom->ground) throw TranslationError("goal atom " + to_string(g.atom) + " is not ground");
    if (is_reserved(g.atom)) {
      throw TranslationError("goal atom " + to_string(g.atom) + " uses a reserved predicate");
    }
  }
}

Chr2LaResult translate_chrrp_program(const ChrProgram& p) {
  Chr2LaResult res;
  LAProgram raw;
  for (const auto& r : p.rules) {
    std::string why = segment_violation(r);
    if (!why.empty()) throw TranslationError("rule " + r.name + ": " + why);
    std::set<std::string> used;
    for (const auto& v : vars_of(r)) used.insert(v->name);
    std::vector<Term> heads = r.heads();
    std::vector<Term> ids;
    if (heads.size() == 1) {
      ids.push_back(mk_var(fresh(used, "Id")));
    } else {
      for (std::size_t i = 1; i <= heads.size(); ++i) {
        ids.push_back(mk_var(fresh(used, "Id" + std::to_string(i))));
      }
    }
    Term nid = mk_var(fresh(used, "NId"));

    std::vector<LAAntecedent> common;
    for (std::size_t i = 0; i < heads.size(); ++i) {
      common.push_back(LAAntecedent::positive(with_id(heads[i], ids[i])));
    }
    for (std::size_t i = 0; i < heads.size(); ++i) {
      for (std::size_t j = i + 1; j < heads.size(); ++j) {
        if (pred_key(heads[i]) != pred_key(heads[j])) continue;
        auto theta = mgu(heads[i], heads[j]);
        if (!theta) continue;
        bool sat = true;
        for (const auto& g : r.guard) sat = sat && maybe_satisfiable(apply(*theta, g));
        if (sat) common.push_back(LAAntecedent::compare({CmpOp::Ne, ids[i], ids[j]}));
      }
    }
    for (const auto& g : r.guard) common.push_back(LAAntecedent::compare(g));

    const auto o = static_cast<std::int64_t>(r.body.size());
    auto add_body = [&](std::vector<LAAntecedent>& ants, std::vector<LAConclusion>& concl) {
      if (o == 0) return;
      ants.push_back(LAAntecedent::positive(mk_compound("next_id", {nid})));
      concl.push_back({true, mk_compound("next_id", {nid})});
      for (std::int64_t i = 0; i < o; ++i) {
        concl.push_back({false, with_id(r.body[static_cast<std::size_t>(i)].atom, offset(nid, i))});
      }
      concl.push_back({false, mk_compound("next_id", {offset(nid, o)})});
    };

    if (r.kind() == RuleKind::Propagation) {
      Term token = mk_compound("token", {mk_atom(r.name), mk_list(ids)});
      LARule r1{r.name + "_p1", r.priority, common, {{false, token}}};
      LARule r2{r.name + "_p2", r.priority, common, {}};
      r2.antecedents.push_back(LAAntecedent::positive(token));
      r2.conclusions.push_back({true, token});
      add_body(r2.antecedents, r2.conclusions);
      res.name_map.push_back({r1.name, r.name});
      res.name_map.push_back({r2.name, r.name});
      raw.rules.push_back(std::move(r1));
      raw.rules.push_back(std::move(r2));
    } else {
      LARule out{r.name + "_p", r.priority, common, {}};
      std::vector<LAAntecedent> ants;
      std::vector<LAConclusion> concl;
      add_body(ants, concl);
      out.antecedents.insert(out.antecedents.end(), ants.begin(), ants.end());
      for (std::size_t i = r.kept.size(); i < heads.size(); ++i) {
        out.conclusions.push_back({true, with_id(heads[i], ids[i])});
      }
      out.conclusions.insert(out.conclusions.end(), concl.begin(), concl.end());
      res.name_map.push_back({out.name, r.name});
      raw.rules.push_back(std::move(out));
    }
  }
  res.program = normalize_la_priority(raw);
  if (res.program.rules.size() != raw.rules.size()) {
    // Split rules inherit the map entry of their origin.
    std::vector<NameMapEntry> m;
    for (const auto& r : res.program.rules) {
      std::string src;
      for (const auto& e : res.name_map) {
        if (r.name == e.generated || r.name.rfind(e.generated + "__", 0) == 0) src = e.source;
      }
      m.push_back({r.name, src});
    }
    res.name_map = std::move(m);
  }
  return res;
}

LAGoal chr_goal_to_la(const ChrGoal& goal) {
  LAGoal out;
  std::int64_t id = 1;
  for (const auto& g : goal) {
    if (g.kind == BodyItem::Kind::Tell) throw TranslationError("goal contains a built-in tell");
    Term a = normalize_arith(g.atom);
    if (!a->ground) throw TranslationError("goal atom " + to_string(a) + " is not ground");
    out.push_back({false, with_id(a, mk_int(id++))});
  }
  out.push_back({false, mk_compound("next_id", {mk_int(id)})});
  return out;
}

ExecState latochr(const LAState& s) {
  ExecState out;
  int next_ids = 0;
  for (const auto& a : s.positive) {
    if (s.negative.count(a)) continue;
    if (a->name == "next_id" && a->args.size() == 1) {
      ++next_ids;
      out.next_id = a->args[0]->value;
      continue;
    }
    if (a->name == "token" && a->args.size() == 2) continue;
    if (a->args.empty() || !is_int(a->args.back())) {
      throw TranslationError("atom " + to_string(a) + " carries no identifier");
    }
    std::vector<Term> args(a->args.begin(), a->args.end() - 1);
    out.store.push_back({a->args.back()->value, mk_compound(a->name, std::move(args))});
  }
  if (next_ids != 1) {
    throw TranslationError("malformed state: " + std::to_string(next_ids) +
                           " undeleted next_id atoms");
  }
  for (const auto& a : s.negative) {
    if (a->name != "token" || a->args.size() != 2) continue;
    std::vector<std::int64_t> ids;
    for (Term l = a->args[1]; l->name == "." && l->args.size() == 2; l = l->args[1]) {
      ids.push_back(l->args[0]->value);
    }
    out.history.insert({a->args[0]->name, ids});
  }
  std::sort(out.store.begin(), out.store.end(),
            [](const StoredConstraint& x, const StoredConstraint& y) { return x.id < y.id; });
  return out;
}

}  // namespace chr
