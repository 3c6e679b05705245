#include "chr/wp_interp.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "chr/printer.hpp"

namespace chr {

const StoredConstraint* ExecState::find(std::int64_t id) const {
  auto it = std::lower_bound(store.begin(), store.end(), id,
                             [](const StoredConstraint& c, std::int64_t v) { return c.id < v; });
  if (it == store.end() || it->id != id) return nullptr;
  return &*it;
}

WpChooser wp_first() {
  return [](const std::vector<WpInstance>&) { return std::size_t{0}; };
}

WpChooser wp_random(std::mt19937_64& rng) {
  return [&rng](const std::vector<WpInstance>& c) {
    return std::uniform_int_distribution<std::size_t>(0, c.size() - 1)(rng);
  };
}

ExecState wp_initial(const ChrGoal& goal) {
  ExecState s;
  s.goal.assign(goal.begin(), goal.end());
  return s;
}

namespace {

struct Candidate {
  std::int64_t id;
  Term atom;  // resolved under the builtin store
};

struct WpEnumerator {
  const ExecState& s;
  const ChrRule& rule;
  int rule_index;
  std::vector<Term> heads;
  const std::map<std::string, std::vector<Candidate>>& index;
  std::vector<WpInstance>& out;

  void run(std::size_t k, const Substitution& theta, std::vector<std::int64_t>& ids) {
    if (k == heads.size()) {
      finish(theta, ids);
      return;
    }
    auto it = index.find(pred_key(heads[k]));
    if (it == index.end()) return;
    for (const auto& c : it->second) {
      if (std::find(ids.begin(), ids.end(), c.id) != ids.end()) continue;
      Substitution next = theta;
      if (!match_into(heads[k], c.atom, next)) continue;
      ids.push_back(c.id);
      run(k + 1, next, ids);
      ids.pop_back();
    }
  }

  void finish(const Substitution& theta, const std::vector<std::int64_t>& ids) {
    for (const auto& g : rule.guard) {
      if (eval_comparison(apply(theta, g), s.builtins) != Tri::Entailed) return;
    }
    if (rule.kind() == RuleKind::Propagation && s.history.count({rule.name, ids})) {
      return;
    }
    WpInstance inst;
    inst.rule = rule_index;
    inst.ids = ids;
    inst.priority = eval_arith(theta.apply(rule.priority), s.builtins);
    inst.theta = theta;
    out.push_back(std::move(inst));
  }
};

std::string ids_text(const std::vector<std::int64_t>& ids) {
  std::string out = "[";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(ids[i]);
  }
  return out + "]";
}

// Renders terms with variables numbered by first occurrence.
class Numbering {
 public:
  explicit Numbering(const BuiltinStore& b) : b_(b) {}

  Term rename(const Term& t0) {
    Term t = b_.resolve(t0);
    return rename_resolved(t);
  }
  std::string str(const Term& t) { return to_string(rename(t)); }

 private:
  Term rename_resolved(const Term& t) {
    if (t->ground) return t;
    if (is_var(t)) {
      auto it = map_.find(t->value);
      if (it == map_.end()) {
        it = map_.emplace(t->value, "_" + std::to_string(map_.size() + 1)).first;
      }
      return mk_var_with_id(t->value, it->second);
    }
    std::vector<Term> args;
    for (const auto& a : t->args) args.push_back(rename_resolved(a));
    return mk_compound(t->name, std::move(args));
  }

  const BuiltinStore& b_;
  std::unordered_map<std::int64_t, std::string> map_;
};

Term blind(const Term& t) {
  if (t->ground) return t;
  if (is_var(t)) return mk_var_with_id(0, "_");
  std::vector<Term> args;
  for (const auto& a : t->args) args.push_back(blind(a));
  return mk_compound(t->name, std::move(args));
}

std::string goal_part(Numbering& num, const std::vector<Term>& goal_vars) {
  std::string out;
  for (const auto& v : goal_vars) out += v->name + "=" + num.str(v) + ";";
  return out;
}

// Memo key for exhaustive search: identifiers renumbered by store order and
// history restricted to live identifiers.
std::string search_key(const ExecState& s, const std::vector<Term>& goal_vars) {
  if (s.failed) return "failed";
  Numbering num(s.builtins);
  std::string out = goal_part(num, goal_vars) + "|";
  for (const auto& g : s.goal) out += to_string(g) + ";";
  out += "|";
  std::unordered_map<std::int64_t, std::int64_t> remap;
  for (const auto& c : s.store) {
    remap.emplace(c.id, static_cast<std::int64_t>(remap.size() + 1));
    out += num.str(c.atom) + ";";
  }
  out += "|";
  std::set<HistoryTuple> live;
  for (const auto& [name, ids] : s.history) {
    std::vector<std::int64_t> mapped;
    bool alive = true;
    for (auto id : ids) {
      auto it = remap.find(id);
      alive = alive && it != remap.end();
      if (alive) mapped.push_back(it->second);
    }
    if (alive) live.insert({name, mapped});
  }
  for (const auto& [name, ids] : live) out += name + ids_text(ids) + ";";
  return out;
}

}  // namespace

std::vector<WpInstance> wp_instances(const ExecState& s, const ChrProgram& p) {
  std::vector<WpInstance> out;
  if (s.failed) return out;
  std::map<std::string, std::vector<Candidate>> index;
  for (const auto& c : s.store) {
    index[pred_key(c.atom)].push_back({c.id, s.builtins.resolve(c.atom)});
  }
  for (std::size_t r = 0; r < p.rules.size(); ++r) {
    WpEnumerator e{s, p.rules[r], static_cast<int>(r), p.rules[r].heads(), index, out};
    std::vector<std::int64_t> ids;
    e.run(0, Substitution{}, ids);
  }
  return out;
}

std::vector<WpInstance> wp_highest(const ExecState& s, const ChrProgram& p) {
  std::vector<WpInstance> all = wp_instances(s, p);
  if (all.empty()) return all;
  std::int64_t best = all[0].priority;
  for (const auto& i : all) best = std::min(best, i.priority);
  std::vector<WpInstance> out;
  for (auto& i : all) {
    if (i.priority == best) out.push_back(std::move(i));
  }
  return out;
}

WpTransition wp_goal_step(ExecState& s, std::string* trace) {
  if (s.failed || s.goal.empty()) return WpTransition::None;
  BodyItem item = s.goal.front();
  s.goal.pop_front();
  if (item.kind == BodyItem::Kind::Tell) {
    if (trace) *trace = "SOLVE " + to_string(item);
    if (!s.builtins.unify(item.lhs, item.rhs)) s.failed = true;
    return WpTransition::Solve;
  }
  Term atom = normalize_arith(item.atom, s.builtins);
  std::int64_t id = s.next_id++;
  s.store.push_back({id, atom});
  if (trace) *trace = "INTRODUCE " + to_string(atom) + "#" + std::to_string(id);
  return WpTransition::Introduce;
}

void wp_apply(ExecState& s, const ChrProgram& p, const WpInstance& inst,
              std::string* trace) {
  const ChrRule& r = p.rules[inst.rule];
  if (trace) {
    *trace = "APPLY " + r.name + "@" + std::to_string(inst.priority) + " " +
             ids_text(inst.ids);
  }
  std::size_t nk = r.kept.size();
  std::vector<std::int64_t> removed(inst.ids.begin() + static_cast<long>(nk), inst.ids.end());
  s.store.erase(std::remove_if(s.store.begin(), s.store.end(),
                               [&](const StoredConstraint& c) {
                                 return std::find(removed.begin(), removed.end(), c.id) !=
                                        removed.end();
                               }),
                s.store.end());
  if (r.kind() == RuleKind::Propagation) s.history.insert({r.name, inst.ids});
  // body variables that do not occur in the heads are fresh per firing
  Substitution ext = inst.theta;
  std::vector<Term> body_vars;
  for (const auto& b : r.body) {
    if (b.kind == BodyItem::Kind::Tell) {
      collect_vars(b.lhs, body_vars);
      collect_vars(b.rhs, body_vars);
    } else {
      collect_vars(b.atom, body_vars);
    }
  }
  for (const auto& v : body_vars) {
    if (!ext.lookup(v->value)) ext.bind(v->value, mk_var(v->name));
  }
  auto inst_term = [&](const Term& t) { return ext.apply(t); };
  for (const auto& b : r.body) {
    if (b.kind == BodyItem::Kind::Tell) {
      s.goal.push_back(BodyItem::tell(inst_term(b.lhs), inst_term(b.rhs)));
    } else {
      s.goal.push_back(BodyItem::user(inst_term(b.atom)));
    }
  }
}

WpTransition wp_step(ExecState& s, const ChrProgram& p, const WpChooser& choose,
                     std::string* trace) {
  if (s.failed) return WpTransition::None;
  if (!s.goal.empty()) return wp_goal_step(s, trace);
  std::vector<WpInstance> cands = wp_highest(s, p);
  if (cands.empty()) return WpTransition::None;
  wp_apply(s, p, cands[choose(cands)], trace);
  return WpTransition::Apply;
}

WpRunResult wp_run(const ChrGoal& goal, const ChrProgram& p, std::size_t budget,
                   const WpChooser& choose, bool trace) {
  WpRunResult res;
  res.state = wp_initial(goal);
  std::string line;
  while (true) {
    if (res.steps >= budget) {
      ExecState probe = res.state;
      if (wp_step(probe, p, choose) == WpTransition::None) break;
      throw BudgetExceeded("omega_p run exceeded " + std::to_string(budget) + " steps");
    }
    WpTransition t = wp_step(res.state, p, choose, trace ? &line : nullptr);
    if (t == WpTransition::None) break;
    ++res.steps;
    if (t == WpTransition::Apply) ++res.applies;
    if (trace) res.trace.push_back(line);
  }
  return res;
}

std::vector<Term> goal_variables(const ChrGoal& goal) {
  std::vector<Term> vars;
  for (const auto& g : goal) {
    if (g.kind == BodyItem::Kind::Tell) {
      collect_vars(g.lhs, vars);
      collect_vars(g.rhs, vars);
    } else {
      collect_vars(g.atom, vars);
    }
  }
  std::stable_sort(vars.begin(), vars.end(),
                   [](const Term& a, const Term& b) { return a->name < b->name; });
  return vars;
}

std::string canonical_state(const std::vector<Term>& goal_vars,
                            const BuiltinStore& builtins,
                            const std::vector<Term>& atoms, bool failed) {
  if (failed) return "failed";
  std::vector<std::pair<std::string, Term>> keyed;
  for (const auto& a : atoms) {
    Term r = builtins.resolve(a);
    keyed.emplace_back(to_string(blind(r)), r);
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  // Atoms with equal variable-blind keys form groups; the numbering depends
  // on their order, so the minimum rendering over group permutations is taken.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  double perms = 1;
  for (std::size_t i = 0; i < keyed.size();) {
    std::size_t j = i;
    while (j < keyed.size() && keyed[j].first == keyed[i].first) ++j;
    if (!keyed[i].second->ground && j - i > 1) {
      groups.emplace_back(i, j);
      for (std::size_t k = 2; k <= j - i; ++k) perms *= static_cast<double>(k);
    }
    i = j;
  }
  std::vector<std::size_t> order(keyed.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto render = [&](const std::vector<std::size_t>& ord) {
    Numbering num(builtins);
    std::string out = goal_part(num, goal_vars) + "{";
    for (std::size_t i = 0; i < ord.size(); ++i) {
      if (i) out += ",";
      out += num.str(keyed[ord[i]].second);
    }
    return out + "}";
  };
  if (perms > 5040) {
    // Refine: sort each group by its rendering until the order is stable.
    for (int round = 0; round < 8; ++round) {
      Numbering num(builtins);
      goal_part(num, goal_vars);
      std::vector<std::string> text(keyed.size());
      for (std::size_t i : order) text[i] = num.str(keyed[i].second);
      std::vector<std::size_t> next = order;
      for (auto [b, e] : groups) {
        std::stable_sort(next.begin() + static_cast<long>(b), next.begin() + static_cast<long>(e),
                         [&](std::size_t x, std::size_t y) { return text[x] < text[y]; });
      }
      if (next == order) break;
      order = std::move(next);
    }
    return render(order);
  }
  std::string best = render(order);
  while (true) {
    std::size_t g = 0;
    for (; g < groups.size(); ++g) {
      auto [b, e] = groups[g];
      if (std::next_permutation(order.begin() + static_cast<long>(b),
                                order.begin() + static_cast<long>(e))) {
        break;
      }
    }
    if (g == groups.size()) break;
    best = std::min(best, render(order));
  }
  return best;
}

std::string canonical(const ExecState& s, const std::vector<Term>& goal_vars) {
  std::vector<Term> atoms;
  for (const auto& c : s.store) atoms.push_back(c.atom);
  return canonical_state(goal_vars, s.builtins, atoms, s.failed);
}

std::set<std::string> wp_reachable_finals(const ChrGoal& goal, const ChrProgram& p,
                                          std::size_t bound) {
  std::vector<Term> gv = goal_variables(goal);
  std::set<std::string> finals;
  std::unordered_set<std::string> seen;
  std::vector<ExecState> stack{wp_initial(goal)};
  while (!stack.empty()) {
    ExecState s = std::move(stack.back());
    stack.pop_back();
    while (wp_goal_step(s) != WpTransition::None) {
    }
    if (!seen.insert(search_key(s, gv)).second) continue;
    if (seen.size() > bound) throw BudgetExceeded("state-space bound exceeded");
    if (s.failed) {
      finals.insert("failed");
      continue;
    }
    std::vector<WpInstance> cands = wp_highest(s, p);
    if (cands.empty()) {
      finals.insert(canonical(s, gv));
      continue;
    }
    for (const auto& c : cands) {
      ExecState n = s;
      wp_apply(n, p, c);
      stack.push_back(std::move(n));
    }
  }
  return finals;
}

}  // namespace chr
