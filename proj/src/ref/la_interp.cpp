#include "chr/la_interp.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

namespace chr {

bool LAState::operator==(const LAState& o) const {
  auto eq = [](const std::set<Term, TermLess>& a, const std::set<Term, TermLess>& b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), term_equal);
  };
  return eq(positive, o.positive) && eq(negative, o.negative);
}

LAChooser la_first() {
  return [](const std::vector<LAInstance>&) { return std::size_t{0}; };
}

LAChooser la_random(std::mt19937_64& rng) {
  return [&rng](const std::vector<LAInstance>& c) {
    return std::uniform_int_distribution<std::size_t>(0, c.size() - 1)(rng);
  };
}

LAState la_initial(const LAGoal& goal) {
  LAState s;
  for (const auto& g : goal) {
    Term a = normalize_arith(g.atom);
    (g.del ? s.negative : s.positive).insert(a);
  }
  return s;
}

namespace {

using Index = std::map<std::string, std::vector<Term>>;

Index index_of(const std::set<Term, TermLess>& atoms) {
  Index idx;
  for (const auto& a : atoms) idx[pred_key(a)].push_back(a);
  return idx;
}

struct Enumerator {
  const LAState& s;
  const LARule& rule;
  int rule_index;
  Index pos, neg;
  std::vector<LAInstance>& out;

  void run(std::size_t k, Substitution& theta, std::vector<Term>& matched) {
    if (k == rule.antecedents.size()) {
      finish(theta, matched);
      return;
    }
    const auto& a = rule.antecedents[k];
    if (a.kind == LAAntecedent::Kind::Compare) {
      if (eval_comparison(apply(theta, a.cmp)) == Tri::Entailed) {
        run(k + 1, theta, matched);
      }
      return;
    }
    const Index& idx = a.kind == LAAntecedent::Kind::Positive ? pos : neg;
    auto it = idx.find(pred_key(a.atom));
    if (it == idx.end()) return;
    for (const auto& cand : it->second) {
      if (a.kind == LAAntecedent::Kind::Positive && s.negative.count(cand)) continue;
      Substitution next = theta;
      if (!match_into(a.atom, cand, next)) continue;
      matched.push_back(cand);
      run(k + 1, next, matched);
      matched.pop_back();
    }
  }

  void finish(const Substitution& theta, const std::vector<Term>& matched) {
    LAInstance inst;
    inst.rule = rule_index;
    inst.matched = matched;
    bool fresh = false;
    for (const auto& c : rule.conclusions) {
      Term g = normalize_arith(theta.apply(c.atom));
      if (!g->ground) throw EvalError("non-ground conclusion " + to_string(g));
      fresh = fresh || !(c.del ? s.negative : s.positive).count(g);
      inst.conclusions.push_back({c.del, g});
    }
    if (!fresh) return;
    inst.priority = eval_arith(theta.apply(rule.priority));
    out.push_back(std::move(inst));
  }
};

}  // namespace

std::vector<LAInstance> la_applicable(const LAState& s, const LAProgram& p) {
  std::vector<LAInstance> out;
  Index pos = index_of(s.positive), neg = index_of(s.negative);
  for (std::size_t r = 0; r < p.rules.size(); ++r) {
    Enumerator e{s, p.rules[r], static_cast<int>(r), pos, neg, out};
    Substitution theta;
    std::vector<Term> matched;
    e.run(0, theta, matched);
  }
  return out;
}

std::vector<LAInstance> la_highest(const LAState& s, const LAProgram& p) {
  std::vector<LAInstance> all = la_applicable(s, p);
  if (all.empty()) return all;
  std::int64_t best = all[0].priority;
  for (const auto& i : all) best = std::min(best, i.priority);
  std::vector<LAInstance> out;
  for (auto& i : all) {
    if (i.priority == best) out.push_back(std::move(i));
  }
  return out;
}

LAState la_apply(const LAState& s, const LAInstance& inst) {
  LAState n = s;
  for (const auto& c : inst.conclusions) (c.del ? n.negative : n.positive).insert(c.atom);
  return n;
}

bool la_step(LAState& s, const LAProgram& p, const LAChooser& choose,
             LAInstance* fired) {
  std::vector<LAInstance> cands = la_highest(s, p);
  if (cands.empty()) return false;
  const LAInstance& inst = cands[choose(cands)];
  for (const auto& c : inst.conclusions) (c.del ? s.negative : s.positive).insert(c.atom);
  if (fired) *fired = inst;
  return true;
}

std::string to_string(const LAInstance& inst, const LAProgram& p) {
  std::string out = "APPLY " + p.rules[inst.rule].name + "@" +
                    std::to_string(inst.priority) + " [";
  for (std::size_t i = 0; i < inst.matched.size(); ++i) {
    if (i) out += ",";
    out += to_string(inst.matched[i]);
  }
  return out + "]";
}

LARunResult la_run(const LAGoal& goal, const LAProgram& p, std::size_t budget,
                   const LAChooser& choose, bool trace) {
  LARunResult res;
  res.state = la_initial(goal);
  LAInstance fired;
  while (la_step(res.state, p, choose, &fired)) {
    ++res.steps;
    if (trace) res.trace.push_back(to_string(fired, p));
    if (res.steps >= budget && !la_highest(res.state, p).empty()) {
      throw BudgetExceeded("LA run exceeded " + std::to_string(budget) +
                           " steps; partial state: " + canonical(res.state));
    }
  }
  return res;
}

std::string canonical(const LAState& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& a : s.positive) {
    if (!first) out += ",";
    out += to_string(a);
    first = false;
  }
  out += "} del{";
  first = true;
  for (const auto& a : s.negative) {
    if (!first) out += ",";
    out += to_string(a);
    first = false;
  }
  return out + "}";
}

std::set<std::string> la_reachable_finals(const LAGoal& goal, const LAProgram& p,
                                          std::size_t bound) {
  std::set<std::string> finals;
  std::unordered_set<std::string> seen;
  std::vector<LAState> stack{la_initial(goal)};
  while (!stack.empty()) {
    LAState s = std::move(stack.back());
    stack.pop_back();
    if (!seen.insert(canonical(s)).second) continue;
    if (seen.size() > bound) {
      throw BudgetExceeded("state-space bound exceeded");
    }
    std::vector<LAInstance> cands = la_highest(s, p);
    if (cands.empty()) {
      finals.insert(canonical(s));
      continue;
    }
    for (const auto& c : cands) stack.push_back(la_apply(s, c));
  }
  return finals;
}

}  // namespace chr
