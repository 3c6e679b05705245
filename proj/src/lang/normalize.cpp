#include "chr/normalize.hpp"

#include <algorithm>
#include <set>

namespace chr {

namespace {

bool covers(const std::vector<Term>& bound, const std::vector<Term>& need) {
  for (const auto& v : need) {
    bool found = false;
    for (const auto& b : bound) found = found || b->value == v->value;
    if (!found) return false;
  }
  return true;
}

std::string fresh_name(const LARule& r, const std::string& base) {
  std::set<std::string> used;
  for (const auto& v : vars_of(r)) used.insert(v->name);
  std::string name = base;
  for (int k = 2; used.count(name); ++k) name = base + std::to_string(k);
  return name;
}

}  // namespace

bool is_priority_predicate(const std::string& functor) {
  return functor.rfind("priority_", 0) == 0;
}

std::vector<LARule> normalize_la_priority(const LARule& rule) {
  std::vector<Term> pv = vars_of(rule.priority);
  if (pv.empty()) return {rule};
  std::vector<Term> bound;
  std::size_t m = 0;
  for (; m < rule.antecedents.size(); ++m) {
    const auto& a = rule.antecedents[m];
    if (a.is_user()) collect_vars(a.atom, bound);
    if (covers(bound, pv)) break;
  }
  if (m == 0 || m >= rule.antecedents.size()) return {rule};
  std::string pred = "priority_" + rule.name;
  LARule r1;
  r1.name = rule.name + "__1";
  r1.priority = mk_int(1);
  r1.antecedents.assign(rule.antecedents.begin(),
                        rule.antecedents.begin() + static_cast<long>(m) + 1);
  r1.conclusions.push_back({false, mk_compound(pred, {rule.priority})});
  LARule r2;
  r2.name = rule.name + "__2";
  Term P = mk_var(fresh_name(rule, "P"));
  r2.priority = P;
  r2.antecedents.push_back(LAAntecedent::positive(mk_compound(pred, {P})));
  r2.antecedents.insert(r2.antecedents.end(), rule.antecedents.begin(),
                        rule.antecedents.end());
  r2.antecedents.push_back(LAAntecedent::compare({CmpOp::Eq, P, rule.priority}));
  r2.conclusions = rule.conclusions;
  return {r1, r2};
}

LAProgram normalize_la_priority(const LAProgram& program) {
  LAProgram out;
  for (const auto& r : program.rules) {
    for (auto& n : normalize_la_priority(r)) out.rules.push_back(std::move(n));
  }
  return out;
}

IntermediateRule to_intermediate(const ChrRule& rule,
                                 const std::optional<std::vector<int>>& join_order) {
  std::vector<Term> heads = rule.heads();
  std::vector<int> order;
  if (join_order) {
    order = *join_order;
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    bool ok = sorted.size() == heads.size();
    for (std::size_t i = 0; ok && i < sorted.size(); ++i) {
      ok = sorted[i] == static_cast<int>(i);
    }
    if (!ok) {
      throw IntermediateError("rule " + rule.name +
                              ": join order is not a permutation of the heads");
    }
  } else {
    for (std::size_t i = 0; i < heads.size(); ++i) order.push_back(static_cast<int>(i));
  }
  IntermediateRule out;
  out.priority = rule.priority;
  out.name = rule.name;
  out.body = rule.body;
  std::vector<Term> bound;
  std::vector<bool> placed(rule.guard.size(), false);
  for (int idx : order) {
    IntermediateItem item;
    item.kept = idx < static_cast<int>(rule.kept.size());
    item.head = heads[idx];
    item.source_index = idx;
    collect_vars(item.head, bound);
    for (std::size_t g = 0; g < rule.guard.size(); ++g) {
      if (placed[g]) continue;
      std::vector<Term> gv;
      collect_vars(rule.guard[g], gv);
      if (covers(bound, gv)) {
        item.post_guard.push_back(rule.guard[g]);
        placed[g] = true;
      }
    }
    out.items.push_back(std::move(item));
  }
  // Conjuncts with variables outside the heads stay at the last position.
  for (std::size_t g = 0; g < rule.guard.size(); ++g) {
    if (!placed[g] && !out.items.empty()) {
      out.items.back().post_guard.push_back(rule.guard[g]);
    }
  }
  return out;
}

}  // namespace chr
