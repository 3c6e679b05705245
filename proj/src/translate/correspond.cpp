#include "chr/correspond.hpp"

#include <map>
#include <random>

#include "chr/printer.hpp"

namespace chr {

namespace {

std::string store_text(const ExecState& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.store.size(); ++i) {
    if (i) out += ",";
    out += to_string(s.store[i].atom) + "#" + std::to_string(s.store[i].id);
  }
  return out + "} n=" + std::to_string(s.next_id);
}

bool same_chr_state(const ExecState& a, const ExecState& b) {
  if (a.next_id != b.next_id || a.store.size() != b.store.size()) return false;
  for (std::size_t i = 0; i < a.store.size(); ++i) {
    if (a.store[i].id != b.store[i].id) return false;
    Term x = normalize_arith(a.builtins.resolve(a.store[i].atom));
    Term y = normalize_arith(b.builtins.resolve(b.store[i].atom));
    if (!term_equal(x, y)) return false;
  }
  return a.history == b.history;
}

// At most one a_r(X, _) per X once no priority 1 or 2 rule applies.
std::string uniqueness_violation(const ExecState& s, const ChrProgram& p,
                                 const std::map<std::string, std::string>& reps) {
  if (!s.goal.empty()) return {};
  auto high = wp_highest(s, p);
  if (!high.empty() && high[0].priority <= 2) return {};
  std::set<Term, TermLess> seen;
  for (const auto& c : s.store) {
    Term t = c.atom;
    if (!reps.count(t->name)) continue;
    std::vector<Term> args(t->args.begin(), t->args.end() - 1);
    if (!seen.insert(mk_compound(t->name, std::move(args))).second) {
      return "two representations of " + to_string(t) + " in a pre-normal state";
    }
  }
  return {};
}

std::string identifier_violation(const LAState& s) {
  std::set<std::int64_t> ids;
  for (const auto& a : s.positive) {
    if (s.negative.count(a) || a->args.empty()) continue;
    if (a->name == "next_id" || a->name == "token") continue;
    if (!is_int(a->args.back())) continue;
    if (!ids.insert(a->args.back()->value).second) {
      return "identifier " + std::to_string(a->args.back()->value) + " is shared";
    }
  }
  return {};
}

}  // namespace

CorrespondenceReport check_la2chr(const LASource& src, const La2ChrResult& tr,
                                  std::size_t budget, std::uint64_t seed) {
  CorrespondenceReport rep;
  std::mt19937_64 rng(seed);
  const LAProgram& la = tr.normalized;
  ExecState s = wp_initial(la_goal_to_chr(src.goal));
  LAState prev = chrtola(s, tr.rep_to_pred);
  if (!(prev == la_initial(src.goal))) {
    rep.ok = false;
    rep.message = "initial states differ: " + canonical(prev);
    return rep;
  }
  std::map<std::string, std::string> source_of;
  for (const auto& e : tr.name_map) source_of[e.generated] = e.source;
  auto choose = wp_random(rng);
  while (true) {
    if (rep.steps >= budget) {
      rep.inconclusive = true;
      rep.message = "budget of " + std::to_string(budget) + " steps exhausted";
      return rep;
    }
    std::string line;
    std::string fired;
    if (!s.goal.empty()) {
      wp_goal_step(s, &line);
    } else {
      auto cands = wp_highest(s, tr.program);
      if (cands.empty()) break;
      const WpInstance& inst = cands[choose(cands)];
      fired = tr.program.rules[inst.rule].name;
      wp_apply(s, tr.program, inst, &line);
    }
    ++rep.steps;
    rep.trace.push_back("CHR " + line);
    std::string bad = uniqueness_violation(s, tr.program, tr.rep_to_pred);
    if (!bad.empty()) {
      rep.ok = false;
      rep.message = bad;
      return rep;
    }
    LAState cur = chrtola(s, tr.rep_to_pred);
    if (cur == prev) continue;
    bool matched = false;
    for (const auto& inst : la_highest(prev, la)) {
      if (!(la_apply(prev, inst) == cur)) continue;
      if (!fired.empty() && source_of[fired] != la.rules[inst.rule].name) continue;
      rep.trace.push_back("LA  " + to_string(inst, la));
      matched = true;
      break;
    }
    if (!matched) {
      rep.ok = false;
      rep.message = "CHR step " + line + " maps to no LA transition from " + canonical(prev);
      return rep;
    }
    prev = std::move(cur);
  }
  auto pending = la_highest(prev, la);
  if (!pending.empty()) {
    rep.ok = false;
    rep.message = "CHR final state maps to a non-final LA state: " +
                  to_string(pending[0], la) + " still applies";
  }
  return rep;
}

CorrespondenceReport check_la2chr(const LASource& src, std::size_t budget,
                                  std::uint64_t seed) {
  return check_la2chr(src, translate_la_program(src.program, &src.goal), budget, seed);
}

CorrespondenceReport check_chr2la(const ChrSource& src, const Chr2LaResult& tr,
                                  std::size_t budget, std::uint64_t seed) {
  CorrespondenceReport rep;
  check_segment(src);
  std::mt19937_64 rng(seed);
  LAState s = la_initial(chr_goal_to_la(src.goal));
  ExecState reference = wp_initial(src.goal);
  while (wp_goal_step(reference) != WpTransition::None) {
  }
  ExecState prev = latochr(s);
  if (!same_chr_state(prev, reference)) {
    rep.ok = false;
    rep.message = "initial states differ: " + store_text(prev) + " vs " + store_text(reference);
    return rep;
  }
  auto choose = la_random(rng);
  while (true) {
    if (rep.steps >= budget) {
      rep.inconclusive = true;
      rep.message = "budget of " + std::to_string(budget) + " steps exhausted";
      return rep;
    }
    auto cands = la_highest(s, tr.program);
    if (cands.empty()) break;
    const LAInstance& inst = cands[choose(cands)];
    rep.trace.push_back("LA  " + to_string(inst, tr.program));
    s = la_apply(s, inst);
    ++rep.steps;
    std::string bad = identifier_violation(s);
    ExecState cur;
    if (bad.empty()) {
      try {
        cur = latochr(s);
      } catch (const TranslationError& e) {
        bad = e.what();
      }
    }
    if (!bad.empty()) {
      rep.ok = false;
      rep.message = bad;
      return rep;
    }
    if (same_chr_state(prev, cur)) continue;
    bool matched = false;
    for (const auto& w : wp_highest(prev, src.program)) {
      ExecState next = prev;
      std::string line;
      wp_apply(next, src.program, w, &line);
      while (wp_goal_step(next) != WpTransition::None) {
      }
      if (same_chr_state(next, cur)) {
        rep.trace.push_back("CHR " + line);
        matched = true;
        break;
      }
    }
    if (!matched) {
      rep.ok = false;
      rep.message = "LA step " + to_string(inst, tr.program) +
                    " maps to no omega_p transition from " + store_text(prev);
      return rep;
    }
    prev = std::move(cur);
  }
  auto pending = wp_highest(prev, src.program);
  if (!pending.empty()) {
    rep.ok = false;
    rep.message = "LA final state maps to a non-final CHR state: rule " +
                  src.program.rules[pending[0].rule].name + " still applies";
  }
  return rep;
}

CorrespondenceReport check_chr2la(const ChrSource& src, std::size_t budget,
                                  std::uint64_t seed) {
  return check_chr2la(src, translate_chrrp_program(src.program), budget, seed);
}

LAProgram mutate_priority(const LAProgram& p, const std::string& rule, std::int64_t delta) {
  LAProgram out = p;
  for (auto& r : out.rules) {
    if (r.name == rule) r.priority = normalize_arith(mk_compound("+", {r.priority, mk_int(delta)}));
  }
  return out;
}

LAProgram drop_alldiff(const LAProgram& p, const std::string& rule) {
  LAProgram out = p;
  for (auto& r : out.rules) {
    if (r.name.rfind(rule, 0) != 0) continue;
    std::vector<LAAntecedent> kept;
    for (const auto& a : r.antecedents) {
      bool id_diseq = a.kind == LAAntecedent::Kind::Compare && a.cmp.op == CmpOp::Ne &&
                      is_var(a.cmp.lhs) && is_var(a.cmp.rhs) &&
                      a.cmp.lhs->name.rfind("Id", 0) == 0 && a.cmp.rhs->name.rfind("Id", 0) == 0;
      if (!id_diseq) kept.push_back(a);
    }
    r.antecedents = std::move(kept);
  }
  return out;
}

LAProgram drop_token_rule(const LAProgram& p, const std::string& rule) {
  LAProgram out;
  for (const auto& r : p.rules) {
    if (r.name != rule + "_p1") out.rules.push_back(r);
  }
  return out;
}

}  // namespace chr
