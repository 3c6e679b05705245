#include "doctest.h"

#include <map>
#include <algorithm>
#include <random>

#include "chr/la_interp.hpp"
#include "chr/parser.hpp"
#include "chr/wp_interp.hpp"
#include "util.hpp"

using namespace chr;

namespace {

LASource la_file(const char* path) { return parse_la(testutil::read_file(path)); }
ChrSource chr_file(const char* path) { return parse_chrrp(testutil::read_file(path)); }

LAGoal la_goal(const std::string& text) { return parse_la("goal " + text + ".").goal; }
ChrGoal chr_goal(const std::string& text) { return parse_chrrp("goal " + text + ".").goal; }

bool has(const std::set<Term, TermLess>& s, const std::string& text) {
  return s.count(parse_term(text)) > 0;
}

}  // namespace

TEST_CASE("la_applicable examples") {
  auto dj = la_file("programs/dijkstra.la");
  LAState s = la_initial(la_goal("source(a), e(a,3,b)"));
  auto inst = la_applicable(s, dj.program);
  REQUIRE(inst.size() == 1);
  CHECK(dj.program.rules[inst[0].rule].name == "d1");
  CHECK(inst[0].priority == 1);

  CHECK(la_applicable(s, LAProgram{}).empty());

  LAState s2 = la_initial(la_goal("dist(a,0), e(a,3,b), dist(b,3)"));
  CHECK(la_applicable(s2, dj.program).empty());
  LAState s3 = la_initial(la_goal("dist(a,0), e(a,3,b)"));
  auto i3 = la_applicable(s3, dj.program);
  REQUIRE(i3.size() == 1);
  CHECK(i3[0].priority == 2);
}

TEST_CASE("la_step examples") {
  auto dj = la_file("programs/dijkstra.la");
  LAState s = la_initial(la_goal("source(a)"));
  REQUIRE(la_step(s, dj.program, la_first()));
  CHECK(has(s.positive, "dist(a,0)"));
  CHECK_FALSE(la_step(s, dj.program, la_first()));

  // two priority-1 instances: both successors are reachable under some choice
  LAState two = la_initial(la_goal("source(a), source(b)"));
  auto cands = la_highest(two, dj.program);
  REQUIRE(cands.size() == 2);
  std::set<std::string> succ;
  for (std::size_t k = 0; k < 2; ++k) {
    LAState t = two;
    la_step(t, dj.program, [k](const std::vector<LAInstance>&) { return k; });
    succ.insert(canonical(t));
  }
  CHECK(succ.size() == 2);
  for (const auto& c : cands) CHECK(succ.count(canonical(la_apply(two, c))));
}

TEST_CASE("la_run examples") {
  auto dj = la_file("programs/dijkstra.la");
  auto r = la_run(la_goal("source(a), e(a,1,b), e(b,1,c)"), dj.program);
  for (const char* d : {"dist(a,0)", "dist(b,1)", "dist(c,2)"}) {
    CHECK(has(r.state.positive, d));
    CHECK_FALSE(has(r.state.negative, d));
  }
  CHECK(la_run({}, dj.program).state.size() == 0);

  auto sc = la_run(la_goal("source(a), e(a,1,b), e(b,1,c), e(a,5,c)"), dj.program);
  CHECK(has(sc.state.positive, "dist(c,5)"));
  CHECK(has(sc.state.negative, "dist(c,5)"));
  CHECK(has(sc.state.positive, "dist(c,2)"));
  CHECK_FALSE(has(sc.state.negative, "dist(c,2)"));

  auto loop = parse_la("r @ 1 : n(X) => n(X+1).\n");
  CHECK_THROWS_AS(la_run(la_goal("n(0)"), loop.program, 50), BudgetExceeded);
}

TEST_CASE("wp_step examples") {
  auto leq = chr_file("programs/leq.chrrp");
  ExecState s = wp_initial(chr_goal("leq(a,b)"));
  std::string line;
  CHECK(wp_step(s, leq.program, wp_first(), &line) == WpTransition::Introduce);
  REQUIRE(s.store.size() == 1);
  CHECK(s.store[0].id == 1);
  CHECK(s.next_id == 2);
  CHECK(line == "INTRODUCE leq(a,b)#1");

  ExecState t = wp_initial(chr_goal("leq(X,Y), leq(Y,X)"));
  wp_goal_step(t);
  wp_goal_step(t);
  auto cands = wp_highest(t, leq.program);
  REQUIRE_FALSE(cands.empty());
  CHECK(leq.program.rules[cands[0].rule].name == "antisymmetry");
  CHECK(cands[0].priority == 2);
  CHECK(wp_step(t, leq.program, wp_first(), &line) == WpTransition::Apply);
  CHECK(line == "APPLY antisymmetry@2 [1,2]");
  CHECK(wp_step(t, leq.program, wp_first(), &line) == WpTransition::Solve);
  CHECK(t.store.empty());
  Term x = t.store.empty() ? nullptr : t.store[0].atom;
  (void)x;

  // a propagation instance already in the history is not offered again
  auto tp = chr_file("programs/tokenpair.chrrp");
  ExecState h = wp_initial(chr_goal("edge(1,2), edge(2,3)"));
  wp_goal_step(h);
  wp_goal_step(h);
  auto before = wp_instances(h, tp.program);
  REQUIRE(before.size() == 1);
  h.history.insert({"trans", before[0].ids});
  CHECK(wp_instances(h, tp.program).empty());
}

TEST_CASE("wp_run examples") {
  auto andp = chr_file("programs/and.chrrp");
  ChrGoal g = chr_goal("and(0,Y,Z)");
  auto r = wp_run(g, andp.program);
  CHECK(r.state.store.empty());
  Term z = g[0].atom->args[2];
  CHECK(to_string(r.state.builtins.resolve(z)) == "0");

  auto ms = chr_file("programs/mergesort.chrrp");
  CHECK(wp_run({}, ms.program).state.store.empty());
  auto m = wp_run(chr_goal("number(7), number(3), number(12), number(5)"), ms.program);
  std::map<std::int64_t, std::int64_t> next;
  int merges = 0;
  for (const auto& c : m.state.store) {
    if (c.atom->name == "arrow") next[c.atom->args[0]->value] = c.atom->args[1]->value;
    if (c.atom->name == "merge") ++merges;
  }
  CHECK(merges == 1);
  CHECK(next.size() == 3);
  CHECK(next[3] == 5);
  CHECK(next[5] == 7);
  CHECK(next[7] == 12);

  auto loop = chr_file("programs/loop.chrrp");
  CHECK_THROWS_AS(wp_run(loop.goal, loop.program, 100), BudgetExceeded);

  auto fail = parse_chrrp("1 :: r @ p(X) <=> X = 1, X = 2.\ngoal p(A).");
  auto fr = wp_run(fail.goal, fail.program);
  CHECK(fr.state.failed);
}

TEST_CASE("reachable_finals examples") {
  auto leq = chr_file("programs/leq.chrrp");
  auto fin = wp_reachable_finals(chr_goal("leq(A,B), leq(B,C), leq(C,A)"), leq.program);
  REQUIRE(fin.size() == 1);
  CHECK(*fin.begin() == "A=_1;B=_1;C=_1;{}");

  auto empty = wp_reachable_finals({}, leq.program);
  REQUIRE(empty.size() == 1);
  CHECK(*empty.begin() == "{}");

  auto dj = la_file("programs/dijkstra.la");
  auto lf = la_reachable_finals(la_goal("source(a), e(a,1,b), e(b,1,c)"), dj.program);
  CHECK(lf.size() == 1);

  // a non-confluent program has several finals
  auto nc = parse_chrrp("1 :: r1 @ p <=> a.\n1 :: r2 @ p <=> b.");
  CHECK(wp_reachable_finals(chr_goal("p"), nc.program).size() == 2);
}

TEST_CASE("canonical form ignores identifiers and variable names") {
  auto leq = chr_file("programs/leq.chrrp");
  ExecState a = wp_initial(chr_goal("leq(X,Y), leq(Y,Z)"));
  ExecState b = wp_initial(chr_goal("leq(Y,Z), leq(X,Y)"));
  while (wp_goal_step(a) != WpTransition::None) {
  }
  while (wp_goal_step(b) != WpTransition::None) {
  }
  CHECK(canonical(a, {}) == canonical(b, {}));
  ExecState c = wp_initial(chr_goal("leq(X,Y), leq(X,Z)"));
  while (wp_goal_step(c) != WpTransition::None) {
  }
  CHECK(canonical(a, {}) != canonical(c, {}));
}

TEST_CASE("property: LA runs are monotone, fresh and priority-sound") {
  auto dj = la_file("programs/dijkstra.la");
  auto uf = la_file("programs/unionfind.la");
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const LAProgram& p = trial % 2 ? dj.program : uf.program;
    LAGoal goal;
    if (trial % 2) {
      goal = la_goal("source(n0)");
      for (int e = 0; e < 6; ++e) {
        goal.push_back({false, parse_term("e(n" + std::to_string(rng() % 4) + "," +
                                          std::to_string(1 + rng() % 5) + ",n" +
                                          std::to_string(rng() % 4) + ")")});
      }
    } else {
      for (int i = 1; i <= 4; ++i) {
        goal.push_back({false, parse_term("find(" + std::to_string(i) + "," +
                                          std::to_string(i) + ")")});
      }
      for (int k = 0; k < 3; ++k) {
        goal.push_back({false, parse_term("union(" + std::to_string(1 + rng() % 4) + "," +
                                          std::to_string(1 + rng() % 4) + ")")});
      }
    }
    LAState s = la_initial(goal);
    auto choose = la_random(rng);
    for (int step = 0; step < 500; ++step) {
      auto all = la_applicable(s, p);
      auto high = la_highest(s, p);
      if (high.empty()) break;
      const LAInstance& inst = high[choose(high)];
      for (const auto& i : all) CHECK(i.priority >= inst.priority);
      LAState n = la_apply(s, inst);
      CHECK(n.size() > s.size());
      for (const auto& a : s.positive) CHECK(n.positive.count(a));
      for (const auto& a : s.negative) CHECK(n.negative.count(a));
      s = std::move(n);
    }
    CHECK(la_applicable(s, p).empty());
  }
}

TEST_CASE("property: omega_p firings are omega_t firings and never repeat") {
  auto leq = chr_file("programs/leq.chrrp");
  auto tp = chr_file("programs/tokenpair.chrrp");
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const ChrProgram& p = trial % 2 ? leq.program : tp.program;
    std::string g;
    for (int k = 0; k < 4; ++k) {
      if (k) g += ", ";
      std::string a = std::to_string(rng() % 3), b = std::to_string(rng() % 3);
      g += trial % 2 ? "leq(V" + a + ",V" + b + ")" : "edge(" + a + "," + b + ")";
    }
    ExecState s = wp_initial(chr_goal(g));
    auto choose = wp_random(rng);
    std::set<HistoryTuple> fired;
    for (int step = 0; step < 2000; ++step) {
      if (wp_goal_step(s) != WpTransition::None) continue;
      auto all = wp_instances(s, p);
      auto high = wp_highest(s, p);
      if (high.empty()) break;
      const WpInstance& inst = high[choose(high)];
      bool in_all = false;
      for (const auto& i : all) {
        CHECK(i.priority >= inst.priority);
        in_all = in_all || (i.rule == inst.rule && i.ids == inst.ids);
      }
      CHECK(in_all);
      if (p.rules[inst.rule].kind() == RuleKind::Propagation) {
        CHECK(fired.insert({p.rules[inst.rule].name, inst.ids}).second);
      }
      wp_apply(s, p, inst);
    }
  }
}
