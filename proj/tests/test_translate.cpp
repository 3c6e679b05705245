#include "doctest.h"

#include <random>

#include "chr/correspond.hpp"
#include "chr/parser.hpp"
#include "chr/printer.hpp"
#include "chr/translate.hpp"
#include "util.hpp"

using namespace chr;

namespace {

template <class P>
const auto* rule_named(const P& p, const std::string& name) {
  for (const auto& r : p.rules) {
    if (r.name == name) return &r;
  }
  return static_cast<decltype(&p.rules[0])>(nullptr);
}

LARule la_rule(const std::string& text) { return parse_la(text).program.rules.at(0); }
ChrRule chr_rule(const std::string& text) { return parse_chrrp(text).program.rules.at(0); }

bool has(const std::set<Term, TermLess>& s, const std::string& text) {
  return s.count(parse_term(text)) > 0;
}

}  // namespace

TEST_CASE("split") {
  LARule d2 = la_rule("d2 @ 1 : dist(V,D1), dist(V,D2), D2 < D1 => del(dist(V,D1)).");
  auto [u, c] = split(d2.antecedents);
  REQUIRE(u.size() == 2);
  REQUIRE(c.size() == 1);
  CHECK(to_string(c[0].cmp) == "D2 < D1");
  CHECK(split({}).first.empty());
  LARule all = la_rule("r @ 1 : 1 < 2, 3 =< 4 => a.");
  CHECK(split(all.antecedents).first.empty());
  CHECK(split(all.antecedents).second.size() == 2);
}

TEST_CASE("enumerate_partitions and filter_representatives") {
  LARule uf4 = la_rule("uf4 @ 1 : union(X,Y), find(X,Z), find(Y,Z) => del(union(X,Y)).");
  auto [u, c] = split(uf4.antecedents);
  auto parts = enumerate_partitions(u, c);
  REQUIRE(parts.size() == 2);
  CHECK(partition_label(parts[0]) == "1_2_3");
  CHECK(partition_label(parts[1]) == "1_23");
  auto reps = filter_representatives(u, parts[1]);
  REQUIRE(reps.size() == 2);
  Term both = parse_term("f(union(X,X),find(X,Z))");
  CHECK(alpha_equal({reps[0].atom, reps[1].atom}, both->args));
  CHECK(filter_representatives(u, parts[0]).size() == 3);

  LARule one = la_rule("r @ 1 : a(X) => b(X).");
  auto p1 = enumerate_partitions(split(one.antecedents).first, {});
  REQUIRE(p1.size() == 1);
  CHECK(partition_label(p1[0]) == "1");

  LARule d2 = la_rule("d2 @ 1 : dist(V,D1), dist(V,D2), D2 < D1 => del(dist(V,D1)).");
  auto [du, dc] = split(d2.antecedents);
  auto pd = enumerate_partitions(du, dc);
  REQUIRE(pd.size() == 1);
  CHECK(partition_label(pd[0]) == "1_2");

  LARule pair = la_rule("r @ 1 : a(X), a(Y) => b(X,Y).");
  auto pp = enumerate_partitions(split(pair.antecedents).first, {});
  REQUIRE(pp.size() == 2);
  auto collapsed = filter_representatives(split(pair.antecedents).first, pp[1]);
  REQUIRE(collapsed.size() == 1);
  CHECK(alpha_equal({collapsed[0].atom}, {parse_term("a(X)")}));

  // Bell numbers
  std::vector<LAAntecedent> free_heads;
  const std::size_t bell[] = {1, 1, 2, 5, 15, 52};
  for (std::size_t m = 0; m <= 5; ++m) {
    CHECK(enumerate_partitions(free_heads, {}).size() == bell[m]);
    free_heads.push_back(LAAntecedent::positive(mk_compound("a", {mk_var("V")})));
  }
  std::vector<LAAntecedent> nine(9, LAAntecedent::positive(parse_term("a(1)")));
  CHECK_THROWS_AS(enumerate_partitions(nine, {}), TranslationError);
}

TEST_CASE("add_modes") {
  std::set<std::string> used;
  auto [h, g] = add_modes({LAAntecedent::positive(parse_term("dist(V,D)"))}, used);
  REQUIRE(h.size() == 1);
  CHECK(to_string(h[0]) == "dist_r(V,D,p)");
  CHECK(g.empty());
  Term a = parse_term("a(X)");
  auto [h2, g2] = add_modes({LAAntecedent::negative(a)}, used);
  CHECK(to_string(h2[0]) == "a_r(X,N)");
  REQUIRE(g2.size() == 1);
  CHECK(to_string(g2[0]) == "N \\= p");
  CHECK(add_modes({}, used).first.empty());
}

TEST_CASE("translate_la_program reproduces the Dijkstra listing") {
  auto src = parse_la(testutil::read_file("programs/dijkstra.la"));
  auto tr = translate_la_program(src.program);
  auto expected = parse_chrrp(
      "3 :: d1__1 @ source_r(V,p) ==> dist(V,0).\n"
      "3 :: d2__1_2 @ dist_r(V,D1,p), dist_r(V,D2,p) ==> D2 < D1 | del(dist(V,D1)).\n"
      "D+4 :: d3__1_2 @ dist_r(V,D,p), e_r(V,C,U,p) ==> dist(U,D+C).\n"
      "1 :: sd_e_3_1 @ e_r(X1,X2,X3,M) \\ e(X1,X2,X3) <=> M \\= n | true.\n"
      "1 :: sd_e_3_2 @ e_r(X1,X2,X3,n), e(X1,X2,X3) <=> e_r(X1,X2,X3,b).\n"
      "2 :: sd_e_3_3 @ e(X1,X2,X3) <=> e_r(X1,X2,X3,p).\n"
      "1 :: sd_e_3_4 @ e_r(X1,X2,X3,M) \\ del(e(X1,X2,X3)) <=> M \\= p | true.\n"
      "1 :: sd_e_3_5 @ e_r(X1,X2,X3,p), del(e(X1,X2,X3)) <=> e_r(X1,X2,X3,b).\n"
      "2 :: sd_e_3_6 @ del(e(X1,X2,X3)) <=> e_r(X1,X2,X3,n).\n");
  for (const auto& r : expected.program.rules) {
    const ChrRule* got = rule_named(tr.program, r.name);
    REQUIRE_MESSAGE(got, r.name);
    CHECK_MESSAGE(ast_equal(*got, r), to_string(*got));
  }
  CHECK(tr.program.rules.size() == 3 * 6 + 3);
  for (const auto& e : tr.name_map) CHECK(rule_named(tr.program, e.generated));
  CHECK(tr.name_map.size() == tr.program.rules.size());
  CHECK(translate_la_program(LAProgram{}).program.rules.empty());
}

TEST_CASE("translate_la_program: uf4 partition rules") {
  auto src = parse_la("uf4 @ 1 : union(X,Y), find(X,Z), find(Y,Z) => del(union(X,Y)).\n");
  auto tr = translate_la_program(src.program);
  auto expected = parse_chrrp(
      "3 :: uf4__1_2_3 @ union_r(X,Y,p), find_r(X,Z,p), find_r(Y,Z,p) ==> del(union(X,Y)).\n"
      "3 :: uf4__1_23 @ union_r(X,X,p), find_r(X,Z,p) ==> del(union(X,X)).\n");
  for (const auto& r : expected.program.rules) {
    const ChrRule* got = rule_named(tr.program, r.name);
    REQUIRE(got);
    CHECK_MESSAGE(ast_equal(*got, r), to_string(*got));
  }
  for (const auto& r : tr.program.rules) {
    if (r.name.rfind("uf4", 0) == 0) CHECK(r.priority->value == 3);
  }
}

TEST_CASE("translate_la_program: deleted antecedents get mode guards") {
  auto src = parse_la("r @ 2 : a(X), del(b(X)) => c(X).\n");
  auto tr = translate_la_program(src.program);
  auto expected = chr_rule("4 :: r__1_2 @ a_r(X,p), b_r(X,N) ==> N \\= p | c(X).");
  const ChrRule* got = rule_named(tr.program, "r__1_2");
  REQUIRE(got);
  CHECK_MESSAGE(ast_equal(*got, expected), to_string(*got));
}

TEST_CASE("chrtola") {
  std::map<std::string, std::string> reps{{"dist_r", "dist"}, {"e_r", "e"}};
  ExecState s;
  s.store.push_back({3, parse_term("dist_r(a,0,p)")});
  LAState l = chrtola(s, reps);
  CHECK(has(l.positive, "dist(a,0)"));
  CHECK(l.negative.empty());

  ExecState b;
  b.store.push_back({7, parse_term("dist_r(a,5,b)")});
  LAState lb = chrtola(b, reps);
  CHECK(has(lb.positive, "dist(a,5)"));
  CHECK(has(lb.negative, "dist(a,5)"));

  ExecState g;
  g.goal.push_back(BodyItem::user(parse_term("del(e(a,3,b))")));
  CHECK(has(chrtola(g, reps).negative, "e(a,3,b)"));
}

TEST_CASE("translate_chrrp_program reproduces the merge sort listing") {
  auto src = parse_chrrp(testutil::read_file("programs/mergesort.chrrp"));
  auto tr = translate_chrrp_program(src.program);
  auto expected = parse_la(
      "ms1_p @ 1 : arrow(X,A,Id1), arrow(X,B,Id2), A < B, next_id(NId) =>\n"
      "  del(arrow(X,B,Id2)), del(next_id(NId)), arrow(A,B,NId), next_id(NId+1).\n"
      "ms2_p @ 2 : merge(N,A,Id1), merge(N,B,Id2), A < B, next_id(NId) =>\n"
      "  del(merge(N,A,Id1)), del(merge(N,B,Id2)), del(next_id(NId)),\n"
      "  merge(2*N+1,A,NId), arrow(A,B,NId+1), next_id(NId+2).\n"
      "ms3_p @ 3 : number(X,Id), next_id(NId) => del(number(X,Id)),\n"
      "  del(next_id(NId)), merge(0,X,NId), next_id(NId+1).\n");
  REQUIRE(tr.program.rules.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK_MESSAGE(ast_equal(tr.program.rules[i], expected.program.rules[i]),
                  to_string(tr.program.rules[i]));
  }
}

TEST_CASE("translate_chrrp_program: leq transitivity token pair") {
  auto src = parse_chrrp("3 :: transitivity @ leq(X,Y), leq(Y,Z) ==> leq(X,Z).\n");
  auto tr = translate_chrrp_program(src.program);
  auto expected = parse_la(
      "transitivity_p1 @ 3 : leq(X,Y,Id1), leq(Y,Z,Id2), Id1 \\= Id2 =>\n"
      "  token(transitivity,[Id1,Id2]).\n"
      "transitivity_p2 @ 3 : leq(X,Y,Id1), leq(Y,Z,Id2), Id1 \\= Id2,\n"
      "  token(transitivity,[Id1,Id2]), next_id(NId) =>\n"
      "  del(token(transitivity,[Id1,Id2])), del(next_id(NId)),\n"
      "  leq(X,Z,NId), next_id(NId+1).\n");
  CHECK(ast_equal(tr.program, expected.program));
  CHECK(tr.name_map.size() == 2);
  CHECK(tr.name_map[0].source == "transitivity");

  auto single = translate_chrrp_program(parse_chrrp("1 :: r @ a(X) <=> b(X).").program);
  for (const auto& a : single.program.rules[0].antecedents) {
    CHECK(a.kind != LAAntecedent::Kind::Compare);
  }
}

TEST_CASE("segment checks") {
  auto leq = parse_chrrp(testutil::read_file("programs/leq.chrrp"));
  CHECK_THROWS_AS(translate_chrrp_program(leq.program), TranslationError);
  CHECK_FALSE(segment_violation(leq.program.rules[2]).empty());
  auto ground = parse_chrrp("1 :: r @ a(X) <=> b(X).\ngoal a(X).");
  CHECK_THROWS_AS(check_segment(ground), TranslationError);
  auto unrestricted = parse_chrrp("1 :: r @ a(X) <=> b(Y).");
  CHECK(segment_violation(unrestricted.program.rules[0]).find("Y") != std::string::npos);
}

TEST_CASE("latochr") {
  LAState s;
  s.positive.insert(parse_term("number(5,1)"));
  s.positive.insert(parse_term("next_id(2)"));
  ExecState e = latochr(s);
  REQUIRE(e.store.size() == 1);
  CHECK(e.store[0].id == 1);
  CHECK(to_string(e.store[0].atom) == "number(5)");
  CHECK(e.next_id == 2);
  CHECK(e.history.empty());

  LAState t = s;
  t.positive.insert(parse_term("token(transitivity,[1,2])"));
  t.negative.insert(parse_term("token(transitivity,[1,2])"));
  t.negative.insert(parse_term("number(5,1)"));
  ExecState et = latochr(t);
  CHECK(et.store.empty());
  CHECK(et.history.count({"transitivity", {1, 2}}));

  LAState none;
  CHECK_THROWS_AS(latochr(none), TranslationError);
  LAState two = s;
  two.positive.insert(parse_term("next_id(3)"));
  CHECK_THROWS_AS(latochr(two), TranslationError);
}

TEST_CASE("check_correspondence examples") {
  auto dj = parse_la(testutil::read_file("programs/dijkstra.la"));
  auto r1 = check_la2chr(dj, 100000, 1);
  CHECK_MESSAGE(r1.ok, r1.message);
  CHECK_FALSE(r1.inconclusive);

  auto ms = parse_chrrp(testutil::read_file("programs/mergesort.chrrp"));
  auto r2 = check_chr2la(ms, 100000, 1);
  CHECK_MESSAGE(r2.ok, r2.message);

  LASource empty{dj.program, {}};
  CHECK(check_la2chr(empty, 10, 1).ok);
  ChrSource empty_chr{ms.program, {}};
  CHECK(check_chr2la(empty_chr, 10, 1).ok);

  auto loop = parse_la("r @ 1 : n(X) => n(X+1).\ngoal n(0).");
  CHECK(check_la2chr(loop, 200, 1).inconclusive);
}

TEST_CASE("check_correspondence detects faulty translations") {
  auto tp = parse_chrrp(testutil::read_file("programs/tokenpair.chrrp"));
  tp.goal = parse_chrrp("goal edge(1,1), edge(1,2), edge(2,1).").goal;
  auto tr = translate_chrrp_program(tp.program);
  auto detected = [&](const LAProgram& p) {
    Chr2LaResult m{p, tr.name_map};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto r = check_chr2la(tp, m, 20000, seed);
      if (!r.ok && !r.inconclusive) return true;
    }
    return false;
  };
  CHECK_FALSE(detected(tr.program));
  CHECK(detected(drop_alldiff(tr.program, "trans")));
  CHECK(detected(drop_token_rule(tr.program, "trans")));

  auto ms = parse_chrrp(testutil::read_file("programs/mergesort.chrrp"));
  auto mt = translate_chrrp_program(ms.program);
  auto caught = [&](const ChrSource& src, const std::string& rule) {
    Chr2LaResult m{mutate_priority(mt.program, rule, 1), mt.name_map};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      if (!check_chr2la(src, m, 20000, seed).ok) return true;
    }
    return false;
  };
  CHECK(caught(ms, "ms2_p"));
  ChrSource mixed = ms;
  mixed.goal = parse_chrrp("goal arrow(1,5), arrow(1,3), merge(0,7), merge(0,8).").goal;
  CHECK(caught(mixed, "ms1_p"));
}

TEST_CASE("property: random LA goals correspond under la2chr") {
  auto dj = parse_la(testutil::read_file("programs/dijkstra.la"));
  auto uf = parse_la(testutil::read_file("programs/unionfind.la"));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    LASource src;
    if (trial % 2) {
      src.program = dj.program;
      src.goal.push_back({false, parse_term("source(n0)")});
      for (int e = 0; e < 4; ++e) {
        src.goal.push_back({false, parse_term("e(n" + std::to_string(rng() % 3) + "," +
                                              std::to_string(1 + rng() % 5) + ",n" +
                                              std::to_string(rng() % 3) + ")")});
      }
    } else {
      src.program = uf.program;
      for (int i = 1; i <= 3; ++i) {
        src.goal.push_back({false, parse_term("find(" + std::to_string(i) + "," +
                                              std::to_string(i) + ")")});
      }
      src.goal.push_back({false, parse_term("union(" + std::to_string(1 + rng() % 3) + "," +
                                            std::to_string(1 + rng() % 3) + ")")});
    }
    auto r = check_la2chr(src, 200000, rng());
    CHECK_MESSAGE(r.ok, r.message);
    CHECK_FALSE(r.inconclusive);
  }
}

TEST_CASE("property: random ground goals correspond under chr2la") {
  auto ms = parse_chrrp(testutil::read_file("programs/mergesort.chrrp"));
  auto tp = parse_chrrp(testutil::read_file("programs/tokenpair.chrrp"));
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    ChrSource src = trial % 2 ? ms : tp;
    std::string g = "goal ";
    int n = trial % 2 ? 4 : 3;
    for (int k = 0; k < n; ++k) {
      if (k) g += ", ";
      if (trial % 2) {
        g += "number(" + std::to_string(rng() % 50) + ")";
      } else {
        g += "edge(" + std::to_string(rng() % 3) + "," + std::to_string(rng() % 3) + ")";
      }
    }
    src.goal = parse_chrrp(g + ".").goal;
    auto r = check_chr2la(src, 200000, rng());
    CHECK_MESSAGE(r.ok, r.message);
  }
}
