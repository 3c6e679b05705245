#include "doctest.h"

#include <random>

#include "chr/normalize.hpp"
#include "chr/parser.hpp"
#include "chr/printer.hpp"
#include "util.hpp"

using namespace chr;

namespace {

LARule la_rule(const std::string& text) {
  auto src = parse_la(text);
  REQUIRE(src.program.rules.size() == 1);
  return src.program.rules[0];
}

ChrRule chr_rule(const std::string& text) {
  auto src = parse_chrrp(text);
  REQUIRE(src.program.rules.size() == 1);
  return src.program.rules[0];
}

}  // namespace

TEST_CASE("parse_la examples") {
  LARule d3 = la_rule("d3 @ D+2 : dist(V,D), e(V,C,U) => dist(U,D+C).");
  CHECK(d3.name == "d3");
  CHECK(to_string(d3.priority) == "D+2");
  CHECK_FALSE(priority_is_static(d3.priority));
  CHECK(d3.antecedents.size() == 2);
  CHECK(d3.conclusions.size() == 1);

  CHECK_THROWS_AS(parse_la("x @ 1 : a(X), Y < X => b."), ParseError);
  try {
    parse_la("x @ 1 : a(X), Y < X => b.");
  } catch (const ParseError& e) {
    CHECK(e.kind == ParseError::Kind::Scope);
  }

  LARule d2 = la_rule(
      "d2 @ 1 : dist(V,D1), dist(V,D2), D2 < D1 => del(dist(V,D1)).");
  REQUIRE(d2.conclusions.size() == 1);
  CHECK(d2.conclusions[0].del);
  CHECK(to_string(d2.conclusions[0].atom) == "dist(V,D1)");
  CHECK(d2.antecedents[2].kind == LAAntecedent::Kind::Compare);
}

TEST_CASE("parse_la diagnostics carry positions") {
  try {
    parse_la("d1 @ 1 : source(V) => dist(V,0).\nd2 @ 1 source(V) => x.");
    FAIL("expected a syntax error");
  } catch (const ParseError& e) {
    CHECK(e.kind == ParseError::Kind::Syntax);
    CHECK(e.line == 2);
    CHECK(e.col == 8);
    REQUIRE_FALSE(e.expected.empty());
    CHECK(e.expected[0] == "':'");
  }
  CHECK_THROWS_AS(parse_la("r @ X : a(Y) => b."), ParseError);
  CHECK_THROWS_AS(parse_la("r @ 1 : a(Y) => b(Z)."), ParseError);
  CHECK_THROWS_AS(parse_la("r @ 1 : a(Y) => b(Y)"), ParseError);
  CHECK_THROWS_AS(parse_la("goal a(X)."), ParseError);
}

TEST_CASE("parse_chrrp examples") {
  ChrRule ms1 = chr_rule("1 :: ms1 @ arrow(X,A) \\ arrow(X,B) <=> A < B | arrow(A,B).");
  CHECK(ms1.kind() == RuleKind::Simpagation);
  CHECK(ms1.kept.size() == 1);
  CHECK(ms1.removed.size() == 1);
  CHECK(ms1.guard.size() == 1);

  ChrRule tr = chr_rule("3 :: transitivity @ leq(X,Y), leq(Y,Z) ==> leq(X,Z).");
  CHECK(tr.kind() == RuleKind::Propagation);
  CHECK(tr.kept.size() == 2);

  CHECK_THROWS_AS(parse_chrrp("D+2 :: d @ a(X) <=> true."), ParseError);

  ChrRule anon = chr_rule("and(0,Y,Z) <=> Z = 0.");
  CHECK(anon.kind() == RuleKind::Simplification);
  REQUIRE(anon.body.size() == 1);
  CHECK(anon.body[0].kind == BodyItem::Kind::Tell);
  CHECK(to_string(anon.priority) == "1");

  CHECK_THROWS_AS(parse_chrrp("1 :: r @ a(X) <=> b(X) | c."), ParseError);
  CHECK_THROWS_AS(parse_chrrp("1 :: r @ a(X) <=> X < 3."), ParseError);
  CHECK_THROWS_AS(parse_chrrp("1 :: r @ a(X) <=> Y < 3 | c."), ParseError);
  CHECK_THROWS_AS(parse_chrrp("1 :: r @ a(X+1) <=> c."), ParseError);

  auto src = parse_chrrp("goal leq(A,B), leq(B,A), A = 1.");
  REQUIRE(src.goal.size() == 3);
  CHECK(src.goal[2].kind == BodyItem::Kind::Tell);
  CHECK(src.goal[0].atom->args[1]->value == src.goal[1].atom->args[0]->value);

  auto two = parse_chrrp("goal p(1).\ngoal q(2), p(3).");
  REQUIRE(two.goal.size() == 3);
  CHECK(to_string(two.goal[1].atom) == "q(2)");
  CHECK(parse_la("goal p(1).\ngoal q(2).").goal.size() == 2);
}

TEST_CASE("lists and negative numbers") {
  Term t = parse_term("token(r,[I1,I2|T])");
  CHECK(to_string(t) == "token(r,[I1,I2|T])");
  CHECK(to_string(parse_term("f(-3)")) == "f(-3)");
  CHECK(to_string(parse_term("X - -3")) == "X-(-3)");
  CHECK(to_string(parse_term("-(3)")) == "-(3)");
  CHECK(parse_term("-(3)")->kind == TermKind::Compound);
  CHECK(to_string(parse_term("2*N+1")) == "2*N+1");
  CHECK(to_string(parse_term("2*(N+1)")) == "2*(N+1)");
  CHECK(to_string(parse_term("A-(B-C)")) == "A-(B-C)");
  CHECK(to_string(parse_term("A-B-C")) == "A-B-C");
}

TEST_CASE("normalize_la_priority") {
  LARule st = la_rule("r @ 1 : a(X), b(X) => c(X).");
  auto s = normalize_la_priority(st);
  REQUIRE(s.size() == 1);
  CHECK(ast_equal(s[0], st));

  LARule first = la_rule("r @ D : a(D), b(X) => c.");
  auto f = normalize_la_priority(first);
  REQUIRE(f.size() == 1);
  CHECK(ast_equal(f[0], first));

  LARule dyn = la_rule("r @ P1+P2 : a(P1), b(P2) => c.");
  auto d = normalize_la_priority(dyn);
  REQUIRE(d.size() == 2);
  CHECK(to_string(d[0]) == "r__1 @ 1 : a(P1), b(P2) => priority_r(P1+P2).");
  CHECK(to_string(d[1]) ==
        "r__2 @ P : priority_r(P), a(P1), b(P2), P = P1+P2 => c.");
  check_la_rule(d[0]);
  check_la_rule(d[1]);
}

TEST_CASE("to_intermediate") {
  auto dj = parse_chrrp(testutil::read_file("programs/dijkstra.chrrp"));
  IntermediateRule d3 = to_intermediate(dj.program.rules[2]);
  CHECK(to_string(d3) == "D+2 :: d3 @ +dist(V,D), ?true, +e(V,C,U), ?true <=> dist(U,D+C).");
  IntermediateRule d2 = to_intermediate(dj.program.rules[1]);
  CHECK(to_string(d2) ==
        "1 :: d2 @ +dist(V,D1), ?true, -dist(V,D2), ?(D1 < D2) <=> true.");

  ChrRule single = chr_rule("1 :: r @ a(X) <=> X < 3 | b(X).");
  IntermediateRule si = to_intermediate(single);
  REQUIRE(si.items.size() == 1);
  CHECK(si.items[0].post_guard.size() == 1);

  ChrRule anti = chr_rule("2 :: antisymmetry @ leq(X,Y), leq(Y,X) <=> X = Y.");
  IntermediateRule sw = to_intermediate(anti, std::vector<int>{1, 0});
  CHECK(to_string(sw) ==
        "2 :: antisymmetry @ -leq(Y,X), ?true, -leq(X,Y), ?true <=> X = Y.");
  CHECK(sw.items[0].source_index == 1);

  ChrRule g3 = chr_rule("1 :: r @ a(X), b(Y), c(Z) ==> X < Y, Y < 3 | d.");
  IntermediateRule gi = to_intermediate(g3, std::vector<int>{1, 2, 0});
  CHECK(gi.items[0].post_guard.size() == 1);
  CHECK(gi.items[1].post_guard.empty());
  CHECK(gi.items[2].post_guard.size() == 1);
  CHECK_THROWS_AS(to_intermediate(g3, std::vector<int>{0, 0, 1}), IntermediateError);
}

TEST_CASE("pretty printing round-trips the corpus") {
  CHECK(pretty_print_la(LAProgram{}).empty());
  CHECK(pretty_print_chrrp(ChrProgram{}).empty());
  for (const char* path : {"programs/dijkstra.la", "programs/unionfind.la",
                           "programs/empty.la"}) {
    auto a = parse_la(testutil::read_file(path));
    std::string text = pretty_print_la(a.program, &a.goal);
    auto b = parse_la(text);
    CHECK_MESSAGE(ast_equal(a.program, b.program), path);
    CHECK(pretty_print_la(b.program, &b.goal) == text);
  }
  for (const char* path : {"programs/leq.chrrp", "programs/mergesort.chrrp",
                           "programs/dijkstra.chrrp", "programs/and.chrrp",
                           "programs/tokenpair.chrrp", "programs/loop.chrrp"}) {
    auto a = parse_chrrp(testutil::read_file(path));
    std::string text = pretty_print_chrrp(a.program, &a.goal);
    auto b = parse_chrrp(text);
    CHECK_MESSAGE(ast_equal(a.program, b.program), path);
    CHECK(pretty_print_chrrp(b.program, &b.goal) == text);
  }
}

TEST_CASE("printer disambiguates clashing variable names") {
  Term x1 = mk_var("X"), x2 = mk_var("X"), a1 = mk_var("_"), a2 = mk_var("_");
  ChrRule r;
  r.priority = mk_int(1);
  r.name = "r";
  r.removed = {mk_compound("p", {x1, x2, a1, a1, a2})};
  std::string text = to_string(r);
  CHECK(text == "1 :: r @ p(X,X_2,G,G,_) <=> true.");
  auto back = parse_chrrp(text);
  CHECK(ast_equal(back.program.rules[0], r));
}

namespace {

struct RuleGen {
  std::mt19937_64 rng;
  explicit RuleGen(std::uint64_t seed) : rng(seed) {}
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Term arg(std::vector<Term>& vars, bool fresh_ok) {
    int k = pick(5);
    if (k == 0) return mk_int(pick(9) - 3);
    if (k == 1) return mk_atom(pick(2) ? "a" : "b");
    if (k == 2 && pick(3) == 0) return mk_list({mk_int(pick(3))}, nullptr);
    if (vars.empty() && !fresh_ok) return mk_int(pick(3));
    if (!vars.empty() && (!fresh_ok || pick(2))) return vars[pick(static_cast<int>(vars.size()))];
    static const char* names[] = {"X", "Y", "Z", "W"};
    Term v = mk_var(names[vars.size() % 4] + std::string(vars.size() >= 4 ? "1" : ""));
    vars.push_back(v);
    return v;
  }
  Term atom(std::vector<Term>& vars, bool fresh_ok) {
    static const char* preds[] = {"p", "q", "edge"};
    int n = pick(3);
    std::vector<Term> args;
    for (int i = 0; i < n; ++i) args.push_back(arg(vars, fresh_ok));
    return n == 0 ? mk_atom(preds[pick(3)]) : mk_compound(preds[pick(3)], args);
  }
  Term expr(std::vector<Term>& vars) {
    Term base = vars.empty() ? mk_int(pick(5)) : vars[pick(static_cast<int>(vars.size()))];
    switch (pick(4)) {
      case 0: return mk_compound("+", {base, mk_int(pick(4))});
      case 1: return mk_compound("*", {mk_int(pick(4) + 1), base});
      case 2: return mk_compound("-", {base});
      default: return base;
    }
  }
};

}  // namespace

TEST_CASE("property: random rules round-trip through the printers") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    RuleGen g(seed);
    std::vector<Term> vars;
    LARule la;
    la.name = "r" + std::to_string(seed);
    int n = 1 + g.pick(3);
    for (int i = 0; i < n; ++i) {
      Term a = g.atom(vars, true);
      la.antecedents.push_back(g.pick(4) ? LAAntecedent::positive(a)
                                         : LAAntecedent::negative(a));
      if (!vars.empty() && g.pick(2)) {
        la.antecedents.push_back(LAAntecedent::compare(
            {static_cast<CmpOp>(g.pick(4)), g.expr(vars), g.expr(vars)}));
      }
    }
    la.priority = g.pick(2) || vars.empty() ? mk_int(g.pick(5) + 1) : g.expr(vars);
    for (int i = 0, k = g.pick(3); i < k; ++i) {
      la.conclusions.push_back({g.pick(3) == 0, g.atom(vars, false)});
    }
    std::string text = to_string(la);
    auto back = parse_la(text);
    REQUIRE(back.program.rules.size() == 1);
    CHECK_MESSAGE(ast_equal(back.program.rules[0], la), text);

    std::vector<Term> cv;
    ChrRule cr;
    cr.name = "c" + std::to_string(seed);
    int nk = g.pick(3), nr = nk == 0 ? 1 + g.pick(2) : g.pick(2);
    for (int i = 0; i < nk; ++i) cr.kept.push_back(g.atom(cv, true));
    for (int i = 0; i < nr; ++i) cr.removed.push_back(g.atom(cv, true));
    cr.priority = g.pick(2) || cv.empty() ? mk_int(g.pick(5) + 1) : g.expr(cv);
    if (!cv.empty() && g.pick(2)) {
      cr.guard.push_back({static_cast<CmpOp>(g.pick(4)), g.expr(cv), g.expr(cv)});
    }
    for (int i = 0, k = g.pick(3); i < k; ++i) {
      if (!cv.empty() && g.pick(3) == 0) {
        cr.body.push_back(BodyItem::tell(cv[0], g.arg(cv, true)));
      } else {
        cr.body.push_back(BodyItem::user(g.atom(cv, true)));
      }
    }
    std::string ctext = to_string(cr);
    auto cback = parse_chrrp(ctext);
    REQUIRE(cback.program.rules.size() == 1);
    CHECK_MESSAGE(ast_equal(cback.program.rules[0], cr), ctext);
  }
}
