#include "doctest.h"

#include <cmath>
#include <map>
#include <set>

#include "chr/bench.hpp"
#include "chr/parser.hpp"
#include "chr/printer.hpp"
#include "util.hpp"

using namespace chr;
using namespace chr::bench;

namespace {

Row row(int n, std::int64_t v) {
  Row r;
  r.size = n;
  r.counters["x"] = v;
  return r;
}

std::vector<Row> synthetic(double (*f)(double)) {
  std::vector<Row> rows;
  for (int n : {8, 16, 32, 64, 128}) rows.push_back(row(n, std::llround(5 * f(n))));
  return rows;
}

// Shortest distances read off the engine's final store.
std::map<std::string, std::int64_t> engine_distances(const EngineResult& r) {
  std::map<std::string, std::int64_t> out;
  for (const auto& a : r.atoms()) {
    if (a->name != "dist") continue;
    std::string v = to_string(a->args[0]);
    std::int64_t d = a->args[1]->value;
    auto it = out.find(v);
    if (it == out.end() || d < it->second) out[v] = d;
  }
  return out;
}

}  // namespace

TEST_CASE("built-in programs match the programs/ files") {
  auto same = [](const std::string& embedded, const char* path) {
    auto a = parse_chrrp(embedded).program;
    auto b = parse_chrrp(testutil::read_file(path)).program;
    REQUIRE(a.rules.size() == b.rules.size());
    for (std::size_t i = 0; i < a.rules.size(); ++i) CHECK(ast_equal(a.rules[i], b.rules[i]));
  };
  same(dijkstra_source(), "programs/dijkstra.chrrp");
  same(mergesort_source(), "programs/mergesort.chrrp");
  same(leq_source(), "programs/leq.chrrp");
}

TEST_CASE("random_graph: size, weights, reachability, determinism") {
  for (int e : {1, 5, 50, 333}) {
    Graph g = random_graph(e, 11);
    CHECK(static_cast<int>(g.edges.size()) == e);
    std::set<std::pair<int, int>> seen;
    for (const auto& [u, w, v] : g.edges) {
      CHECK(u != v);
      CHECK(w >= 1);
      CHECK(w <= 100);
      CHECK(seen.emplace(u, v).second);
    }
    for (auto d : reference_dijkstra(g, 0)) CHECK(d >= 0);
    CHECK(random_graph(e, 11).edges == g.edges);
  }
  CHECK(random_graph(100, 1).edges != random_graph(100, 2).edges);
  CHECK_THROWS_AS(random_graph(0, 1), BenchError);
}

TEST_CASE("reference_dijkstra examples") {
  Graph g;
  g.nodes = 4;
  g.edges = {{0, 1, 1}, {1, 1, 2}, {0, 5, 2}, {2, 2, 0}};
  CHECK(reference_dijkstra(g, 0) == std::vector<std::int64_t>{0, 1, 2, -1});
}

TEST_CASE("fit_counter recovers exact power laws") {
  CHECK(fit_counter(synthetic([](double n) { return n; }), "x").model == "n");
  CHECK(fit_counter(synthetic([](double n) { return n * std::log2(n); }), "x").model ==
        "n log n");
  CHECK(fit_counter(synthetic([](double n) { return n * n; }), "x").model == "n^2");
  Fit cube = fit_counter(synthetic([](double n) { return n * n * n; }), "x");
  CHECK(cube.model == "n^3");
  CHECK(cube.constant == doctest::Approx(5).epsilon(0.01));
  CHECK(cube.last_ratio == doctest::Approx(8).epsilon(0.01));
  std::vector<Row> three = {row(1, 1), row(2, 2), row(4, 4)};
  CHECK_THROWS_AS(fit_counter(three, "x"), BenchError);
}

TEST_CASE("property: engine distances equal reference Dijkstra") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    int e = 5 + static_cast<int>(seed * 7 % 60);
    Graph g = random_graph(e, seed);
    EngineResult r = engine_run(dijkstra_goal(g), parse_chrrp(dijkstra_source()).program);
    auto got = engine_distances(r);
    auto want = reference_dijkstra(g, 0);
    CHECK(got.size() == want.size());
    for (int v = 0; v < g.nodes; ++v) CHECK(got[node_name(v)] == want[v]);
  }
}

TEST_CASE("mergesort and leq generators") {
  ChrGoal g = mergesort_goal(16, 3);
  std::set<std::int64_t> xs;
  for (const auto& b : g) xs.insert(b.atom->args[0]->value);
  CHECK(xs.size() == 16);
  ChrGoal l = leq_cycle_goal(3);
  ChrGoal expect = parse_chrrp("goal leq(X1,X2), leq(X2,X3), leq(X3,X1).").goal;
  REQUIRE(l.size() == 3);
  std::vector<Term> a, b;
  for (std::size_t i = 0; i < 3; ++i) {
    a.push_back(l[i].atom);
    b.push_back(expect[i].atom);
  }
  CHECK(alpha_equal(a, b));
}

TEST_CASE("bench run: determinism and sorted rows") {
  Report a = run("mergesort", {32, 8, 16, 64}, 5);
  Report b = run("mergesort", {8, 16, 32, 64}, 5);
  CHECK(to_json(a) == to_json(b));
  for (std::size_t i = 1; i < a.rows.size(); ++i) CHECK(a.rows[i - 1].size < a.rows[i].size);
  CHECK_THROWS_AS(run("mergesort", {8, 16, 32}, 5), BenchError);
  CHECK_THROWS_AS(run("quicksort", {8, 16, 32, 64}, 5), BenchError);
  Report d1 = run("dijkstra", {20, 40, 60, 80}, 9);
  Report d2 = run("dijkstra", {20, 40, 60, 80}, 9);
  CHECK(to_json(d1) == to_json(d2));
}
