#include "chr/bench.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <set>

#include <json.hpp>

#include "chr/parser.hpp"

namespace chr::bench {

const std::string& dijkstra_source() {
  static const std::string s =
      "1 :: d1 @ source(V) ==> dist(V,0).\n"
      "1 :: d2 @ dist(V,D1) \\ dist(V,D2) <=> D1 < D2 | true.\n"
      "D+2 :: d3 @ dist(V,D), e(V,C,U) ==> dist(U,D+C).\n";
  return s;
}

const std::string& mergesort_source() {
  static const std::string s =
      "1 :: ms1 @ arrow(X,A) \\ arrow(X,B) <=> A < B | arrow(A,B).\n"
      "2 :: ms2 @ merge(N,A), merge(N,B) <=> A < B | merge(2*N+1,A), arrow(A,B).\n"
      "3 :: ms3 @ number(X) <=> merge(0,X).\n";
  return s;
}

const std::string& leq_source() {
  static const std::string s =
      "1 :: idempotence  @ leq(X,Y) \\ leq(X,Y) <=> true.\n"
      "2 :: reflexivity  @ leq(X,X) <=> true.\n"
      "2 :: antisymmetry @ leq(X,Y), leq(Y,X) <=> X = Y.\n"
      "3 :: transitivity @ leq(X,Y), leq(Y,Z) ==> leq(X,Z).\n";
  return s;
}

Graph random_graph(int e, std::uint64_t seed) {
  if (e < 1) throw BenchError("graph needs at least one edge");
  std::mt19937_64 rng(seed);
  // About four edges per node keeps the graph sparse but not a tree.
  int n = std::max(2, e / 4 + 1);
  while (static_cast<long long>(n) * (n - 1) < e) ++n;
  std::uniform_int_distribution<int> weight(1, 100);
  Graph g;
  g.nodes = n;
  std::set<std::pair<int, int>> used;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin() + 1, order.end(), rng);
  for (int i = 1; i < n; ++i) {
    int parent = order[std::uniform_int_distribution<int>(0, i - 1)(rng)];
    used.emplace(parent, order[i]);
    g.edges.emplace_back(parent, weight(rng), order[i]);
  }
  std::uniform_int_distribution<int> node(0, n - 1);
  while (static_cast<int>(g.edges.size()) < e) {
    int u = node(rng), v = node(rng);
    if (u == v || !used.emplace(u, v).second) continue;
    g.edges.emplace_back(u, weight(rng), v);
  }
  std::shuffle(g.edges.begin(), g.edges.end(), rng);
  return g;
}

std::vector<std::int64_t> reference_dijkstra(const Graph& g, int source) {
  std::vector<std::vector<std::pair<int, int>>> adj(g.nodes);
  for (const auto& [u, w, v] : g.edges) adj[u].emplace_back(v, w);
  std::vector<std::int64_t> dist(g.nodes, -1);
  using Item = std::pair<std::int64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.emplace(0, source);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (dist[u] >= 0) continue;
    dist[u] = d;
    for (const auto& [v, w] : adj[u]) {
      if (dist[v] < 0) pq.emplace(d + w, v);
    }
  }
  return dist;
}

std::string node_name(int i) { return "n" + std::to_string(i); }

ChrGoal dijkstra_goal(const Graph& g) {
  ChrGoal goal;
  goal.push_back(BodyItem::user(mk_compound("source", {mk_atom(node_name(0))})));
  for (const auto& [u, w, v] : g.edges) {
    goal.push_back(BodyItem::user(
        mk_compound("e", {mk_atom(node_name(u)), mk_int(w), mk_atom(node_name(v))})));
  }
  return goal;
}

ChrGoal mergesort_goal(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> pool(4 * static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 1);
  std::shuffle(pool.begin(), pool.end(), rng);
  ChrGoal goal;
  for (int i = 0; i < n; ++i) {
    goal.push_back(BodyItem::user(mk_compound("number", {mk_int(pool[i])})));
  }
  return goal;
}

ChrGoal leq_cycle_goal(int n) {
  std::vector<Term> xs;
  for (int i = 1; i <= n; ++i) xs.push_back(mk_var("X" + std::to_string(i)));
  ChrGoal goal;
  for (int i = 0; i < n; ++i) {
    goal.push_back(BodyItem::user(mk_compound("leq", {xs[i], xs[(i + 1) % n]})));
  }
  return goal;
}

namespace {

double model_value(const std::string& model, double n) {
  if (model == "n") return n;
  if (model == "n log n") return n * std::log2(n);
  if (model == "n^2") return n * n;
  return n * n * n;
}

}  // namespace

const ChrProgram& program(const std::string& example) {
  static const ChrProgram dijkstra = parse_chrrp(dijkstra_source()).program;
  static const ChrProgram mergesort = parse_chrrp(mergesort_source()).program;
  static const ChrProgram leq = parse_chrrp(leq_source()).program;
  if (example == "dijkstra") return dijkstra;
  if (example == "mergesort") return mergesort;
  if (example == "leq") return leq;
  throw BenchError("unknown bench example '" + example + "'");
}

Fit fit_counter(const std::vector<Row>& rows, const std::string& counter) {
  if (rows.size() < 4) throw BenchError("complexity fit needs at least 4 sizes");
  Fit best;
  best.counter = counter;
  best.residual = INFINITY;
  for (const char* model : {"n", "n log n", "n^2", "n^3"}) {
    std::vector<double> diff;
    for (const auto& row : rows) {
      auto it = row.counters.find(counter);
      double y = it == row.counters.end() ? 0.0 : static_cast<double>(it->second);
      diff.push_back(std::log(std::max(y, 1.0)) - std::log(model_value(model, row.size)));
    }
    double logc = std::accumulate(diff.begin(), diff.end(), 0.0) / diff.size();
    double res = 0;
    for (double d : diff) res += (d - logc) * (d - logc);
    if (res < best.residual) {
      best.model = model;
      best.constant = std::exp(logc);
      best.residual = res;
    }
  }
  const Row& a = rows[rows.size() - 2];
  const Row& b = rows.back();
  auto get = [&](const Row& r) {
    auto it = r.counters.find(counter);
    return it == r.counters.end() ? 0.0 : static_cast<double>(it->second);
  };
  best.last_ratio = get(a) > 0 ? get(b) / get(a) : 0.0;
  return best;
}

const std::vector<std::string>& row_counters() {
  static const std::vector<std::string> names = {"P_s", "P_d", "A_s", "A_d", "N",
                                                 "B",   "matches", "fires", "tasks"};
  return names;
}

ChrGoal instance_goal(const std::string& example, int size, std::uint64_t seed) {
  program(example);
  if (example == "dijkstra") return dijkstra_goal(random_graph(size, seed));
  if (example == "mergesort") return mergesort_goal(size, seed);
  return leq_cycle_goal(size);
}

EngineOptions instance_options(const std::string& example) {
  EngineOptions opts;
  opts.budget = 100000000;
  // The leq worst case builds the chain first and closes the cycle last.
  opts.incremental_goal = example == "leq";
  return opts;
}

EngineResult run_instance(const std::string& example, int size, std::uint64_t seed) {
  return engine_run(instance_goal(example, size, seed), program(example),
                    instance_options(example));
}

Report run(const std::string& example, std::vector<int> sizes, std::uint64_t seed) {
  program(example);
  if (sizes.size() < 4) throw BenchError("complexity fit needs at least 4 sizes");
  std::sort(sizes.begin(), sizes.end());
  Report rep;
  rep.example = example;
  rep.seed = seed;
  for (int n : sizes) {
    EngineResult r = run_instance(example, n, seed);
    Row row;
    row.size = n;
    auto flat = r.metrics.flat();
    for (const auto& c : row_counters()) row.counters[c] = flat[c];
    for (const auto& [k, v] : flat) {
      if (k.rfind("strong.", 0) == 0) row.counters[k] = v;
    }
    rep.rows.push_back(std::move(row));
  }
  std::vector<std::string> fitted = {"P_s", "P_d", "tasks"};
  if (example == "mergesort") fitted.push_back("strong.ms1");
  if (example == "dijkstra") {
    for (auto& row : rep.rows) row.counters["P_s+P_d"] = row.counters["P_s"] + row.counters["P_d"];
    fitted.push_back("P_s+P_d");
  }
  for (const auto& c : fitted) {
    bool nonzero = std::any_of(rep.rows.begin(), rep.rows.end(),
                               [&](const Row& r) { return r.counters.at(c) > 0; });
    if (nonzero) rep.fits.push_back(fit_counter(rep.rows, c));
  }
  return rep;
}

std::string to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["example"] = r.example;
  j["seed"] = r.seed;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json jr;
    jr["size"] = row.size;
    jr["counters"] = row.counters;
    j["rows"].push_back(jr);
  }
  j["fits"] = nlohmann::ordered_json::array();
  for (const auto& f : r.fits) {
    j["fits"].push_back({{"counter", f.counter},
                         {"model", f.model},
                         {"constant", f.constant},
                         {"residual", f.residual},
                         {"last_ratio", f.last_ratio}});
  }
  return j.dump(2);
}

}  // namespace chr::bench
