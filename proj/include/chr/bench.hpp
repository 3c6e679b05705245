#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "chr/ast.hpp"
#include "chr/engine.hpp"

namespace chr::bench {

class BenchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Built-in benchmark programs.
const std::string& dijkstra_source();
const std::string& mergesort_source();
const std::string& leq_source();

struct Graph {
  int nodes = 0;
  std::vector<std::tuple<int, int, int>> edges;  // (from, weight, to)
};

// Erdős–Rényi style digraph with exactly `e` distinct edges, weights 1..100,
// and a spanning arborescence rooted at node 0.
Graph random_graph(int e, std::uint64_t seed);
// Textbook binary-heap Dijkstra; -1 for unreachable nodes.
std::vector<std::int64_t> reference_dijkstra(const Graph& g, int source);

std::string node_name(int i);
ChrGoal dijkstra_goal(const Graph& g);
// n distinct numbers in random order.
ChrGoal mergesort_goal(int n, std::uint64_t seed);
// leq(X1,X2), ..., leq(Xn-1,Xn), leq(Xn,X1).
ChrGoal leq_cycle_goal(int n);

struct Row {
  int size = 0;
  std::map<std::string, std::int64_t> counters;
};

struct Fit {
  std::string counter;
  std::string model;  // "n", "n log n", "n^2", "n^3"
  double constant = 0;
  double residual = 0;
  double last_ratio = 0;  // counter ratio at the two largest sizes
};

struct Report {
  std::string example;
  std::uint64_t seed = 0;
  std::vector<Row> rows;
  std::vector<Fit> fits;
};

// Least squares on log counter = log c + log model(n); keeps the model with
// the smallest residual. Needs at least four sizes.
Fit fit_counter(const std::vector<Row>& rows, const std::string& counter);

// Counters reported per row.
const std::vector<std::string>& row_counters();

// Program, goal and engine options of one generated instance.
const ChrProgram& program(const std::string& example);
ChrGoal instance_goal(const std::string& example, int size, std::uint64_t seed);
EngineOptions instance_options(const std::string& example);
// Runs the engine on one generated instance.
EngineResult run_instance(const std::string& example, int size, std::uint64_t seed);
Report run(const std::string& example, std::vector<int> sizes, std::uint64_t seed);

std::string to_json(const Report& r);

}  // namespace chr::bench
