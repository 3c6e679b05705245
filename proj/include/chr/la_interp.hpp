#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "chr/ast.hpp"

namespace chr {

struct LAState {
  std::set<Term, TermLess> positive;
  std::set<Term, TermLess> negative;

  bool operator==(const LAState& o) const;
  std::size_t size() const { return positive.size() + negative.size(); }
};

struct LAInstance {
  int rule;
  std::vector<Term> matched;  // ground antecedent atoms, in antecedent order
  std::int64_t priority;
  std::vector<LAConclusion> conclusions;  // ground, arithmetic folded
};

// Chooses among the highest-priority instances; the candidates are given in
// (rule index, enumeration) order.
using LAChooser = std::function<std::size_t(const std::vector<LAInstance>&)>;
LAChooser la_first();
LAChooser la_random(std::mt19937_64& rng);

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

LAState la_initial(const LAGoal& goal);

// Every fireable instance (freshness included), with evaluated priority.
std::vector<LAInstance> la_applicable(const LAState& s, const LAProgram& p);
// Only the instances at the numerically smallest priority.
std::vector<LAInstance> la_highest(const LAState& s, const LAProgram& p);
LAState la_apply(const LAState& s, const LAInstance& inst);
bool la_step(LAState& s, const LAProgram& p, const LAChooser& choose,
             LAInstance* fired = nullptr);

struct LARunResult {
  LAState state;
  std::size_t steps = 0;
  std::vector<std::string> trace;
};

// Throws BudgetExceeded when more than `budget` Apply steps are needed.
LARunResult la_run(const LAGoal& goal, const LAProgram& p,
                   std::size_t budget = 1000000, const LAChooser& choose = la_first(),
                   bool trace = false);

std::string canonical(const LAState& s);
std::string to_string(const LAInstance& inst, const LAProgram& p);

// Canonical forms of every final state reachable under any tie-breaking.
std::set<std::string> la_reachable_finals(const LAGoal& goal, const LAProgram& p,
                                          std::size_t bound = 200000);

}  // namespace chr
