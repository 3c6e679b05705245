#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chr/ast.hpp"
#include "chr/la_interp.hpp"
#include "chr/store.hpp"

namespace chr {

struct StoredConstraint {
  std::int64_t id;
  Term atom;
};

using HistoryTuple = std::pair<std::string, std::vector<std::int64_t>>;

// <G, S, B, T>_n
struct ExecState {
  std::deque<BodyItem> goal;
  std::vector<StoredConstraint> store;  // ascending id
  BuiltinStore builtins;
  std::set<HistoryTuple> history;
  std::int64_t next_id = 1;
  bool failed = false;

  const StoredConstraint* find(std::int64_t id) const;
};

struct WpInstance {
  int rule;
  std::vector<std::int64_t> ids;  // kept heads then removed heads
  std::int64_t priority;
  Substitution theta;
};

using WpChooser = std::function<std::size_t(const std::vector<WpInstance>&)>;
WpChooser wp_first();
WpChooser wp_random(std::mt19937_64& rng);

ExecState wp_initial(const ChrGoal& goal);

// All instances valid under the theoretical semantics (priority ignored),
// in (rule index, identifier sequence) order.
std::vector<WpInstance> wp_instances(const ExecState& s, const ChrProgram& p);
std::vector<WpInstance> wp_highest(const ExecState& s, const ChrProgram& p);

enum class WpTransition { Solve, Introduce, Apply, None };

// Solve or Introduce on the goal front; None when the goal is empty.
WpTransition wp_goal_step(ExecState& s, std::string* trace = nullptr);
void wp_apply(ExecState& s, const ChrProgram& p, const WpInstance& inst,
              std::string* trace = nullptr);
// One transition; None when the state is final or failed.
WpTransition wp_step(ExecState& s, const ChrProgram& p, const WpChooser& choose,
                     std::string* trace = nullptr);

struct WpRunResult {
  ExecState state;
  std::size_t steps = 0;
  std::size_t applies = 0;
  std::vector<std::string> trace;
};

WpRunResult wp_run(const ChrGoal& goal, const ChrProgram& p,
                   std::size_t budget = 1000000, const WpChooser& choose = wp_first(),
                   bool trace = false);

// Variables of a goal, sorted by name; they anchor canonical numbering.
std::vector<Term> goal_variables(const ChrGoal& goal);

// Canonical final-state text: the goal variables' values, then the store
// atoms sorted with variables numbered by first occurrence. Identifiers
// are dropped.
std::string canonical_state(const std::vector<Term>& goal_vars,
                            const BuiltinStore& builtins,
                            const std::vector<Term>& atoms, bool failed);
std::string canonical(const ExecState& s, const std::vector<Term>& goal_vars);

std::set<std::string> wp_reachable_finals(const ChrGoal& goal, const ChrProgram& p,
                                          std::size_t bound = 200000);

}  // namespace chr
