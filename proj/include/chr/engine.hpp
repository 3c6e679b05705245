#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "chr/ast.hpp"
#include "chr/keytable.hpp"
#include "chr/scheduler.hpp"
#include "chr/store.hpp"
#include "chr/wp_interp.hpp"

namespace chr {

class EngineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One head of the intermediate form with its post-guard.
struct CompiledItem {
  bool kept = true;
  Term head;
  std::string pred;
  std::vector<Comparison> guard;
  int source_index = 0;
};

struct CompiledRule {
  int index = 0;
  std::string name;
  Term priority;
  bool dynamic = false;
  std::vector<CompiledItem> items;
  // key_vars[i] (i >= 1): vars(H_i) that occur in H_1..H_{i-1}, in order of
  // first occurrence in H_i. key_vars[0] is empty.
  std::vector<std::vector<Term>> key_vars;
  // Every variable of the rule gets a binding slot.
  std::vector<Term> vars;
  std::unordered_map<std::int64_t, int> slot;
  std::vector<BodyItem> body;
  std::size_t size() const { return items.size(); }
};

struct CompiledProgram {
  std::vector<CompiledRule> rules;
  // pred key -> (rule, position) for every head occurrence, in program order.
  std::map<std::string, std::vector<std::pair<int, int>>> occurrences;
  std::int64_t static_lo = 0, static_hi = 0;
};

using JoinOrders = std::map<std::string, std::vector<int>>;

CompiledProgram compile(const ChrProgram& p, const JoinOrders& orders = {});

// Debug listing of the compiled rules in occurrence / prefix-firing /
// rule-firing form.
std::string emit_chr(const CompiledProgram& cp);

struct EngineMetrics {
  std::int64_t A_s = 0, A_d = 0;  // occurrence assertions, static / dynamic rules
  std::int64_t P_s = 0, P_d = 0;  // strong prefix firings, static / dynamic rules
  std::int64_t N = 0;             // distinct priorities scheduled
  std::int64_t B = 0;             // built-in tells
  std::int64_t matches = 0, fires = 0, reactivations = 0;
  std::int64_t K = 0, S = 0;      // observed maxima: keys / suspensions per variable
  std::int64_t introduced = 0, c_max = 0;
  std::map<std::string, std::int64_t> strong_by_rule;
  std::map<std::string, std::int64_t> fires_by_rule;
  std::map<std::string, std::int64_t> scheduler;

  std::int64_t tasks() const { return matches + fires; }
  // Flat key -> integer view; per-rule counters are prefixed
  // "strong.<rule>" / "fires.<rule>", scheduler ones "sched.<name>".
  std::map<std::string, std::int64_t> flat() const;
};

struct EngineOptions {
  std::size_t budget = 1000000;  // maximum rule firings
  bool trace = false;
  // engine_run: run to quiescence after each goal item instead of
  // introducing the whole goal first.
  bool incremental_goal = false;
  JoinOrders join_orders;
};

struct EngineResult {
  std::vector<StoredConstraint> store;  // ascending id
  BuiltinStore builtins;
  bool failed = false;
  EngineMetrics metrics;
  std::vector<std::string> trace;

  std::vector<Term> atoms() const;
};

class Engine {
 public:
  explicit Engine(const ChrProgram& p, EngineOptions opts = {});
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  // Goal processing: atoms are asserted and tells solved in order.
  void add_goal(const ChrGoal& goal);
  std::int64_t assert_constraint(const Term& atom);
  void solve_tell(const Term& a, const Term& b);
  void delete_constraint(std::int64_t id);
  // Executes one scheduler task; false when nothing is left or the store failed.
  bool step();
  // Runs to completion; throws BudgetExceeded past the firing budget.
  void run();

  bool failed() const { return failed_; }
  bool alive(std::int64_t id) const;
  std::vector<StoredConstraint> store() const;
  const BuiltinStore& builtins() const { return builtins_; }
  const EngineMetrics& metrics();
  const std::vector<std::string>& trace() const { return trace_; }
  const CompiledProgram& program() const { return cp_; }
  // Scheduler objects (prefix firings, extensions, rule firings, suspended
  // ones) that still reference a live constraint.
  std::size_t live_objects() const;

 private:
  struct Obj;
  struct Constraint;

  Tri head_match(const CompiledItem& item, const CompiledRule& r, const Term& atom,
                 std::vector<Term>& slots) const;
  Term subst(const Term& t, const CompiledRule& r, const std::vector<Term>& slots) const;
  std::vector<Term> key_of(const CompiledRule& r, int pos, const std::vector<Term>& slots) const;
  std::string tag(int rule, int pos) const;
  std::optional<std::int64_t> priority_of(const CompiledRule& r,
                                          const std::vector<Term>& slots) const;

  std::int64_t new_obj(int kind, int rule, int pos);
  void link(std::int64_t obj, std::int64_t cid);
  void occurrence(std::int64_t cid, int rule, int pos);
  void occurrence_entailed(std::int64_t cid, int rule, int pos, std::vector<Term> slots);
  void check_partial(std::int64_t obj);
  void activate_partial(std::int64_t obj);
  void suspend(std::int64_t obj, const std::vector<Term>& terms);
  void wake(const std::vector<std::int64_t>& touched);
  void retire(std::int64_t obj);
  void process_match(std::int64_t pf, std::int64_t pe);
  void fire(std::int64_t rf, std::int64_t priority);
  void note_priority(std::int64_t p);
  std::string ids_text(const Obj& o) const;

  CompiledProgram cp_;
  EngineOptions opts_;
  Scheduler sched_;
  KeyTable keys_;
  BuiltinStore builtins_;
  std::vector<Obj> objs_;
  std::vector<Constraint> cons_;
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> watchers_;
  std::vector<std::int64_t> priorities_seen_;
  std::unordered_map<std::int64_t, char> prio_set_;
  EngineMetrics m_;
  std::vector<std::string> trace_;
  std::size_t live_count_ = 0;
  bool failed_ = false;
};

EngineResult engine_run(const ChrGoal& goal, const ChrProgram& p,
                        const EngineOptions& opts = {});

// Canonical final state in the oracle's format.
std::string canonical(const EngineResult& r, const std::vector<Term>& goal_vars);

// Rule-firing bound D * sum_r (c_max^n_r * (O_H + O_G) + (O_C + O_B)) with all
// unit costs set to 1, next to the measured task count and the instantiated
// meta-complexity formula.
struct AtgbReport {
  std::int64_t derivation_length = 0;
  std::int64_t c_max = 0;
  long double bound = 0;
  std::int64_t measured_tasks = 0;
  long double meta_formula = 0;
  std::string text() const;
};

AtgbReport atgb_bound(const EngineMetrics& m, const ChrProgram& p);

}  // namespace chr
