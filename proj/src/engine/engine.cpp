#include "chr/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chr/la_interp.hpp"
#include "chr/printer.hpp"

namespace chr {

namespace {

enum ObjKind { kOcc = 0, kPartial = 1, kPE = 2 };
enum ObjState { kSuspended = 0, kScheduled = 1, kGone = 2 };

// Pre-matching priority for prefix firings whose priority is not yet known.
constexpr std::int64_t kUnknownPriority = std::numeric_limits<std::int64_t>::min() / 4;

bool match_slots(const Term& pat, const Term& target, const CompiledRule& r,
                 std::vector<Term>& slots) {
  if (is_var(pat)) {
    Term& s = slots[static_cast<std::size_t>(r.slot.at(pat->value))];
    if (!s) {
      s = target;
      return true;
    }
    return term_equal(s, target);
  }
  if (pat->kind != target->kind) return false;
  if (is_int(pat)) return pat->value == target->value;
  if (pat->name != target->name || pat->args.size() != target->args.size()) return false;
  for (std::size_t i = 0; i < pat->args.size(); ++i) {
    if (!match_slots(pat->args[i], target->args[i], r, slots)) return false;
  }
  return true;
}

}  // namespace

struct Engine::Obj {
  std::uint8_t kind = kOcc;
  std::uint8_t state = kSuspended;
  int rule = 0;
  int pos = 0;             // Occ / PE: head position; Partial: matched length
  std::int64_t cid = 0;    // Occ / PE
  std::vector<Term> slots;
  std::vector<std::int64_t> ids;  // Partial: constituents by position
  std::vector<std::int64_t> roots;  // suspension lists holding this object
};

struct Engine::Constraint {
  Term atom;
  bool alive = false;
  std::vector<std::int64_t> objs;
};

std::map<std::string, std::int64_t> EngineMetrics::flat() const {
  std::map<std::string, std::int64_t> out{{"A_s", A_s},
                                          {"A_d", A_d},
                                          {"P_s", P_s},
                                          {"P_d", P_d},
                                          {"N", N},
                                          {"B", B},
                                          {"K", K},
                                          {"S", S},
                                          {"matches", matches},
                                          {"fires", fires},
                                          {"reactivations", reactivations},
                                          {"tasks", tasks()},
                                          {"introduced", introduced},
                                          {"c_max", c_max}};
  for (const auto& [k, v] : strong_by_rule) out["strong." + k] = v;
  for (const auto& [k, v] : fires_by_rule) out["fires." + k] = v;
  for (const auto& [k, v] : scheduler) out["sched." + k] = v;
  return out;
}

std::vector<Term> EngineResult::atoms() const {
  std::vector<Term> out;
  for (const auto& c : store) out.push_back(c.atom);
  return out;
}

Engine::Engine(const ChrProgram& p, EngineOptions opts)
    : cp_(compile(p, opts.join_orders)),
      opts_(std::move(opts)),
      sched_(cp_.static_lo, cp_.static_hi),
      keys_(sched_) {
  cons_.emplace_back();  // identifiers start at 1
  for (const auto& r : cp_.rules) {
    m_.strong_by_rule[r.name] = 0;
    m_.fires_by_rule[r.name] = 0;
  }
}

Engine::~Engine() = default;

bool Engine::alive(std::int64_t id) const {
  return id > 0 && static_cast<std::size_t>(id) < cons_.size() &&
         cons_[static_cast<std::size_t>(id)].alive;
}

std::vector<StoredConstraint> Engine::store() const {
  std::vector<StoredConstraint> out;
  for (std::size_t i = 1; i < cons_.size(); ++i) {
    if (cons_[i].alive) out.push_back({static_cast<std::int64_t>(i), cons_[i].atom});
  }
  return out;
}

const EngineMetrics& Engine::metrics() {
  m_.scheduler = sched_.counters();
  m_.K = std::max<std::int64_t>(m_.K, static_cast<std::int64_t>(keys_.max_keys_per_var()));
  return m_;
}

std::size_t Engine::live_objects() const {
  std::size_t n = 0;
  for (const auto& o : objs_) n += o.state != kGone;
  return n;
}

Term Engine::subst(const Term& t, const CompiledRule& r, const std::vector<Term>& slots) const {
  if (t->ground) return t;
  if (is_var(t)) {
    auto it = r.slot.find(t->value);
    if (it == r.slot.end()) return t;
    const Term& s = slots[static_cast<std::size_t>(it->second)];
    return s ? s : t;
  }
  std::vector<Term> args;
  args.reserve(t->args.size());
  for (const auto& a : t->args) args.push_back(subst(a, r, slots));
  return mk_compound(t->name, std::move(args));
}

Tri Engine::head_match(const CompiledItem& item, const CompiledRule& r, const Term& atom,
                       std::vector<Term>& slots) const {
  Term target = builtins_.resolve(atom);
  std::vector<Term> trial(r.vars.size());
  if (match_slots(item.head, target, r, trial)) {
    slots = std::move(trial);
    return Tri::Entailed;
  }
  return mgu(item.head, target) ? Tri::Unknown : Tri::Disentailed;
}

std::vector<Term> Engine::key_of(const CompiledRule& r, int pos,
                                 const std::vector<Term>& slots) const {
  std::vector<Term> key;
  for (const auto& v : r.key_vars[static_cast<std::size_t>(pos)]) {
    key.push_back(slots[static_cast<std::size_t>(r.slot.at(v->value))]);
  }
  return key;
}

std::string Engine::tag(int rule, int pos) const {
  return std::to_string(rule) + ":" + std::to_string(pos);
}

std::optional<std::int64_t> Engine::priority_of(const CompiledRule& r,
                                                const std::vector<Term>& slots) const {
  Term p = normalize_arith(subst(r.priority, r, slots), builtins_);
  if (!is_int(p)) return std::nullopt;
  return p->value;
}

void Engine::note_priority(std::int64_t p) {
  if (prio_set_.emplace(p, 1).second) m_.N = static_cast<std::int64_t>(prio_set_.size());
}

std::int64_t Engine::new_obj(int kind, int rule, int pos) {
  Obj o;
  o.kind = static_cast<std::uint8_t>(kind);
  o.rule = rule;
  o.pos = pos;
  objs_.push_back(std::move(o));
  return static_cast<std::int64_t>(objs_.size() - 1);
}

void Engine::link(std::int64_t obj, std::int64_t cid) {
  cons_[static_cast<std::size_t>(cid)].objs.push_back(obj);
}

std::string Engine::ids_text(const Obj& o) const {
  const CompiledRule& r = cp_.rules[static_cast<std::size_t>(o.rule)];
  std::vector<std::int64_t> by_source(o.ids.size());
  for (std::size_t i = 0; i < o.ids.size(); ++i) {
    by_source[static_cast<std::size_t>(r.items[i].source_index)] = o.ids[i];
  }
  std::string out = "[";
  for (std::size_t i = 0; i < by_source.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(by_source[i]);
  }
  return out + "]";
}

void Engine::add_goal(const ChrGoal& goal) {
  for (const auto& g : goal) {
    if (failed_) return;
    if (g.kind == BodyItem::Kind::Tell) {
      solve_tell(g.lhs, g.rhs);
    } else {
      assert_constraint(g.atom);
    }
  }
}

std::int64_t Engine::assert_constraint(const Term& atom0) {
  Term atom = normalize_arith(atom0, builtins_);
  auto cid = static_cast<std::int64_t>(cons_.size());
  cons_.emplace_back();
  cons_.back().atom = atom;
  cons_.back().alive = true;
  ++live_count_;
  ++m_.introduced;
  m_.c_max = std::max(m_.c_max, static_cast<std::int64_t>(live_count_));
  if (opts_.trace) trace_.push_back("INTRODUCE " + to_string(atom) + "#" + std::to_string(cid));
  auto it = cp_.occurrences.find(pred_key(atom));
  if (it == cp_.occurrences.end()) return cid;
  // Extensions first: prefix firings already waiting meet the newcomer
  // before the newcomer's own prefix firings meet them.
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& [rule, pos] : it->second) {
      if ((pos == 0) == (pass == 0)) continue;
      occurrence(cid, rule, pos);
    }
  }
  return cid;
}

void Engine::occurrence(std::int64_t cid, int rule, int pos) {
  const CompiledRule& r = cp_.rules[static_cast<std::size_t>(rule)];
  (r.dynamic ? m_.A_d : m_.A_s)++;
  std::vector<Term> slots;
  const Term& atom = cons_[static_cast<std::size_t>(cid)].atom;
  switch (head_match(r.items[static_cast<std::size_t>(pos)], r, atom, slots)) {
    case Tri::Entailed:
      occurrence_entailed(cid, rule, pos, std::move(slots));
      return;
    case Tri::Disentailed:
      return;
    case Tri::Unknown: {
      std::int64_t o = new_obj(kOcc, rule, pos);
      objs_[static_cast<std::size_t>(o)].cid = cid;
      link(o, cid);
      suspend(o, {builtins_.resolve(atom)});
      return;
    }
  }
}

void Engine::occurrence_entailed(std::int64_t cid, int rule, int pos, std::vector<Term> slots) {
  const CompiledRule& r = cp_.rules[static_cast<std::size_t>(rule)];
  if (pos == 0) {
    std::int64_t o = new_obj(kPartial, rule, 1);
    Obj& ob = objs_[static_cast<std::size_t>(o)];
    ob.slots = std::move(slots);
    ob.ids = {cid};
    link(o, cid);
    check_partial(o);
    return;
  }
  std::int64_t o = new_obj(kPE, rule, pos);
  Obj& ob = objs_[static_cast<std::size_t>(o)];
  ob.cid = cid;
  ob.slots = std::move(slots);
  ob.state = kScheduled;
  link(o, cid);
  ScheduleId s = keys_.get(tag(rule, pos), key_of(r, pos, ob.slots), builtins_);
  sched_.schedule_pe(s, o);
}

void Engine::check_partial(std::int64_t o) {
  Obj& ob = objs_[static_cast<std::size_t>(o)];
  const CompiledRule& r = cp_.rules[static_cast<std::size_t>(ob.rule)];
  const auto& guard = r.items[static_cast<std::size_t>(ob.pos - 1)].guard;
  Tri verdict = Tri::Entailed;
  std::vector<Term> pending;
  for (const auto& g : guard) {
    Comparison c{g.op, subst(g.lhs, r, ob.slots), subst(g.rhs, r, ob.slots)};
    Tri t = eval_comparison(c, builtins_);
    if (t == Tri::Disentailed) {
      verdict = Tri::Disentailed;
      break;
    }
    if (t == Tri::Unknown) {
      verdict = Tri::Unknown;
      pending.push_back(builtins_.resolve(c.lhs));
      pending.push_back(builtins_.resolve(c.rhs));
    }
  }
  if (verdict == Tri::Entailed) {
    activate_partial(o);
  } else if (verdict == Tri::Unknown) {
    ob.state = kSuspended;
    suspend(o, pending);
  } else {
    retire(o);
  }
}

void Engine::activate_partial(std::int64_t o) {
  Obj& ob = objs_[static_cast<std::size_t>(o)];
  const CompiledRule& r = cp_.rules[static_cast<std::size_t>(ob.rule)];
  (r.dynamic ? m_.P_d : m_.P_s)++;
  ++m_.strong_by_rule[r.name];
  ob.state = kScheduled;
  auto prio = priority_of(r, ob.slots);
  if (static_cast<std::size_t>(ob.pos) == r.size()) {
    if (!prio) {
      throw EngineError("rule " + r.name + ": priority " + to_string(r.priority) +
                        " is not a ground integer expression");
    }
    note_priority(*prio);
    sched_.schedule_rf(Priority{*prio, r.dynamic}, o);
    return;
  }
  ScheduleId s = keys_.get(tag(ob.rule, ob.pos), key_of(r, ob.pos, ob.slots), builtins_);
  if (prio) {
    note_priority(*prio);
    sched_.schedule_pf(s, Priority{*prio, r.dynamic}, o);
  } else {
    sched_.schedule_pf(s, Priority{kUnknownPriority, true}, o);
  }
}

void Engine::suspend(std::int64_t o, const std::vector<Term>& terms) {
  Obj& ob = objs_[static_cast<std::size_t>(o)];
  ob.state = kSuspended;
  std::vector<Term> vs;
  for (const auto& t : terms) collect_vars(builtins_.resolve(t), vs);
  for (const auto& v : vs) {
    std::int64_t root = builtins_.find(v->value);
    if (std::find(ob.roots.begin(), ob.roots.end(), root) != ob.roots.end()) continue;
    ob.roots.push_back(root);
    auto& list = watchers_[root];
    list.push_back(o);
    m_.S = std::max(m_.S, static_cast<std::int64_t>(list.size()));
  }
}

void Engine::retire(std::int64_t o) {
  Obj& ob = objs_[static_cast<std::size_t>(o)];
  if (ob.state == kScheduled) {
    const CompiledRule& r = cp_.rules[static_cast<std::size_t>(ob.rule)];
    if (ob.kind == kPE) {
      sched_.remove_pe(o);
    } else if (static_cast<std::size_t>(ob.pos) == r.size()) {
      if (sched_.has_rf(o)) sched_.remove_rf(o);
    } else {
      sched_.remove_pf(o);
    }
  }
  ob.state = kGone;
  ob.slots.clear();
  ob.slots.shrink_to_fit();
}

void Engine::wake(const std::vector<std::int64_t>& touched) {
  for (std::int64_t root : touched) {
    auto w = watchers_.find(root);
    if (w == watchers_.end()) continue;
    std::vector<std::int64_t> list = std::move(w->second);
    watchers_.erase(w);
    for (std::int64_t o : list) {
      Obj& ob = objs_[static_cast<std::size_t>(o)];
      ob.roots.erase(std::remove(ob.roots.begin(), ob.roots.end(), root), ob.roots.end());
      if (ob.state != kSuspended) continue;
      ++m_.reactivations;
      if (ob.kind == kOcc) {
        const CompiledRule& r = cp_.rules[static_cast<std::size_t>(ob.rule)];
        const Term& atom = cons_[static_cast<std::size_t>(ob.cid)].atom;
        std::vector<Term> slots;
        Tri t = head_match(r.items[static_cast<std::size_t>(ob.pos)], r, atom, slots);
        if (t == Tri::Unknown) {
          suspend(o, {builtins_.resolve(atom)});
          continue;
        }
        ob.state = kGone;
        if (t == Tri::Entailed) {
          if (opts_.trace) {
            trace_.push_back("REACTIVATE " + r.name + " occurrence " +
                             std::to_string(ob.pos + 1) + " #" + std::to_string(ob.cid));
          }
          occurrence_entailed(ob.cid, ob.rule, ob.pos, std::move(slots));
        }
      } else {
        if (opts_.trace) {
          trace_.push_back("REACTIVATE " + cp_.rules[static_cast<std::size_t>(ob.rule)].name +
                           " prefix " + std::to_string(ob.pos) + " " + ids_text(ob));
        }
        check_partial(o);
      }
    }
  }
}

void Engine::solve_tell(const Term& a, const Term& b) {
  ++m_.B;
  if (opts_.trace) trace_.push_back("SOLVE " + to_string(BodyItem::tell(a, b)));
  std::vector<std::int64_t> touched;
  if (!builtins_.unify(a, b, &touched)) {
    failed_ = true;
    return;
  }
  keys_.rehash(touched, builtins_);
  m_.K = std::max<std::int64_t>(m_.K, static_cast<std::int64_t>(keys_.max_keys_per_var()));
  wake(touched);
}

void Engine::delete_constraint(std::int64_t id) {
  if (!alive(id)) throw EngineError("constraint #" + std::to_string(id) + " is not alive");
  Constraint& c = cons_[static_cast<std::size_t>(id)];
  c.alive = false;
  --live_count_;
  std::vector<std::int64_t> objs = std::move(c.objs);
  c.objs.clear();
  for (std::int64_t o : objs) {
    if (objs_[static_cast<std::size_t>(o)].state != kGone) retire(o);
  }
}

void Engine::process_match(std::int64_t pf, std::int64_t pe) {
  ++m_.matches;
  const Obj& a = objs_[static_cast<std::size_t>(pf)];
  const Obj& b = objs_[static_cast<std::size_t>(pe)];
  if (opts_.trace) {
    trace_.push_back("MATCH " + cp_.rules[static_cast<std::size_t>(a.rule)].name + " prefix " +
                     std::to_string(a.pos) + " + #" + std::to_string(b.cid));
  }
  if (std::find(a.ids.begin(), a.ids.end(), b.cid) != a.ids.end()) return;
  std::vector<Term> slots = a.slots;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i] && b.slots[i]) slots[i] = b.slots[i];
  }
  std::vector<std::int64_t> ids = a.ids;
  ids.push_back(b.cid);
  int rule = a.rule;
  int len = a.pos + 1;
  std::int64_t o = new_obj(kPartial, rule, len);
  Obj& ob = objs_[static_cast<std::size_t>(o)];
  ob.slots = std::move(slots);
  ob.ids = std::move(ids);
  for (std::int64_t cid : objs_[static_cast<std::size_t>(o)].ids) link(o, cid);
  check_partial(o);
}

void Engine::fire(std::int64_t rf, std::int64_t priority) {
  Obj& ob = objs_[static_cast<std::size_t>(rf)];
  const CompiledRule& r = cp_.rules[static_cast<std::size_t>(ob.rule)];
  for (std::int64_t id : ob.ids) {
    if (!alive(id)) throw EngineError("rule firing of " + r.name + " references a dead constraint");
  }
  ++m_.fires;
  ++m_.fires_by_rule[r.name];
  if (opts_.trace) {
    trace_.push_back("APPLY " + r.name + "@" + std::to_string(priority) + " " + ids_text(ob));
  }
  ob.state = kGone;
  std::vector<Term> slots = std::move(ob.slots);
  std::vector<std::int64_t> ids = ob.ids;
  for (std::size_t i = 0; i < r.items.size(); ++i) {
    if (!r.items[i].kept && alive(ids[i])) delete_constraint(ids[i]);
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i]) slots[i] = mk_var(r.vars[i]->name);
  }
  for (const auto& b : r.body) {
    if (failed_) return;
    if (b.kind == BodyItem::Kind::Tell) {
      solve_tell(subst(b.lhs, r, slots), subst(b.rhs, r, slots));
    } else {
      assert_constraint(subst(b.atom, r, slots));
    }
  }
}

bool Engine::step() {
  if (failed_) return false;
  std::int64_t before = sched_.counters().at("unsuccessful_executes");
  Task t = sched_.execute();
  if (opts_.trace) {
    std::int64_t after = sched_.counters().at("unsuccessful_executes");
    if (after > before) trace_.push_back("PASSIVATE " + std::to_string(after - before));
  }
  switch (t.kind) {
    case TaskKind::Done:
      return false;
    case TaskKind::Match:
      process_match(t.pf, t.pe);
      return true;
    case TaskKind::Fire:
      if (static_cast<std::size_t>(m_.fires) >= opts_.budget) {
        throw BudgetExceeded("engine run exceeded " + std::to_string(opts_.budget) +
                             " rule firings");
      }
      fire(t.rf, t.priority);
      return true;
  }
  return false;
}

void Engine::run() {
  while (step()) {
  }
}

EngineResult engine_run(const ChrGoal& goal, const ChrProgram& p, const EngineOptions& opts) {
  Engine e(p, opts);
  if (opts.incremental_goal) {
    for (const auto& g : goal) {
      e.add_goal({g});
      e.run();
    }
  } else {
    e.add_goal(goal);
  }
  e.run();
  EngineResult res;
  res.store = e.store();
  res.builtins = e.builtins();
  res.failed = e.failed();
  res.metrics = e.metrics();
  res.trace = e.trace();
  return res;
}

std::string canonical(const EngineResult& r, const std::vector<Term>& goal_vars) {
  return canonical_state(goal_vars, r.builtins, r.atoms(), r.failed);
}

AtgbReport atgb_bound(const EngineMetrics& m, const ChrProgram& p) {
  AtgbReport rep;
  rep.derivation_length = m.fires;
  rep.c_max = m.c_max;
  rep.measured_tasks = m.tasks();
  long double sum = 0;
  for (const auto& r : p.rules) {
    auto n = static_cast<long double>(r.kept.size() + r.removed.size());
    sum += std::pow(static_cast<long double>(m.c_max), n) * 2 + 2;
  }
  rep.bound = static_cast<long double>(m.fires) * sum;
  long double logn = std::log2(static_cast<long double>(std::max<std::int64_t>(m.N, 2)));
  rep.meta_formula = 2 * (static_cast<long double>(m.A_s + m.P_s) +
                          static_cast<long double>(m.A_d + m.P_d) * logn) +
                     static_cast<long double>(m.B) * static_cast<long double>(m.K + m.S);
  return rep;
}

std::string AtgbReport::text() const {
  std::ostringstream os;
  os << "D=" << derivation_length << " c_max=" << c_max
     << " atgb_bound=" << static_cast<double>(bound) << " measured_tasks=" << measured_tasks
     << " meta_formula=" << static_cast<double>(meta_formula);
  return os.str();
}

}  // namespace chr
