#include "chr/scheduler.hpp"

#include <stdexcept>

namespace chr {

namespace {
enum NodeKind { kPE = 0, kBoundary = 1, kTail = 2 };
}

struct Scheduler::Node {
  int kind = kTail;
  bool dead = false;
  std::int64_t pe = -1;
  Node* next = nullptr;
  Node* skip = nullptr;  // dead nodes: a later node, compressed on use
};

struct Scheduler::GItem {
  enum Kind { RF, PFItem, GroupItem } kind;
  std::int64_t rf = -1;
  PF* pf = nullptr;
  Box* group = nullptr;
  std::uint64_t seq = 0;
};

// A heap of parked pfs: either a schedule's passive heap or a group sharing
// one cursor/stack. A passive box becomes a group in place, so members keep
// their box pointer.
struct Scheduler::Box {
  bool group = false;
  bool retired = false;
  ScheduleId sched = 0;
  FibHeap<PF*> heap;
  Node* cursor = nullptr;
  Stack stack;
  GHandle rep;
};

struct Scheduler::PF {
  bool active = true;
  std::int64_t id = 0;
  Priority prio;
  ScheduleId sched = 0;
  Node* cursor = nullptr;
  Stack stack;
  GHandle global;                             // active
  Box* box = nullptr;                         // parked
  FibHeap<PF*>::Handle heap_entry = nullptr;  // parked
};

struct Scheduler::Sched {
  Node* head = nullptr;
  Node* tail = nullptr;
  Box* passive = nullptr;
  std::unordered_set<PF*> active;
  std::unordered_set<Box*> groups;
};

Scheduler::Scheduler(std::int64_t static_lo, std::int64_t static_hi)
    : static_lo_(static_lo),
      static_hi_(static_hi),
      buckets_(std::make_unique<BucketQueue<GItem>>(static_lo, static_hi)),
      fib_(std::make_unique<FibHeap<GItem>>()) {}

Scheduler::~Scheduler() = default;

Scheduler::Node* Scheduler::new_node(int kind) {
  nodes_.emplace_back();
  nodes_.back().kind = kind;
  return &nodes_.back();
}

Scheduler::Box* Scheduler::new_box(ScheduleId s) {
  boxes_.push_back(std::make_unique<Box>());
  boxes_.back()->sched = s;
  return boxes_.back().get();
}

ScheduleId Scheduler::new_schedule() {
  auto s = std::make_unique<Sched>();
  s->head = s->tail = new_node(kTail);
  ScheduleId id = parent_.size();
  parent_.push_back(id);
  s->passive = new_box(id);
  scheds_.push_back(std::move(s));
  return id;
}

ScheduleId Scheduler::find(ScheduleId s) const {
  ScheduleId r = s;
  while (parent_.at(r) != r) r = parent_[r];
  while (parent_[s] != r) {
    ScheduleId n = parent_[s];
    parent_[s] = r;
    s = n;
  }
  return r;
}

Scheduler::Sched& Scheduler::sched(ScheduleId s) { return *scheds_[find(s)]; }

Scheduler::GHandle Scheduler::gq_insert(Priority p, GItem item) {
  item.seq = seq_++;
  ++insertions_;
  GHandle h;
  if (!p.dynamic && buckets_->in_range(p.value)) {
    h.fib = false;
    h.entry = buckets_->insert(p.value, item);
  } else {
    h.fib = true;
    h.entry = fib_->insert(p.value, item);
  }
  return h;
}

void Scheduler::gq_erase(GHandle& h) {
  ++deletions_;
  if (h.fib) {
    fib_->erase(static_cast<FibHeap<GItem>::Handle>(h.entry));
  } else {
    buckets_->erase(static_cast<BucketQueue<GItem>::Handle>(h.entry));
  }
  h.entry = nullptr;
}

Scheduler::GItem* Scheduler::gq_top(std::int64_t* prio) {
  auto* b = buckets_->top();
  auto* f = fib_->top();
  if (!b && !f) return nullptr;
  bool take_fib = !b || (f && (f->prio < b->prio ||
                               (f->prio == b->prio && f->value.seq < b->value.seq)));
  if (take_fib) {
    *prio = f->prio;
    return &f->value;
  }
  *prio = b->prio;
  return &b->value;
}

Scheduler::Node* Scheduler::live(Node* n) {
  Node* r = n;
  while (r->kind == kPE && r->dead) {
    r = r->skip;
    ++node_steps_;
  }
  while (n != r) {
    Node* nx = n->skip;
    n->skip = r;
    n = nx;
  }
  return r;
}

Scheduler::Node* Scheduler::advance(Node* c, Stack& stack) {
  while (true) {
    c = live(c);
    if (c->kind != kBoundary) return c;
    ++node_steps_;
    if (!stack.empty() && stack.back().first == c) {
      c = stack.back().second;
      stack.pop_back();
    } else {
      c = c->next;
    }
  }
}

void Scheduler::refresh_rep(Box* g) {
  if (g->rep.entry) gq_erase(g->rep);
  if (g->heap.empty()) return;
  PF* top = g->heap.top()->value;
  g->rep = gq_insert(top->prio, GItem{GItem::GroupItem, -1, nullptr, g});
}

void Scheduler::to_group(Sched& s, Box* b, Node* cursor, Stack stack) {
  b->group = true;
  b->cursor = cursor;
  b->stack = std::move(stack);
  s.groups.insert(b);
  refresh_rep(b);
}

void Scheduler::retire_group(Box* g) {
  if (g->rep.entry) gq_erase(g->rep);
  sched(g->sched).groups.erase(g);
  g->group = false;
  g->cursor = nullptr;
  g->stack.clear();
}

void Scheduler::absorb(Box* into, Box* from) {
  from->heap.for_each([into](FibHeap<PF*>::Handle e) { e->value->box = into; });
  into->heap.merge(from->heap);
  from->retired = true;
}

void Scheduler::passivate(PF* pf) {
  Sched& sc = sched(pf->sched);
  gq_erase(pf->global);
  sc.active.erase(pf);
  pf->active = false;
  pf->cursor = nullptr;
  pf->stack.clear();
  pf->box = sc.passive;
  pf->heap_entry = sc.passive->heap.insert(pf->prio.value, pf);
}

void Scheduler::schedule_pf(ScheduleId s, Priority p, std::int64_t pf_id) {
  if (pfs_.count(pf_id)) {
    throw std::logic_error("duplicate prefix firing " + std::to_string(pf_id));
  }
  auto pf = std::make_unique<PF>();
  pf->id = pf_id;
  pf->prio = p;
  pf->sched = find(s);
  Sched& sc = sched(s);
  pf->cursor = sc.head;
  pf->global = gq_insert(p, GItem{GItem::PFItem, -1, pf.get(), nullptr});
  sc.active.insert(pf.get());
  pfs_.emplace(pf_id, std::move(pf));
}

void Scheduler::schedule_pe(ScheduleId s, std::int64_t pe_id) {
  if (pes_.count(pe_id)) {
    throw std::logic_error("duplicate prefix extension " + std::to_string(pe_id));
  }
  ScheduleId root = find(s);
  Sched& sc = *scheds_[root];
  Node* n = sc.tail;
  n->kind = kPE;
  n->pe = pe_id;
  n->next = new_node(kTail);
  sc.tail = n->next;
  pes_[pe_id] = n;
  if (!sc.passive->heap.empty()) {
    Box* g = sc.passive;
    sc.passive = new_box(root);
    to_group(sc, g, n, {});
  }
}

void Scheduler::schedule_rf(Priority p, std::int64_t rf_id) {
  if (rfs_.count(rf_id)) throw std::logic_error("duplicate rule firing " + std::to_string(rf_id));
  rfs_[rf_id] = gq_insert(p, GItem{GItem::RF, rf_id, nullptr, nullptr});
}

void Scheduler::remove_pf(std::int64_t pf_id) {
  auto it = pfs_.find(pf_id);
  if (it == pfs_.end()) throw std::logic_error("unknown prefix firing " + std::to_string(pf_id));
  PF* pf = it->second.get();
  if (pf->active) {
    gq_erase(pf->global);
    sched(pf->sched).active.erase(pf);
  } else {
    Box* b = pf->box;
    bool was_top = b->heap.top() == pf->heap_entry;
    b->heap.erase(pf->heap_entry);
    if (b->group) {
      if (b->heap.empty()) {
        retire_group(b);
        b->retired = true;
      } else if (was_top) {
        refresh_rep(b);
      }
    }
  }
  pfs_.erase(it);
}

void Scheduler::remove_pe(std::int64_t pe_id) {
  auto it = pes_.find(pe_id);
  if (it == pes_.end()) {
    throw std::logic_error("unknown prefix extension " + std::to_string(pe_id));
  }
  Node* n = it->second;
  n->dead = true;
  n->skip = n->next;
  pes_.erase(it);
}

void Scheduler::remove_rf(std::int64_t rf_id) {
  auto it = rfs_.find(rf_id);
  if (it == rfs_.end()) throw std::logic_error("unknown rule firing " + std::to_string(rf_id));
  gq_erase(it->second);
  rfs_.erase(it);
}

Task Scheduler::execute() {
  while (true) {
    std::int64_t prio = 0;
    GItem* top = gq_top(&prio);
    if (!top) return Task{};
    if (top->kind == GItem::RF) {
      std::int64_t id = top->rf;
      remove_rf(id);
      Task t;
      t.kind = TaskKind::Fire;
      t.rf = id;
      t.priority = prio;
      return t;
    }
    if (top->kind == GItem::PFItem) {
      PF* pf = top->pf;
      Node* c = advance(pf->cursor, pf->stack);
      if (c->kind == kTail) {
        passivate(pf);
        ++unsuccessful_;
        continue;
      }
      pf->cursor = c->next;
      Task t;
      t.kind = TaskKind::Match;
      t.pf = pf->id;
      t.pe = c->pe;
      t.priority = prio;
      return t;
    }
    Box* g = top->group;
    g->cursor = advance(g->cursor, g->stack);
    if (g->cursor->kind == kTail) {
      Sched& sc = sched(g->sched);
      retire_group(g);
      Box* p = sc.passive;
      if (g->heap.size() > p->heap.size()) {
        absorb(g, p);
        sc.passive = g;
      } else {
        absorb(p, g);
      }
      ++unsuccessful_;
      continue;
    }
    PF* pf = g->heap.top()->value;
    g->heap.erase(pf->heap_entry);
    pf->heap_entry = nullptr;
    pf->box = nullptr;
    pf->active = true;
    pf->cursor = g->cursor->next;
    pf->stack = g->stack;
    pf->global = gq_insert(pf->prio, GItem{GItem::PFItem, -1, pf, nullptr});
    sched(pf->sched).active.insert(pf);
    Task t;
    t.kind = TaskKind::Match;
    t.pf = pf->id;
    t.pe = g->cursor->pe;
    t.priority = prio;
    if (g->heap.empty()) {
      retire_group(g);
      g->retired = true;
    } else {
      refresh_rep(g);
    }
    return t;
  }
}

ScheduleId Scheduler::merge_schedules(ScheduleId a, ScheduleId b) {
  ScheduleId ra = find(a), rb = find(b);
  if (ra == rb) return ra;
  auto weight = [](const Sched& s) { return s.active.size() + s.groups.size(); };
  if (weight(*scheds_[rb]) > weight(*scheds_[ra])) std::swap(ra, rb);
  Sched& A = *scheds_[ra];
  Sched& B = *scheds_[rb];
  ++merges_;

  Node* bd = A.tail;
  bool a_has = A.head != bd;
  bool b_has = B.head != B.tail;
  Node* a_first = A.head;
  bd->kind = kBoundary;
  bd->next = B.head;
  A.tail = B.tail;

  for (PF* pf : B.active) {
    if (a_has) {
      pf->stack.emplace_back(bd, pf->cursor);
      pf->cursor = a_first;
    }
    A.active.insert(pf);
  }
  for (Box* g : B.groups) {
    if (a_has) {
      g->stack.emplace_back(bd, g->cursor);
      g->cursor = a_first;
    }
    A.groups.insert(g);
  }

  Box* pa = A.passive;
  Box* pb = B.passive;
  std::vector<Box*> parked;
  if (!pa->heap.empty() && b_has) {
    A.passive = nullptr;
    to_group(A, pa, bd->next, {});
  } else {
    parked.push_back(pa);
  }
  if (!pb->heap.empty() && a_has) {
    to_group(A, pb, a_first, {{bd, A.tail}});
  } else {
    parked.push_back(pb);
  }
  Box* keep = nullptr;
  for (Box* p : parked) {
    if (!keep || p->heap.size() > keep->heap.size()) keep = p;
  }
  if (!keep) keep = new_box(ra);
  for (Box* p : parked) {
    if (p != keep) absorb(keep, p);
  }
  keep->sched = ra;
  A.passive = keep;

  parent_[rb] = ra;
  scheds_[rb].reset();
  return ra;
}

std::map<std::string, std::int64_t> Scheduler::counters() const {
  return {{"insertions", insertions_},
          {"deletions", deletions_},
          {"merges", merges_},
          {"unsuccessful_executes", unsuccessful_},
          {"node_steps", node_steps_}};
}

bool Scheduler::check_invariants() const {
  if (!fib_->check_invariants()) return false;
  std::size_t active = 0, reps = 0;
  for (const auto& [id, pf] : pfs_) {
    if (pf->id != id) return false;
    const Sched* s = scheds_[find(pf->sched)].get();
    if (!s) return false;
    if (pf->active) {
      ++active;
      if (!pf->global.entry || !s->active.count(pf.get())) return false;
    } else {
      const Box* b = pf->box;
      if (!b || b->retired || !pf->heap_entry || pf->heap_entry->value != pf.get()) return false;
      if (find(b->sched) != find(pf->sched)) return false;
      if (!b->group && s->passive != b) return false;
      if (b->group && !s->groups.count(const_cast<Box*>(b))) return false;
    }
  }
  std::size_t parked = 0;
  for (const auto& s : scheds_) {
    if (!s) continue;
    if (s->passive->group || s->passive->retired) return false;
    if (!s->passive->heap.check_invariants()) return false;
    parked += s->passive->heap.size();
    for (const PF* pf : s->active) {
      if (!pf->active) return false;
    }
    for (const Box* g : s->groups) {
      if (!g->group || g->retired || g->heap.empty() || !g->rep.entry) return false;
      if (!g->heap.check_invariants()) return false;
      parked += g->heap.size();
      ++reps;
    }
  }
  if (active + parked != pfs_.size()) return false;
  return buckets_->size() + fib_->size() == active + reps + rfs_.size();
}

}  // namespace chr
