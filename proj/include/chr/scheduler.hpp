#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "chr/pqueue.hpp"

namespace chr {

struct Priority {
  std::int64_t value = 0;
  bool dynamic = false;
};

enum class TaskKind { Match, Fire, Done };

struct Task {
  TaskKind kind = TaskKind::Done;
  std::int64_t pf = -1;
  std::int64_t pe = -1;
  std::int64_t rf = -1;
  std::int64_t priority = 0;
};

using ScheduleId = std::size_t;

// Mergeable W(r,t) schedules over a shared global queue.
//
// A schedule is a singly linked list of nodes ending in a tail node. Each
// prefix firing (pf) holds a cursor: the next node it must meet. Appending a
// prefix extension (pe) turns the tail into that pe's node and adds a fresh
// tail, so cursors resting on the tail see it. Removed pe nodes are skipped
// through path-compressed skip links. A merge turns the surviving tail into
// a boundary node followed by the other list; pfs that still owe nodes
// before the boundary carry (boundary, resume) entries on a stack.
//
// Passive pfs (cursor at the tail) wait in a per-schedule passive heap. A
// new pe or a merge turns that heap into a group: a local heap with one
// shared cursor/stack and one representative in the global queue.
class Scheduler {
 public:
  // Static priorities in [static_lo, static_hi] go to the bucket queue;
  // everything else goes to the Fibonacci heap.
  explicit Scheduler(std::int64_t static_lo = 0, std::int64_t static_hi = 64);
  ~Scheduler();
  Scheduler(const Scheduler&) = delete;
  Scheduler& operator=(const Scheduler&) = delete;

  ScheduleId new_schedule();
  ScheduleId find(ScheduleId s) const;

  void schedule_pf(ScheduleId s, Priority p, std::int64_t pf_id);
  void schedule_pe(ScheduleId s, std::int64_t pe_id);
  void schedule_rf(Priority p, std::int64_t rf_id);
  void remove_pf(std::int64_t pf_id);
  void remove_pe(std::int64_t pe_id);
  void remove_rf(std::int64_t rf_id);

  bool has_pf(std::int64_t id) const { return pfs_.count(id) > 0; }
  bool has_pe(std::int64_t id) const { return pes_.count(id) > 0; }
  bool has_rf(std::int64_t id) const { return rfs_.count(id) > 0; }

  // The highest-priority live task; pfs that have met every pe passivate
  // internally. A Fire task unschedules its rule firing.
  Task execute();

  // Returns the surviving id; a no-op when both already coincide.
  ScheduleId merge_schedules(ScheduleId a, ScheduleId b);

  std::map<std::string, std::int64_t> counters() const;
  std::size_t live_pfs() const { return pfs_.size(); }
  std::size_t live_pes() const { return pes_.size(); }
  std::size_t live_rfs() const { return rfs_.size(); }
  bool check_invariants() const;

 private:
  struct Node;
  struct Box;
  struct PF;
  struct Sched;
  struct GItem;
  using Stack = std::vector<std::pair<Node*, Node*>>;

  struct GHandle {
    bool fib = false;
    void* entry = nullptr;
  };

  Node* new_node(int kind);
  Node* live(Node* n);
  Node* advance(Node* c, Stack& stack);
  GHandle gq_insert(Priority p, GItem item);
  void gq_erase(GHandle& h);
  GItem* gq_top(std::int64_t* prio);
  Sched& sched(ScheduleId s);
  Box* new_box(ScheduleId s);
  void passivate(PF* pf);
  void to_group(Sched& s, Box* b, Node* cursor, Stack stack);
  void refresh_rep(Box* g);
  void absorb(Box* into, Box* from);
  void retire_group(Box* g);

  std::int64_t static_lo_, static_hi_;
  std::unique_ptr<BucketQueue<GItem>> buckets_;
  std::unique_ptr<FibHeap<GItem>> fib_;
  std::uint64_t seq_ = 0;

  std::deque<Node> nodes_;
  std::vector<std::unique_ptr<Sched>> scheds_;
  std::vector<std::unique_ptr<Box>> boxes_;
  mutable std::vector<ScheduleId> parent_;
  std::unordered_map<std::int64_t, std::unique_ptr<PF>> pfs_;
  std::unordered_map<std::int64_t, Node*> pes_;
  std::unordered_map<std::int64_t, GHandle> rfs_;

  std::int64_t insertions_ = 0, deletions_ = 0, merges_ = 0, unsuccessful_ = 0;
  std::int64_t node_steps_ = 0;
};

}  // namespace chr
