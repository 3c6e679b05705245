#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "chr/pqueue.hpp"
#include "chr/scheduler.hpp"

namespace testgen {

// Naive reference for Scheduler: every pf remembers the pes it has met, and
// a task is legal when it has the minimum priority among all pending work.
struct ShadowScheduler {
  std::vector<std::size_t> parent;
  std::map<std::int64_t, std::pair<std::size_t, std::int64_t>> pfs;  // id -> (sched, prio)
  std::map<std::int64_t, std::size_t> pes;
  std::map<std::int64_t, std::int64_t> rfs;
  std::map<std::int64_t, std::set<std::int64_t>> met;

  std::size_t new_schedule() {
    parent.push_back(parent.size());
    return parent.size() - 1;
  }
  std::size_t find(std::size_t s) const {
    while (parent[s] != s) s = parent[s];
    return s;
  }
  void merge(std::size_t a, std::size_t b) { parent[find(b)] = find(a); }

  bool pending(std::int64_t pf) const {
    std::size_t s = find(pfs.at(pf).first);
    auto m = met.find(pf);
    for (const auto& [pe, ps] : pes) {
      if (find(ps) != s) continue;
      if (m == met.end() || !m->second.count(pe)) return true;
    }
    return false;
  }

  std::int64_t min_priority() const {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (const auto& [id, p] : rfs) best = std::min(best, p);
    for (const auto& [id, sp] : pfs) {
      if (sp.second < best && pending(id)) best = sp.second;
    }
    return best;
  }

  // Checks a task returned by the real scheduler and applies it; returns an
  // empty string when legal.
  std::string accept(const chr::Task& t) {
    std::int64_t best = min_priority();
    if (t.kind == chr::TaskKind::Done) {
      return best == std::numeric_limits<std::int64_t>::max() ? "" : "Done with pending work";
    }
    if (t.priority != best) {
      return "priority " + std::to_string(t.priority) + " but minimum is " + std::to_string(best);
    }
    if (t.kind == chr::TaskKind::Fire) {
      auto it = rfs.find(t.rf);
      if (it == rfs.end() || it->second != t.priority) return "unknown rf";
      rfs.erase(it);
      return "";
    }
    auto pf = pfs.find(t.pf);
    auto pe = pes.find(t.pe);
    if (pf == pfs.end() || pe == pes.end()) return "match on dead pf/pe";
    if (pf->second.second != t.priority) return "wrong pf priority";
    if (find(pf->second.first) != find(pe->second)) return "pf and pe in different schedules";
    if (!met[t.pf].insert(t.pe).second) return "pf met pe twice";
    return "";
  }
};

// One random run against the shadow; returns an empty string on success.
inline std::string shadow_run(std::uint64_t seed, int ops, bool merge_heavy) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  chr::Scheduler s(0, 8);
  ShadowScheduler sh;
  std::vector<chr::ScheduleId> real, shadow;
  auto add_schedule = [&] {
    real.push_back(s.new_schedule());
    shadow.push_back(sh.new_schedule());
  };
  add_schedule();
  add_schedule();
  std::int64_t next = 1;
  std::int64_t fires_expected = 0, fires_seen = 0;
  auto prio = [&] {
    int k = pick(6);
    if (k == 0) return chr::Priority{pick(20) - 5, true};
    if (k == 1) return chr::Priority{12, false};  // static but outside the bucket range
    return chr::Priority{pick(5), false};
  };
  auto random_key = [&](const auto& m) {
    auto it = m.begin();
    std::advance(it, pick(static_cast<int>(m.size())));
    return it->first;
  };
  auto step = [&](const chr::Task& t) -> std::string {
    if (t.kind == chr::TaskKind::Fire) ++fires_seen;
    return sh.accept(t);
  };
  for (int op = 0; op < ops; ++op) {
    int k = pick(merge_heavy ? 12 : 10);
    int w = pick(static_cast<int>(real.size()));
    if (k == 0) {
      chr::Priority p = prio();
      s.schedule_pf(real[w], p, next);
      sh.pfs[next++] = {shadow[w], p.value};
    } else if (k == 1 || k == 2) {
      s.schedule_pe(real[w], next);
      sh.pes[next++] = shadow[w];
    } else if (k == 3) {
      chr::Priority p = prio();
      s.schedule_rf(p, next);
      sh.rfs[next++] = p.value;
      ++fires_expected;
    } else if (k == 4 && !sh.pfs.empty()) {
      auto id = random_key(sh.pfs);
      s.remove_pf(id);
      sh.pfs.erase(id);
    } else if (k == 5 && !sh.pes.empty()) {
      auto id = random_key(sh.pes);
      s.remove_pe(id);
      sh.pes.erase(id);
    } else if (k == 6 && !sh.rfs.empty()) {
      auto id = random_key(sh.rfs);
      s.remove_rf(id);
      sh.rfs.erase(id);
      --fires_expected;
    } else if (k == 7) {
      add_schedule();
    } else if (k >= 10 || (k == 8 && real.size() > 1)) {
      int v = pick(static_cast<int>(real.size()));
      s.merge_schedules(real[w], real[v]);
      sh.merge(shadow[w], shadow[v]);
    } else {
      int n = 1 + pick(3);
      for (int i = 0; i < n; ++i) {
        std::string bad = step(s.execute());
        if (!bad.empty()) return bad;
      }
    }
    if (!s.check_invariants()) return "invariants broken after op " + std::to_string(op);
  }
  while (true) {
    chr::Task t = s.execute();
    std::string bad = step(t);
    if (!bad.empty()) return bad;
    if (t.kind == chr::TaskKind::Done) break;
  }
  for (const auto& [id, sp] : sh.pfs) {
    if (sh.pending(id)) return "pf " + std::to_string(id) + " never met a live pe";
  }
  if (fires_seen != fires_expected) return "fire count mismatch";
  auto c = s.counters();
  if (c.at("insertions") != c.at("deletions")) return "queue not empty after drain";
  if (!s.check_invariants()) return "invariants broken at end";
  return "";
}

// FibHeap against a multimap oracle; returns an empty string on success.
inline std::string fibheap_oracle_run(std::uint64_t seed, int ops) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  chr::FibHeap<std::int64_t> h;
  std::multimap<std::int64_t, std::int64_t> oracle;  // equal keys keep insertion order
  std::map<std::int64_t, chr::FibHeap<std::int64_t>::Handle> handles;
  std::int64_t next = 0;
  for (int op = 0; op < ops; ++op) {
    int k = pick(10);
    if (k < 4 || oracle.empty()) {
      std::int64_t p = pick(50);
      handles[next] = h.insert(p, next);
      oracle.emplace(p, next);
      ++next;
    } else if (k < 6) {
      auto top = oracle.begin();
      if (h.top()->value != top->second) return "top mismatch at op " + std::to_string(op);
      if (h.pop() != top->second) return "pop mismatch at op " + std::to_string(op);
      handles.erase(top->second);
      oracle.erase(top);
    } else if (k < 8) {
      auto it = handles.begin();
      std::advance(it, pick(static_cast<int>(handles.size())));
      std::int64_t id = it->first;
      std::int64_t p = it->second->prio;
      h.erase(it->second);
      handles.erase(it);
      auto range = oracle.equal_range(p);
      for (auto o = range.first; o != range.second; ++o) {
        if (o->second == id) {
          oracle.erase(o);
          break;
        }
      }
    } else {
      chr::FibHeap<std::int64_t> other;
      int n = pick(4);
      for (int i = 0; i < n; ++i) {
        std::int64_t p = pick(50);
        handles[next] = other.insert(p, next);
        oracle.emplace(p, next);
        ++next;
      }
      h.merge(other);
    }
    if (h.size() != oracle.size()) return "size mismatch at op " + std::to_string(op);
    if (!oracle.empty() && h.top()->value != oracle.begin()->second) {
      return "minimum mismatch at op " + std::to_string(op);
    }
    if (op % 97 == 0 && !h.check_invariants()) return "heap invariants broken";
  }
  return h.check_invariants() ? "" : "heap invariants broken";
}

}  // namespace testgen
