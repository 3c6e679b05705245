#include "chr/keytable.hpp"

#include <algorithm>

namespace chr {

namespace {

void write(const Term& t, std::string& out) {
  switch (t->kind) {
    case TermKind::Var:
      out += "_" + std::to_string(t->value);
      return;
    case TermKind::Int:
      out += std::to_string(t->value);
      return;
    case TermKind::Compound:
      out += t->name;
      if (t->args.empty()) return;
      out += "(";
      for (std::size_t i = 0; i < t->args.size(); ++i) {
        if (i) out += ",";
        write(t->args[i], out);
      }
      out += ")";
      return;
  }
}

}  // namespace

std::string KeyTable::key_string(const std::string& tag, const std::vector<Term>& key,
                                 const BuiltinStore& b) {
  std::string out = tag + "|";
  for (const auto& k : key) {
    write(b.resolve(k), out);
    out += ";";
  }
  return out;
}

void KeyTable::watch(std::size_t idx, const BuiltinStore& b) {
  std::vector<Term> vars;
  for (const auto& k : recs_[idx].key) collect_vars(b.resolve(k), vars);
  for (const auto& v : vars) {
    auto& w = watch_[v->value];
    if (!w.empty() && w.back() == idx) continue;
    w.push_back(idx);
    max_watch_ = std::max(max_watch_, w.size());
  }
}

ScheduleId KeyTable::get(const std::string& tag, const std::vector<Term>& key,
                         const BuiltinStore& b) {
  std::string k = key_string(tag, key, b);
  auto it = by_key_.find(k);
  if (it != by_key_.end()) return sched_.find(recs_[it->second].sched);
  std::size_t idx = recs_.size();
  recs_.push_back({tag, key, k, sched_.new_schedule(), true});
  by_key_[k] = idx;
  watch(idx, b);
  return recs_[idx].sched;
}

std::size_t KeyTable::rehash(const std::vector<std::int64_t>& touched, const BuiltinStore& b) {
  std::size_t merges = 0;
  for (std::int64_t v : touched) {
    auto w = watch_.find(v);
    if (w == watch_.end()) continue;
    std::vector<std::size_t> idxs = std::move(w->second);
    watch_.erase(w);
    for (std::size_t idx : idxs) {
      Rec& r = recs_[idx];
      if (!r.alive) continue;
      std::string k = key_string(r.tag, r.key, b);
      if (k == r.current) continue;
      auto old = by_key_.find(r.current);
      if (old != by_key_.end() && old->second == idx) by_key_.erase(old);
      r.current = k;
      auto hit = by_key_.find(k);
      if (hit == by_key_.end()) {
        by_key_[k] = idx;
        watch(idx, b);
        continue;
      }
      Rec& other = recs_[hit->second];
      other.sched = sched_.merge_schedules(other.sched, r.sched);
      r.alive = false;
      ++merges;
    }
  }
  return merges;
}

}  // namespace chr
