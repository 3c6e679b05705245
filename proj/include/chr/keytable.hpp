#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "chr/scheduler.hpp"
#include "chr/store.hpp"
#include "chr/term.hpp"

namespace chr {

// Non-ground hashing of schedule keys. A key is a tag (rule and prefix
// length) plus the shared argument terms; variables are written by their
// class root, so keys follow the built-in store. After a tell, rehash()
// re-files every key that mentions a touched root and merges the schedules
// of keys that became equal.
class KeyTable {
 public:
  explicit KeyTable(Scheduler& s) : sched_(s) {}

  ScheduleId get(const std::string& tag, const std::vector<Term>& key, const BuiltinStore& b);
  // Returns the number of schedule merges performed.
  std::size_t rehash(const std::vector<std::int64_t>& touched, const BuiltinStore& b);

  static std::string key_string(const std::string& tag, const std::vector<Term>& key,
                                const BuiltinStore& b);
  std::size_t size() const { return by_key_.size(); }
  // Largest number of keys watching one variable so far.
  std::size_t max_keys_per_var() const { return max_watch_; }

 private:
  struct Rec {
    std::string tag;
    std::vector<Term> key;
    std::string current;
    ScheduleId sched;
    bool alive;
  };
  void watch(std::size_t idx, const BuiltinStore& b);

  Scheduler& sched_;
  std::vector<Rec> recs_;
  std::unordered_map<std::string, std::size_t> by_key_;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> watch_;
  std::size_t max_watch_ = 0;
};

}  // namespace chr
