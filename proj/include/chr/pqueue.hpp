#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace chr {

// Fibonacci heap with one node per distinct priority; the entries sharing a
// priority form a FIFO list on that node. Entry handles stay valid until the
// entry is erased or popped, including across merge().
template <class T>
class FibHeap {
  struct Node;

 public:
  struct Entry {
    std::int64_t prio;
    T value;
    Entry* prev = nullptr;
    Entry* next = nullptr;
    Node* node = nullptr;
  };
  using Handle = Entry*;

  FibHeap() = default;
  FibHeap(const FibHeap&) = delete;
  FibHeap& operator=(const FibHeap&) = delete;
  FibHeap(FibHeap&& o) noexcept { steal(o); }
  FibHeap& operator=(FibHeap&& o) noexcept {
    if (this != &o) {
      clear();
      steal(o);
    }
    return *this;
  }
  ~FibHeap() { clear(); }

  bool empty() const { return size_ == 0; }
  std::size_t size() const { return size_; }
  std::size_t node_count() const { return by_prio_.size(); }

  Handle insert(std::int64_t prio, T value) {
    Entry* e = new Entry{prio, std::move(value)};
    attach(e);
    return e;
  }

  Handle top() const { return min_ ? min_->head : nullptr; }
  std::int64_t min_priority() const { return min_->prio; }

  T pop() {
    Entry* e = top();
    if (!e) throw std::logic_error("pop on empty heap");
    T v = std::move(e->value);
    erase(e);
    return v;
  }

  void erase(Handle e) {
    Node* n = detach(e);
    delete e;
    if (n->count == 0) remove_node(n);
  }

  // Moves every entry of `other` into this heap, keeping per-priority FIFO
  // order of each side (this side's entries first). O(|other|).
  void merge(FibHeap& other) {
    if (&other == this) return;
    std::vector<Node*> nodes;
    other.collect(nodes);
    for (Node* n : nodes) {
      for (Entry* e = n->head; e;) {
        Entry* nx = e->next;
        attach(e);
        e = nx;
      }
      delete n;
    }
    other.min_ = nullptr;
    other.size_ = 0;
    other.by_prio_.clear();
  }

  template <class F>
  void for_each(F f) const {
    std::vector<Node*> nodes;
    collect(nodes);
    for (Node* n : nodes) {
      for (Entry* e = n->head; e; e = e->next) f(e);
    }
  }

  // Heap order, parent links, degree counts, one node per priority, sizes.
  bool check_invariants() const {
    std::vector<Node*> nodes;
    collect(nodes);
    if (nodes.size() != by_prio_.size()) return false;
    std::size_t total = 0;
    for (Node* n : nodes) {
      auto it = by_prio_.find(n->prio);
      if (it == by_prio_.end() || it->second != n || n->count == 0) return false;
      std::size_t c = 0;
      for (Entry* e = n->head; e; e = e->next) {
        if (e->node != n || e->prio != n->prio) return false;
        if (e->next && e->next->prev != e) return false;
        ++c;
      }
      if (c != n->count) return false;
      total += c;
      int deg = 0;
      if (n->child) {
        Node* ch = n->child;
        do {
          if (ch->parent != n || ch->prio <= n->prio) return false;
          ++deg;
          ch = ch->right;
        } while (ch != n->child);
      }
      if (deg != n->degree) return false;
      if (!n->parent && min_ && n->prio < min_->prio) return false;
    }
    return total == size_ && (size_ == 0) == (min_ == nullptr);
  }

 private:
  struct Node {
    std::int64_t prio;
    Node* parent = nullptr;
    Node* child = nullptr;
    Node* left = this;
    Node* right = this;
    int degree = 0;
    bool mark = false;
    Entry* head = nullptr;
    Entry* tail = nullptr;
    std::size_t count = 0;
    explicit Node(std::int64_t p) : prio(p) {}
  };

  void steal(FibHeap& o) {
    min_ = o.min_;
    size_ = o.size_;
    by_prio_ = std::move(o.by_prio_);
    o.min_ = nullptr;
    o.size_ = 0;
    o.by_prio_.clear();
  }

  void clear() {
    std::vector<Node*> nodes;
    collect(nodes);
    for (Node* n : nodes) {
      for (Entry* e = n->head; e;) {
        Entry* nx = e->next;
        delete e;
        e = nx;
      }
      delete n;
    }
    min_ = nullptr;
    size_ = 0;
    by_prio_.clear();
  }

  void collect(std::vector<Node*>& out) const {
    if (!min_) return;
    std::vector<Node*> stack;
    Node* r = min_;
    do {
      stack.push_back(r);
      r = r->right;
    } while (r != min_);
    while (!stack.empty()) {
      Node* n = stack.back();
      stack.pop_back();
      out.push_back(n);
      if (n->child) {
        Node* c = n->child;
        do {
          stack.push_back(c);
          c = c->right;
        } while (c != n->child);
      }
    }
  }

  void attach(Entry* e) {
    Node*& slot = by_prio_[e->prio];
    if (!slot) {
      slot = new Node(e->prio);
      add_root(slot);
      if (!min_ || slot->prio < min_->prio) min_ = slot;
    }
    Node* n = slot;
    e->node = n;
    e->next = nullptr;
    e->prev = n->tail;
    if (n->tail) {
      n->tail->next = e;
    } else {
      n->head = e;
    }
    n->tail = e;
    ++n->count;
    ++size_;
  }

  Node* detach(Entry* e) {
    Node* n = e->node;
    if (e->prev) {
      e->prev->next = e->next;
    } else {
      n->head = e->next;
    }
    if (e->next) {
      e->next->prev = e->prev;
    } else {
      n->tail = e->prev;
    }
    --n->count;
    --size_;
    return n;
  }

  void add_root(Node* n) {
    n->parent = nullptr;
    n->mark = false;
    if (!min_) {
      n->left = n->right = n;
      min_ = n;
      return;
    }
    n->right = min_->right;
    n->left = min_;
    min_->right->left = n;
    min_->right = n;
  }

  static void unlink(Node* n) {
    n->left->right = n->right;
    n->right->left = n->left;
    n->left = n->right = n;
  }

  void cut(Node* x, Node* y) {
    if (x->right == x) {
      y->child = nullptr;
    } else {
      if (y->child == x) y->child = x->right;
      unlink(x);
    }
    --y->degree;
    add_root(x);
  }

  void cascading_cut(Node* y) {
    while (Node* z = y->parent) {
      if (!y->mark) {
        y->mark = true;
        return;
      }
      cut(y, z);
      y = z;
    }
  }

  void remove_node(Node* n) {
    by_prio_.erase(n->prio);
    if (Node* p = n->parent) {
      cut(n, p);
      cascading_cut(p);
    }
    // n is a root now; promote its children.
    if (Node* c = n->child) {
      std::vector<Node*> kids;
      Node* k = c;
      do {
        kids.push_back(k);
        k = k->right;
      } while (k != c);
      for (Node* ch : kids) {
        unlink(ch);
        ch->parent = nullptr;
        ch->mark = false;
        ch->right = n->right;
        ch->left = n;
        n->right->left = ch;
        n->right = ch;
      }
      n->child = nullptr;
    }
    Node* any = n->right == n ? nullptr : n->right;
    unlink(n);
    delete n;
    min_ = any;
    if (min_) consolidate();
  }

  void consolidate() {
    std::vector<Node*> roots;
    Node* r = min_;
    do {
      roots.push_back(r);
      r = r->right;
    } while (r != min_);
    std::vector<Node*> by_degree;
    for (Node* x : roots) {
      unlink(x);
      while (true) {
        auto d = static_cast<std::size_t>(x->degree);
        if (d >= by_degree.size()) by_degree.resize(d + 1, nullptr);
        Node* y = by_degree[d];
        if (!y) break;
        by_degree[d] = nullptr;
        if (y->prio < x->prio) std::swap(x, y);
        // y becomes a child of x
        y->parent = x;
        y->mark = false;
        if (!x->child) {
          x->child = y;
          y->left = y->right = y;
        } else {
          y->right = x->child->right;
          y->left = x->child;
          x->child->right->left = y;
          x->child->right = y;
        }
        ++x->degree;
      }
      by_degree[static_cast<std::size_t>(x->degree)] = x;
    }
    min_ = nullptr;
    for (Node* x : by_degree) {
      if (!x) continue;
      if (!min_) {
        x->left = x->right = x;
        min_ = x;
      } else {
        x->right = min_->right;
        x->left = min_;
        min_->right->left = x;
        min_->right = x;
        if (x->prio < min_->prio) min_ = x;
      }
    }
  }

  Node* min_ = nullptr;
  std::size_t size_ = 0;
  std::unordered_map<std::int64_t, Node*> by_prio_;
};

// FIFO buckets over a fixed priority range; top() scans occupied buckets
// upward from a cached lower bound.
template <class T>
class BucketQueue {
 public:
  struct Entry {
    std::int64_t prio;
    T value;
    Entry* prev = nullptr;
    Entry* next = nullptr;
  };
  using Handle = Entry*;

  BucketQueue(std::int64_t lo, std::int64_t hi)
      : lo_(lo), buckets_(static_cast<std::size_t>(hi - lo + 1)), low_(buckets_.size()) {
    if (hi < lo) throw std::invalid_argument("empty bucket range");
  }
  BucketQueue(const BucketQueue&) = delete;
  BucketQueue& operator=(const BucketQueue&) = delete;
  ~BucketQueue() {
    for (auto& b : buckets_) {
      for (Entry* e = b.first; e;) {
        Entry* nx = e->next;
        delete e;
        e = nx;
      }
    }
  }

  bool in_range(std::int64_t p) const {
    return p >= lo_ && p < lo_ + static_cast<std::int64_t>(buckets_.size());
  }
  bool empty() const { return size_ == 0; }
  std::size_t size() const { return size_; }

  Handle insert(std::int64_t prio, T value) {
    if (!in_range(prio)) throw std::out_of_range("static priority outside bucket range");
    auto i = static_cast<std::size_t>(prio - lo_);
    Entry* e = new Entry{prio, std::move(value)};
    auto& b = buckets_[i];
    e->prev = b.second;
    if (b.second) {
      b.second->next = e;
    } else {
      b.first = e;
    }
    b.second = e;
    ++size_;
    if (i < low_) low_ = i;
    return e;
  }

  void erase(Handle e) {
    auto& b = buckets_[static_cast<std::size_t>(e->prio - lo_)];
    if (e->prev) {
      e->prev->next = e->next;
    } else {
      b.first = e->next;
    }
    if (e->next) {
      e->next->prev = e->prev;
    } else {
      b.second = e->prev;
    }
    delete e;
    --size_;
  }

  Handle top() const {
    if (size_ == 0) return nullptr;
    while (!buckets_[low_].first) ++low_;
    return buckets_[low_].first;
  }

 private:
  std::int64_t lo_;
  std::vector<std::pair<Entry*, Entry*>> buckets_;
  mutable std::size_t low_;
  std::size_t size_ = 0;
};

}  // namespace chr
