#pragma once

// Unbalanced internal BST laid out over t-objects, one t-object per node field.
// Node ids start at 1; 0 is the null pointer.

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hytm/tm.hpp"

namespace hytm::bench {

struct BstLayout {
  std::size_t capacity = 0;

  static TObj root() { return TObj{0}; }
  static TObj key(Word n) { return field(n, 0); }
  static TObj value(Word n) { return field(n, 1); }
  static TObj left(Word n) { return field(n, 2); }
  static TObj right(Word n) { return field(n, 3); }
  std::size_t tobjects() const { return 1 + 4 * capacity; }

 private:
  static TObj field(Word n, std::uint32_t f) { return TObj{static_cast<std::uint32_t>(1 + 4 * (n - 1) + f)}; }
};

/// Free node ids. Not synchronized; callers hold the emulator gate.
class NodePool {
 public:
  explicit NodePool(std::size_t capacity) {
    free_.reserve(capacity);
    for (std::size_t n = capacity; n >= 1; --n) free_.push_back(n);
  }
  Word take() {
    if (free_.empty()) throw std::runtime_error("node pool exhausted");
    const Word n = free_.back();
    free_.pop_back();
    return n;
  }
  void give(Word n) { free_.push_back(n); }
  std::size_t available() const { return free_.size(); }

 private:
  std::vector<Word> free_;
};

enum class OpKind : std::uint8_t { search, insert, erase, range_increment };

inline std::string_view to_string(OpKind k) {
  switch (k) {
    case OpKind::search: return "search";
    case OpKind::insert: return "insert";
    case OpKind::erase: return "delete";
    case OpKind::range_increment: return "range-increment";
  }
  return "?";
}

struct BstOp {
  OpKind kind = OpKind::search;
  Word key = 0;    // low bound for range-increment
  Word value = 0;  // insert payload
  Word hi = 0;     // range-increment only
};

struct BstResult {
  bool found = false;  // search/delete: key present; insert: key already present
  Word value = 0;      // search only
  Word count = 0;      // range-increment: keys incremented
  Word removed = 0;    // delete: node unlinked from the tree

  bool same_outcome(const BstResult& o) const {
    return found == o.found && value == o.value && count == o.count;
  }
};

namespace detail {

inline void guard_depth(std::size_t& steps, std::size_t capacity) {
  if (++steps > capacity + 1) throw std::logic_error("BST traversal longer than the node count");
}

inline Task<Word> bst_search(Tx& tx, Word k, std::size_t capacity, BstResult* out) {
  *out = {};
  std::size_t depth = 0;
  Word cur = co_await tx.read(BstLayout::root());
  while (cur != 0) {
    guard_depth(depth, capacity);
    const Word key = co_await tx.read(BstLayout::key(cur));
    if (key == k) {
      out->found = true;
      out->value = co_await tx.read(BstLayout::value(cur));
      co_return 1;
    }
    if (k < key) {
      cur = co_await tx.read(BstLayout::left(cur));
    } else {
      cur = co_await tx.read(BstLayout::right(cur));
    }
  }
  co_return 0;
}

/// `reserved` survives retries so an aborted attempt never leaks a node.
inline Task<Word> bst_insert(Tx& tx, Word k, Word v, std::size_t capacity, NodePool* pool, Word* reserved,
                             BstResult* out) {
  *out = {};
  std::size_t depth = 0;
  TObj link = BstLayout::root();
  Word cur = co_await tx.read(link);
  while (cur != 0) {
    guard_depth(depth, capacity);
    const Word key = co_await tx.read(BstLayout::key(cur));
    if (key == k) {
      out->found = true;
      co_return 0;
    }
    link = k < key ? BstLayout::left(cur) : BstLayout::right(cur);
    cur = co_await tx.read(link);
  }
  if (*reserved == 0) *reserved = pool->take();
  const Word n = *reserved;
  co_await tx.write(BstLayout::key(n), k);
  co_await tx.write(BstLayout::value(n), v);
  co_await tx.write(BstLayout::left(n), 0);
  co_await tx.write(BstLayout::right(n), 0);
  co_await tx.write(link, n);
  co_return 1;
}

/// Two-child nodes take their in-order successor's key and value; the successor is unlinked.
inline Task<Word> bst_erase(Tx& tx, Word k, std::size_t capacity, BstResult* out) {
  *out = {};
  std::size_t depth = 0;
  TObj link = BstLayout::root();
  Word cur = co_await tx.read(link);
  while (cur != 0) {
    guard_depth(depth, capacity);
    const Word key = co_await tx.read(BstLayout::key(cur));
    if (key == k) break;
    link = k < key ? BstLayout::left(cur) : BstLayout::right(cur);
    cur = co_await tx.read(link);
  }
  if (cur == 0) co_return 0;
  out->found = true;
  const Word l = co_await tx.read(BstLayout::left(cur));
  const Word r = co_await tx.read(BstLayout::right(cur));
  if (l == 0 || r == 0) {
    co_await tx.write(link, l != 0 ? l : r);
    out->removed = cur;
    co_return 1;
  }
  TObj slink = BstLayout::right(cur);
  Word s = r;
  while (true) {
    guard_depth(depth, capacity);
    const Word sl = co_await tx.read(BstLayout::left(s));
    if (sl == 0) break;
    slink = BstLayout::left(s);
    s = sl;
  }
  const Word skey = co_await tx.read(BstLayout::key(s));
  const Word sval = co_await tx.read(BstLayout::value(s));
  const Word sright = co_await tx.read(BstLayout::right(s));
  co_await tx.write(BstLayout::key(cur), skey);
  co_await tx.write(BstLayout::value(cur), sval);
  co_await tx.write(slink, sright);
  out->removed = s;
  co_return 1;
}

/// Pruned traversal of [lo, hi] first, then one read-modify-write per hit.
inline Task<Word> bst_range_increment(Tx& tx, Word lo, Word hi, std::size_t capacity, BstResult* out) {
  *out = {};
  std::vector<Word> pending{co_await tx.read(BstLayout::root())};
  std::vector<Word> hits;
  std::size_t visited = 0;
  while (!pending.empty()) {
    const Word n = pending.back();
    pending.pop_back();
    if (n == 0) continue;
    guard_depth(visited, capacity);
    const Word key = co_await tx.read(BstLayout::key(n));
    if (lo < key) pending.push_back(co_await tx.read(BstLayout::left(n)));
    if (key < hi) pending.push_back(co_await tx.read(BstLayout::right(n)));
    if (lo <= key && key <= hi) hits.push_back(n);
  }
  for (Word n : hits) {
    const Word v = co_await tx.read(BstLayout::value(n));
    co_await tx.write(BstLayout::value(n), v + 1);
  }
  out->count = hits.size();
  co_return hits.size();
}

}  // namespace detail

/// Per-operation state shared by every attempt of one dictionary operation.
struct BstCall {
  BstOp op;
  BstResult result;
  Word reserved = 0;
};

/// Builds the transactional program for `call`. `call` and `pool` must outlive it.
inline Program bst_program(BstCall& call, NodePool& pool, std::size_t capacity) {
  BstCall* c = &call;
  NodePool* p = &pool;
  return [c, p, capacity](Tx& tx) -> Task<Word> {
    switch (c->op.kind) {
      case OpKind::search: return detail::bst_search(tx, c->op.key, capacity, &c->result);
      case OpKind::insert:
        return detail::bst_insert(tx, c->op.key, c->op.value, capacity, p, &c->reserved, &c->result);
      case OpKind::erase: return detail::bst_erase(tx, c->op.key, capacity, &c->result);
      case OpKind::range_increment:
        return detail::bst_range_increment(tx, c->op.key, c->op.hi, capacity, &c->result);
    }
    throw std::logic_error("unknown BST operation");
  };
}

/// Returns nodes to the pool once the operation has committed.
inline void bst_settle(BstCall& call, NodePool& pool) {
  if (call.op.kind == OpKind::insert && call.reserved != 0 && call.result.found) pool.give(call.reserved);
  if (call.op.kind == OpKind::erase && call.result.removed != 0) pool.give(call.result.removed);
  call.reserved = 0;
}

/// The sequential dictionary the tree must agree with.
class BstOracle {
 public:
  BstResult apply(const BstOp& op) {
    BstResult r;
    switch (op.kind) {
      case OpKind::search:
        if (auto it = map_.find(op.key); it != map_.end()) {
          r.found = true;
          r.value = it->second;
        }
        break;
      case OpKind::insert:
        r.found = !map_.emplace(op.key, op.value).second;
        break;
      case OpKind::erase:
        r.found = map_.erase(op.key) > 0;
        break;
      case OpKind::range_increment:
        for (auto it = map_.lower_bound(op.key); it != map_.end() && it->first <= op.hi; ++it) {
          ++it->second;
          ++r.count;
        }
        break;
    }
    return r;
  }
  const std::map<Word, Word>& contents() const { return map_; }

 private:
  std::map<Word, Word> map_;
};

/// Reads the committed tree straight from memory; throws if the ordering invariant is broken.
template <class Peek>
std::map<Word, Word> bst_snapshot(Peek&& peek, std::size_t capacity) {
  std::map<Word, Word> out;
  struct Frame {
    Word node;
    std::optional<Word> lo, hi;  // exclusive bounds
  };
  std::vector<Frame> stack{{peek(BstLayout::root()), std::nullopt, std::nullopt}};
  std::size_t seen = 0;
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.node == 0) continue;
    if (f.node > capacity || ++seen > capacity) throw std::logic_error("BST node out of range or cyclic");
    const Word k = peek(BstLayout::key(f.node));
    if ((f.lo && k <= *f.lo) || (f.hi && k >= *f.hi)) throw std::logic_error("BST ordering invariant broken");
    out.emplace(k, peek(BstLayout::value(f.node)));
    stack.push_back({peek(BstLayout::left(f.node)), f.lo, k});
    stack.push_back({peek(BstLayout::right(f.node)), k, f.hi});
  }
  return out;
}

}  // namespace hytm::bench
