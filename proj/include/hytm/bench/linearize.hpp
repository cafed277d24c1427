#pragma once

// Linearizability of a recorded dictionary run against the sequential map.
//
// Every operation takes effect somewhere in [start, end], so the log is checked
// one key at a time: a range increment is an increment-if-present on each key
// it covers. Per key, a Wing-Gong search with memoization looks for an order
// that respects real time and reproduces every found/value result. Range
// counts span keys and are not checked here.

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hytm/bench/workload.hpp"

namespace hytm::bench {

namespace detail {

using KeyState = std::optional<Word>;

/// Applies `op` to one key. Returns false if the recorded result disagrees.
inline bool apply_on_key(const OpRecord& r, KeyState& s) {
  switch (r.op.kind) {
    case OpKind::search:
      if (r.result.found != s.has_value()) return false;
      return !s || r.result.value == *s;
    case OpKind::insert:
      if (r.result.found != s.has_value()) return false;
      if (!s) s = r.op.value;
      return true;
    case OpKind::erase:
      if (r.result.found != s.has_value()) return false;
      s.reset();
      return true;
    case OpKind::range_increment:
      if (s) ++*s;
      return true;
  }
  return false;
}

inline bool linearize_key(const std::vector<const OpRecord*>& ops, KeyState init, std::size_t budget,
                          bool& exhausted) {
  const std::size_t n = ops.size();
  std::vector<bool> done(n, false);
  std::set<std::pair<std::vector<bool>, KeyState>> seen;
  std::size_t visits = 0;

  auto rec = [&](auto&& self, std::size_t left, KeyState s) -> bool {
    if (left == 0) return true;
    if (!seen.insert({done, s}).second) return false;
    if (++visits > budget) {
      exhausted = true;
      return false;
    }
    std::uint64_t horizon = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t i = 0; i < n; ++i) {
      if (!done[i]) horizon = std::min(horizon, ops[i]->end);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || ops[i]->start > horizon) continue;
      KeyState next = s;
      if (!apply_on_key(*ops[i], next)) continue;
      done[i] = true;
      if (self(self, left - 1, next)) return true;
      done[i] = false;
      if (exhausted) return false;
    }
    return false;
  };
  return rec(rec, n, init);
}

}  // namespace detail

struct LinearizeResult {
  bool ok = true;
  bool undecided = false;
  std::size_t keys_checked = 0;
  std::string reason;
};

/// `log` must hold every operation since `initial` was the dictionary content.
inline LinearizeResult check_dictionary_log(const std::vector<OpRecord>& log, const std::map<Word, Word>& initial,
                                            std::size_t budget_per_key = 200'000) {
  LinearizeResult res;
  std::map<Word, std::vector<const OpRecord*>> by_key;
  std::vector<const OpRecord*> ranges;
  for (const auto& r : log) {
    if (r.end < r.start) {
      res.ok = false;
      res.reason = "operation ends before it starts";
      return res;
    }
    if (r.op.kind == OpKind::range_increment) {
      ranges.push_back(&r);
    } else {
      by_key[r.op.key].push_back(&r);
    }
  }
  for (const auto* r : ranges) {
    for (auto it = by_key.lower_bound(r->op.key); it != by_key.end() && it->first <= r->op.hi; ++it) {
      it->second.push_back(r);
    }
  }
  for (auto& [key, ops] : by_key) {
    std::sort(ops.begin(), ops.end(), [](const OpRecord* a, const OpRecord* b) { return a->start < b->start; });
    detail::KeyState init;
    if (auto it = initial.find(key); it != initial.end()) init = it->second;
    bool exhausted = false;
    ++res.keys_checked;
    if (!detail::linearize_key(ops, init, budget_per_key, exhausted)) {
      res.ok = false;
      res.undecided = exhausted;
      res.reason = (exhausted ? "search budget exhausted on key " : "no linearization for key ") +
                   std::to_string(key) + " (" + std::to_string(ops.size()) + " operations)";
      return res;
    }
  }
  return res;
}

/// Replays a log whose operations do not overlap in time; exact for sequential runs.
inline std::optional<std::string> replay_sequential(const std::vector<OpRecord>& log) {
  BstOracle oracle;
  std::vector<const OpRecord*> order;
  for (const auto& r : log) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(), [](const OpRecord* a, const OpRecord* b) { return a->end < b->end; });
  for (std::size_t i = 0; i < order.size(); ++i) {
    const OpRecord& r = *order[i];
    if (i > 0 && r.start < order[i - 1]->end) return "operations overlap; log is not sequential";
    const BstResult want = oracle.apply(r.op);
    if (!want.same_outcome(r.result)) {
      return "operation " + std::to_string(i) + " (" + std::string(to_string(r.op.kind)) + " " +
             std::to_string(r.op.key) + ") disagrees with the reference map";
    }
  }
  return std::nullopt;
}

}  // namespace hytm::bench
