#pragma once

// Progressiveness, invisible reads and per-read step complexity, all computed
// from the recorded history alone.

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hytm/check/transactions.hpp"

namespace hytm {

enum class ProgressScope : std::uint8_t { all_txns, slow_path_readers };

struct ProgressViolation {
  TxnId txn = 0;
  std::size_t abort_at = 0;
  std::string reason;
};

namespace detail {

/// First invocation position of an access to `obj` by `t` (any kind, or writes only).
inline std::optional<std::size_t> first_access(const TxnRecord& t, std::uint32_t obj, bool writes_only) {
  for (const auto& op : t.ops) {
    if (op.obj != obj) continue;
    if (writes_only && op.kind != TOp::Kind::write) continue;
    return op.inv;
  }
  return std::nullopt;
}

/// Earliest point at which `a` and `b` both had issued conflicting accesses to `obj`.
inline std::optional<std::size_t> conflict_point(const TxnRecord& a, const TxnRecord& b,
                                                 std::uint32_t obj) {
  std::optional<std::size_t> best;
  auto consider = [&](std::optional<std::size_t> x, std::optional<std::size_t> y) {
    if (!x || !y) return;
    const auto p = std::max(*x, *y);
    if (!best || p < *best) best = p;
  };
  consider(first_access(a, obj, true), first_access(b, obj, false));
  consider(first_access(a, obj, false), first_access(b, obj, true));
  return best;
}

}  // namespace detail

/// Every in-scope abort must be explained by a conflict with a transaction that was
/// still t-incomplete when the conflict arose, before the abort.
inline std::optional<ProgressViolation> check_progressiveness(const History& h, ProgressScope scope) {
  const auto txns = extract_transactions(h);
  for (const auto& t : txns) {
    if (t.status != TxnStatus::aborted) continue;
    if (scope == ProgressScope::slow_path_readers && (t.path != Path::slow || t.invoked_write())) {
      continue;
    }
    const std::size_t a = *t.end;
    bool justified = false;
    std::set<std::uint32_t> objs;
    for (const auto& op : t.ops) objs.insert(op.obj);
    for (const auto& other : txns) {
      if (other.id == t.id || justified) continue;
      for (auto obj : objs) {
        auto p = detail::conflict_point(t, other, obj);
        if (!p || *p >= a) continue;
        if (!other.end || *other.end > *p) {
          justified = true;
          break;
        }
      }
    }
    if (!justified) {
      return ProgressViolation{t.id, a,
                               "T" + std::to_string(t.id) + " aborted at event " + std::to_string(a) +
                                   " with no concurrent conflicting transaction"};
    }
  }
  return std::nullopt;
}

struct InvisibleReadViolation {
  TxnId txn = 0;
  std::size_t event = 0;
};

/// Slow-path read operations may apply only trivial primitives.
inline std::optional<InvisibleReadViolation> check_invisible_reads(const History& h) {
  for (const auto& t : extract_transactions(h)) {
    if (t.path != Path::slow) continue;
    for (const auto& op : t.ops) {
      if (op.kind != TOp::Kind::read) continue;
      for (auto pos : op.primitives) {
        if (h[pos].trivial == false) return InvisibleReadViolation{t.id, pos};
      }
    }
  }
  return std::nullopt;
}

struct ReadFootprint {
  TxnId txn = 0;
  std::size_t index = 0;  // 1-based position among the transaction's t-reads
  std::uint32_t obj = 0;
  std::size_t distinct = 0;
  bool complete = false;
  Word value = 0;
};

/// Distinct base objects accessed by each t-read, invocation to response.
inline std::vector<ReadFootprint> read_step_complexity(const History& h) {
  std::vector<ReadFootprint> out;
  for (const auto& t : extract_transactions(h)) {
    std::size_t k = 0;
    for (const auto& op : t.ops) {
      if (op.kind != TOp::Kind::read) continue;
      std::set<std::uint32_t> bases;
      for (auto pos : op.primitives) {
        if (h[pos].base) bases.insert(*h[pos].base);
      }
      out.push_back({t.id, ++k, op.obj, bases.size(), op.complete, op.value});
    }
  }
  return out;
}

}  // namespace hytm
