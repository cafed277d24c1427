#pragma once

// Brute-force opacity: search completions and real-time-respecting orders for a
// legal sequential history.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hytm/check/transactions.hpp"

namespace hytm {

struct OpacityLimits {
  std::size_t max_transactions = 8;
  std::size_t max_ops_per_transaction = 64;
};

enum class Verdict : std::uint8_t { opaque, not_opaque, undecided };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::opaque: return "opaque";
    case Verdict::not_opaque: return "not-opaque";
    case Verdict::undecided: return "undecided";
  }
  return "?";
}

/// A transaction as it appears in a sequential witness.
struct SerialTxn {
  TxnId id = 0;
  bool committed = false;
  std::vector<TOp> ops;  // complete operations only, program order
};

struct OpacityResult {
  Verdict verdict = Verdict::opaque;
  std::vector<TxnId> witness;     // serialization order when opaque
  std::vector<TxnId> committed;   // transactions completed as committed in the witness
  std::string reason;
};

/// Replays `txn` against `store`; false when a read is not legal. Committed writes are applied.
inline bool legal_step(const SerialTxn& txn, std::map<std::uint32_t, Word>& store,
                       std::string* why = nullptr) {
  std::map<std::uint32_t, Word> local;
  for (const auto& op : txn.ops) {
    if (op.kind == TOp::Kind::write) {
      local[op.obj] = op.value;
      continue;
    }
    Word expect = 0;
    if (auto it = local.find(op.obj); it != local.end()) {
      expect = it->second;
    } else if (auto jt = store.find(op.obj); jt != store.end()) {
      expect = jt->second;
    }
    if (op.value != expect) {
      if (why) {
        *why = "T" + std::to_string(txn.id) + " read X" + std::to_string(op.obj) + " -> " +
               std::to_string(op.value) + ", legal value " + std::to_string(expect);
      }
      return false;
    }
  }
  if (txn.committed) {
    for (auto [obj, v] : local) store[obj] = v;
  }
  return true;
}

/// Checks a fixed sequence for legality; returns an explanation on failure.
inline std::optional<std::string> check_legal_sequence(const std::vector<SerialTxn>& order) {
  std::map<std::uint32_t, Word> store;
  std::string why;
  for (const auto& t : order) {
    if (!legal_step(t, store, &why)) return why;
  }
  return std::nullopt;
}

/// Real-time order: a precedes b when a is t-complete before b's first event.
inline bool precedes(const TxnRecord& a, const TxnRecord& b) { return a.end && *a.end < b.first; }

namespace detail {

struct OpacitySearch {
  const std::vector<TxnRecord>& txns;
  std::vector<SerialTxn> serial;
  std::vector<std::uint32_t> preds;  // bitmask of real-time predecessors
  std::vector<int> order;
  std::uint32_t placed = 0;

  bool dfs(std::map<std::uint32_t, Word>& store) {
    if (order.size() == serial.size()) return true;
    for (std::size_t i = 0; i < serial.size(); ++i) {
      const std::uint32_t bit = 1u << i;
      if (placed & bit) continue;
      if ((preds[i] & placed) != preds[i]) continue;
      auto next = store;
      if (!legal_step(serial[i], next, nullptr)) continue;
      placed |= bit;
      order.push_back(static_cast<int>(i));
      if (dfs(next)) return true;
      order.pop_back();
      placed &= ~bit;
    }
    return false;
  }
};

}  // namespace detail

inline OpacityResult check_opacity(const History& h, const OpacityLimits& limits = {}) {
  OpacityResult r;
  const auto txns = extract_transactions(h);
  if (txns.size() > limits.max_transactions || txns.size() > 31) {
    r.verdict = Verdict::undecided;
    r.reason = "undecided: over budget (" + std::to_string(txns.size()) + " transactions)";
    return r;
  }
  for (const auto& t : txns) {
    if (t.op_count() > limits.max_ops_per_transaction) {
      r.verdict = Verdict::undecided;
      r.reason = "undecided: over budget (T" + std::to_string(t.id) + " has " +
                 std::to_string(t.op_count()) + " operations)";
      return r;
    }
  }

  detail::OpacitySearch s{txns, {}, {}, {}, 0};
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < txns.size(); ++i) {
    SerialTxn st;
    st.id = txns[i].id;
    st.committed = txns[i].status == TxnStatus::committed;
    for (const auto& op : txns[i].ops) {
      if (op.complete) st.ops.push_back(op);
    }
    s.serial.push_back(std::move(st));
    if (txns[i].status == TxnStatus::commit_pending) pending.push_back(i);
    std::uint32_t mask = 0;
    for (std::size_t j = 0; j < txns.size(); ++j) {
      if (j != i && precedes(txns[j], txns[i])) mask |= 1u << j;
    }
    s.preds.push_back(mask);
  }

  // Each commit-pending transaction may complete either way.
  const std::size_t combos = std::size_t{1} << pending.size();
  for (std::size_t c = 0; c < combos; ++c) {
    for (std::size_t k = 0; k < pending.size(); ++k) s.serial[pending[k]].committed = (c >> k) & 1;
    s.order.clear();
    s.placed = 0;
    std::map<std::uint32_t, Word> store;
    if (s.dfs(store)) {
      for (int i : s.order) {
        r.witness.push_back(s.serial[i].id);
        if (s.serial[i].committed) r.committed.push_back(s.serial[i].id);
      }
      return r;
    }
  }
  r.verdict = Verdict::not_opaque;
  r.reason = "no legal serialization respects real-time order";
  return r;
}

}  // namespace hytm
