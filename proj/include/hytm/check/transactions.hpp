#pragma once

// Per-transaction view of a history.

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "hytm/history.hpp"

namespace hytm {

enum class TxnStatus : std::uint8_t { live, commit_pending, committed, aborted };

struct TOp {
  enum class Kind : std::uint8_t { read, write } kind = Kind::read;
  std::uint32_t obj = 0;
  Word value = 0;          // value written, or value returned by a complete read
  bool complete = false;
  std::size_t inv = 0;     // history positions
  std::size_t res = 0;
  std::vector<std::size_t> primitives;  // primitive events between invocation and response
};

struct TxnRecord {
  TxnId id = 0;
  Pid pid = 0;
  Path path = Path::slow;
  TxnStatus status = TxnStatus::live;
  std::size_t first = 0;
  std::size_t last = 0;
  std::optional<std::size_t> end;        // terminal response position
  std::optional<std::size_t> tryc;       // tryC invocation position
  std::vector<TOp> ops;
  std::vector<std::size_t> tryc_primitives;
  std::vector<std::size_t> events;

  bool t_complete() const { return end.has_value(); }
  bool invoked_write() const {
    for (const auto& o : ops) {
      if (o.kind == TOp::Kind::write) return true;
    }
    return false;
  }
  std::size_t op_count() const { return ops.size(); }
};

/// Groups events by transaction in order of first appearance; events outside any
/// transaction (txn 0) are skipped.
inline std::vector<TxnRecord> extract_transactions(const History& h) {
  std::vector<TxnRecord> out;
  std::map<TxnId, std::size_t> index;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Event& e = h[i];
    if (e.txn == 0) continue;
    auto [it, fresh] = index.try_emplace(e.txn, out.size());
    if (fresh) {
      TxnRecord t;
      t.id = e.txn;
      t.pid = e.pid;
      t.first = i;
      out.push_back(std::move(t));
    }
    TxnRecord& t = out[it->second];
    t.last = i;
    t.events.push_back(i);
    auto open_op = [&]() -> TOp* {
      if (t.ops.empty() || t.ops.back().complete) return nullptr;
      return &t.ops.back();
    };
    switch (e.kind) {
      case EventKind::begin:
        if (e.path) t.path = *e.path;
        break;
      case EventKind::inv_read:
      case EventKind::inv_write: {
        TOp op;
        op.kind = e.kind == EventKind::inv_read ? TOp::Kind::read : TOp::Kind::write;
        op.obj = e.base.value_or(0);
        op.value = e.kind == EventKind::inv_write ? e.value : 0;
        op.inv = i;
        t.ops.push_back(op);
        break;
      }
      case EventKind::res_read:
        if (auto* op = open_op()) {
          op->complete = true;
          op->value = e.value;
          op->res = i;
        }
        break;
      case EventKind::res_write:
        if (auto* op = open_op()) {
          op->complete = true;
          op->res = i;
        }
        break;
      case EventKind::inv_tryc:
        t.tryc = i;
        t.status = TxnStatus::commit_pending;
        break;
      case EventKind::res_commit:
        t.status = TxnStatus::committed;
        t.end = i;
        break;
      case EventKind::res_abort:
        t.status = TxnStatus::aborted;
        t.end = i;
        break;
      case EventKind::primitive:
        if (t.tryc && !t.end) {
          t.tryc_primitives.push_back(i);
        } else if (auto* op = open_op()) {
          op->primitives.push_back(i);
        }
        break;
      default:
        break;
    }
  }
  return out;
}

}  // namespace hytm
