#pragma once

// Constructive serialization for Algorithm 1 histories. Each transaction gets a
// serialization point from its own events; the resulting order is then checked
// for legality and real-time consistency in polynomial time.
//
// A committed slow-path updater is placed at its last write-back, which happens
// under the locks and before validation. A fast read is placed at its final
// lock check, so a fast reader of a written value follows the release.

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hytm/check/opacity.hpp"
#include "hytm/tm.hpp"

namespace hytm {

struct WitnessResult {
  bool ok = true;
  std::vector<TxnId> order;
  std::vector<TxnId> committed;
  std::string mismatch;
};

namespace detail {

/// Position that linearizes a completed t-read. A slow read is placed at its
/// v_j access. A fast read is placed at its later lock check: v_j stays tracked
/// until then, and a written value is only visible there after the release.
inline std::optional<std::size_t> read_point(const History& h, const Layout& layout, const TOp& op, Path path) {
  if (op.kind != TOp::Kind::read || !op.complete) return std::nullopt;
  const auto vbase = layout.value(TObj{op.obj}).index;
  const auto lbase = layout.lock(TObj{op.obj}).index;
  std::optional<std::size_t> at;
  for (auto pos : op.primitives) {
    const Event& e = h[pos];
    if (!e.base || e.rmw != RmwKind::read) continue;
    if (*e.base == vbase && !at) at = pos;
    if (path == Path::fast && at && *e.base == lbase) at = pos;
  }
  return at;
}

}  // namespace detail

inline WitnessResult witness_serialize_alg1(const History& h, const Layout& layout) {
  constexpr std::size_t kInfinity = std::numeric_limits<std::size_t>::max();
  WitnessResult r;
  const auto txns = extract_transactions(h);

  struct Point {
    std::size_t at;
    std::size_t idx;
    bool committed;
  };
  std::vector<Point> points;
  for (std::size_t i = 0; i < txns.size(); ++i) {
    const TxnRecord& t = txns[i];
    std::optional<std::size_t> cache_commit;
    std::optional<std::size_t> last_lock;
    std::optional<std::size_t> last_write;
    for (auto pos : t.tryc_primitives) {
      const Event& e = h[pos];
      if (!e.base) continue;
      if (e.rmw == RmwKind::try_lock) last_lock = pos;
      const bool value_base = *e.base >= layout.lock_count() + Layout::kGlobals;
      if (e.rmw == RmwKind::write && value_base) last_write = pos;
    }
    const bool wrote_back = last_write.has_value();
    const auto publish = last_write ? last_write : last_lock;
    if (t.tryc) {
      for (auto pos : t.events) {
        if (pos > *t.tryc && h[pos].kind == EventKind::cache_commit) cache_commit = pos;
      }
    }

    bool committed = false;
    std::optional<std::size_t> at;
    if (t.status == TxnStatus::committed && t.invoked_write()) {
      committed = true;
      at = t.path == Path::slow ? publish : cache_commit;
      if (!at) {
        r.ok = false;
        r.mismatch = "committed updater T" + std::to_string(t.id) + " has no publication event";
        return r;
      }
    } else if (t.status == TxnStatus::commit_pending && t.path == Path::slow && wrote_back) {
      committed = true;
      at = publish ? *publish : kInfinity;
    } else {
      committed = t.status == TxnStatus::committed;
      for (const auto& op : t.ops) {
        if (auto p = detail::read_point(h, layout, op, t.path)) at = *p;
      }
      if (!at) at = t.first;
    }
    points.push_back({*at, i, committed});
  }
  std::stable_sort(points.begin(), points.end(), [&](const Point& a, const Point& b) {
    if (a.at != b.at) return a.at < b.at;
    return txns[a.idx].id < txns[b.idx].id;
  });

  std::vector<SerialTxn> seq;
  for (const auto& p : points) {
    SerialTxn st;
    st.id = txns[p.idx].id;
    st.committed = p.committed;
    for (const auto& op : txns[p.idx].ops) {
      if (op.complete) st.ops.push_back(op);
    }
    r.order.push_back(st.id);
    if (p.committed) r.committed.push_back(st.id);
    seq.push_back(std::move(st));
  }
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      if (precedes(txns[points[b].idx], txns[points[a].idx])) {
        r.ok = false;
        r.mismatch = "order places T" + std::to_string(txns[points[a].idx].id) + " before T" +
                     std::to_string(txns[points[b].idx].id) + " against real-time order";
        return r;
      }
    }
  }
  if (auto why = check_legal_sequence(seq)) {
    r.ok = false;
    r.mismatch = *why;
  }
  return r;
}

}  // namespace hytm
