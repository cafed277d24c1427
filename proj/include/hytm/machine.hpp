#pragma once

// Shared memory of base objects plus per-process tracking sets.
//
// Direct primitives act on memory. Cached primitives act on the issuing
// process's tracking set, which buffers values until a cache-commit publishes
// every exclusive entry in one step. Any primitive on a base object marks the
// tracking sets of other processes invalid when they hold that object
// exclusively, or shared and the primitive is nontrivial. The victim learns
// about it at its next cached step or commit.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hytm/history.hpp"
#include "hytm/word.hpp"

namespace hytm {

enum class HwAbortCause : std::uint8_t { tracking, capacity, spurious };

constexpr AbortCause to_abort_cause(HwAbortCause c) {
  switch (c) {
    case HwAbortCause::tracking: return AbortCause::tracking;
    case HwAbortCause::capacity: return AbortCause::capacity;
    case HwAbortCause::spurious: return AbortCause::spurious;
  }
  return AbortCause::tracking;
}

enum class TrackMode : std::uint8_t { shared, exclusive };

struct TrackingEntry {
  BaseId base;
  Word value = 0;
  TrackMode mode = TrackMode::shared;
};

/// One process's speculative footprint.
class TrackingSet {
 public:
  explicit TrackingSet(std::size_t capacity = 64) : capacity_(capacity) {}

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool valid() const { return !invalid_cause_.has_value(); }
  std::optional<HwAbortCause> invalid_cause() const { return invalid_cause_; }
  const std::vector<TrackingEntry>& entries() const { return entries_; }

  TrackingEntry* find(BaseId b) {
    for (auto& e : entries_) {
      if (e.base == b) return &e;
    }
    return nullptr;
  }
  const TrackingEntry* find(BaseId b) const { return const_cast<TrackingSet*>(this)->find(b); }

  void insert(TrackingEntry e) { entries_.push_back(e); }

  void invalidate(HwAbortCause cause) {
    if (!invalid_cause_) invalid_cause_ = cause;
  }

  void clear() {
    entries_.clear();
    invalid_cause_.reset();
  }

  /// Empties the set but keeps it invalid.
  void drop_entries() { entries_.clear(); }

 private:
  std::size_t capacity_;
  std::vector<TrackingEntry> entries_;
  std::optional<HwAbortCause> invalid_cause_;
};

struct MachineConfig {
  std::size_t memory_size = 0;
  std::size_t processes = 1;
  std::size_t tracking_capacity = 64;
  double spurious_probability = 0.0;
  std::uint64_t seed = 0;
  bool record_history = true;
};

struct Applied {
  Word old = 0;
  bool changed = false;
};

/// Word read on success, or the abort delivered to the hardware transaction.
struct HwResult {
  Word value = 0;
  std::optional<HwAbortCause> abort;
  bool ok() const { return !abort.has_value(); }
};

class Machine {
 public:
  explicit Machine(const MachineConfig& cfg)
      : cfg_(cfg),
        memory_(cfg.memory_size, 0),
        procs_(cfg.processes, ProcState{TrackingSet(cfg.tracking_capacity), false, false, 0, false, {}}),
        rng_(cfg.seed) {
    if (cfg.spurious_probability < 0.0 || cfg.spurious_probability > 1.0) {
      throw ModelViolation("spurious abort probability must lie in [0,1]");
    }
  }

  const MachineConfig& config() const { return cfg_; }
  std::size_t memory_size() const { return memory_.size(); }
  std::size_t processes() const { return procs_.size(); }

  // --- attribution -------------------------------------------------------

  TxnId new_txn() { return ++last_txn_; }
  void set_txn(Pid pid, TxnId txn) { proc(pid).txn = txn; }
  TxnId txn_of(Pid pid) const { return proc(pid).txn; }

  /// Appends an event attributed to `pid` and its current transaction.
  void record(Pid pid, Event e) {
    ++clock_;
    auto& p = proc(pid);
    if (p.meter_active && e.is_primitive() && e.base) p.meter.push_back(*e.base);
    if (!cfg_.record_history) return;
    e.pid = pid;
    e.txn = p.txn;
    history_.append(e);
  }

  /// Events recorded so far (counted even when history recording is off).
  std::uint64_t clock() const { return clock_; }
  const History& history() const { return history_; }
  History take_history() { return std::exchange(history_, {}); }

  // --- per-operation footprint meter ------------------------------------

  void meter_begin(Pid pid) {
    auto& p = proc(pid);
    p.meter_active = true;
    p.meter.clear();
  }

  /// Distinct base objects touched by `pid` since meter_begin.
  std::size_t meter_end(Pid pid) {
    auto& p = proc(pid);
    p.meter_active = false;
    std::sort(p.meter.begin(), p.meter.end());
    return static_cast<std::size_t>(std::unique(p.meter.begin(), p.meter.end()) - p.meter.begin());
  }

  // --- direct access ----------------------------------------------------

  /// Applies `op` straight to memory and records a direct primitive event.
  Applied apply_rmw(Pid pid, BaseId base, const Rmw& op) {
    Word& cell = at(base);
    Applied r{cell, false};
    auto out = evaluate(op, cell);
    cell = out.next;
    r.changed = out.changed;
    record_primitive(pid, base, op, Access::direct, !r.changed, r.old);
    propagate_conflict(pid, base, r.changed);
    return r;
  }

  /// Inspection without an event; tests and drivers only.
  Word peek(BaseId base) const { return memory_.at(check(base).index); }
  void poke(BaseId base, Word v) { at(base) = v; }

  // --- hardware transactions --------------------------------------------

  void hw_begin(Pid pid) {
    auto& p = proc(pid);
    if (p.hw_live) throw ModelViolation("nested hw_begin on process " + std::to_string(pid));
    p.hw_live = true;
    p.multi_object = false;
    p.tau.clear();
  }

  bool hw_live(Pid pid) const { return proc(pid).hw_live; }

  /// Whether the running hardware transaction's data set has grown past one t-object.
  void hw_set_multi_object(Pid pid, bool multi) { proc(pid).multi_object = multi; }

  const TrackingSet& tracking_set(Pid pid) const { return proc(pid).tau; }

  HwResult hw_cached(Pid pid, BaseId base, const Rmw& op) {
    auto& p = live_proc(pid, "hw_cached");
    check(base);
    if (cfg_.spurious_probability > 0.0 && p.tau.valid() && roll_spurious()) {
      p.tau.invalidate(HwAbortCause::spurious);
    }
    if (!p.tau.valid()) return deliver_abort(pid, *p.tau.invalid_cause(), base);

    TrackingEntry* entry = p.tau.find(base);
    if (!entry) {
      if (p.multi_object && p.tau.size() >= p.tau.capacity()) {
        return deliver_abort(pid, HwAbortCause::capacity, base);
      }
      p.tau.insert({base, memory_[base.index], TrackMode::shared});
      entry = p.tau.find(base);
    }
    const Word old = entry->value;
    auto out = evaluate(op, old);
    entry->value = out.next;
    if (out.changed) entry->mode = TrackMode::exclusive;
    record_primitive(pid, base, op, Access::cached, !out.changed, old);
    propagate_conflict(pid, base, out.changed);
    return {old, std::nullopt};
  }

  /// Non-speculative access from inside a hardware transaction (suspend/resume).
  /// An invalidated tracking set still aborts the transaction at this event.
  HwResult hw_direct(Pid pid, BaseId base, const Rmw& op) {
    auto& p = live_proc(pid, "hw_direct");
    check(base);
    if (!p.tau.valid()) return deliver_abort(pid, *p.tau.invalid_cause(), base);
    return {apply_rmw(pid, base, op).old, std::nullopt};
  }

  HwResult hw_commit(Pid pid) {
    auto& p = live_proc(pid, "hw_commit");
    if (!p.tau.valid()) {
      auto r = deliver_abort(pid, *p.tau.invalid_cause(), std::nullopt);
      p.hw_live = false;
      return r;
    }
    Word published = 0;
    for (const auto& e : p.tau.entries()) {
      if (e.mode != TrackMode::exclusive) continue;
      memory_[e.base.index] = e.value;
      ++published;
    }
    Event ev;
    ev.kind = EventKind::cache_commit;
    ev.access = Access::cached;
    ev.value = published;
    record(pid, ev);
    std::vector<TrackingEntry> written;
    for (const auto& e : p.tau.entries()) {
      if (e.mode == TrackMode::exclusive) written.push_back(e);
    }
    p.tau.clear();
    p.hw_live = false;
    for (const auto& e : written) propagate_conflict(pid, e.base, true);
    return {published, std::nullopt};
  }

  /// Ends a hardware transaction the algorithm chose to abort; nothing is published.
  void hw_discard(Pid pid) {
    auto& p = proc(pid);
    p.tau.clear();
    p.hw_live = false;
  }

  /// Applies the invalidation rule for a primitive by `origin` on `base`.
  std::vector<Pid> propagate_conflict(Pid origin, BaseId base, bool nontrivial) {
    std::vector<Pid> victims;
    for (std::size_t j = 0; j < procs_.size(); ++j) {
      if (j == origin) continue;
      auto& p = procs_[j];
      if (!p.hw_live || !p.tau.valid()) continue;
      const TrackingEntry* e = p.tau.find(base);
      if (!e) continue;
      if (e->mode == TrackMode::exclusive || nontrivial) {
        p.tau.invalidate(HwAbortCause::tracking);
        victims.push_back(static_cast<Pid>(j));
      }
    }
    return victims;
  }

 private:
  struct ProcState {
    TrackingSet tau;
    bool hw_live = false;
    bool multi_object = false;
    TxnId txn = 0;
    bool meter_active = false;
    std::vector<std::uint32_t> meter;
  };

  ProcState& proc(Pid pid) {
    if (pid >= procs_.size()) throw ModelViolation("unknown process " + std::to_string(pid));
    return procs_[pid];
  }
  const ProcState& proc(Pid pid) const { return const_cast<Machine*>(this)->proc(pid); }

  ProcState& live_proc(Pid pid, const char* what) {
    auto& p = proc(pid);
    if (!p.hw_live) {
      throw ModelViolation(std::string(what) + " outside a hardware transaction on process " +
                           std::to_string(pid));
    }
    return p;
  }

  BaseId check(BaseId base) const {
    if (base.index >= memory_.size()) {
      throw ModelViolation("base object " + std::to_string(base.index) + " out of range");
    }
    return base;
  }
  Word& at(BaseId base) { return memory_[check(base).index]; }

  bool roll_spurious() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < cfg_.spurious_probability;
  }

  HwResult deliver_abort(Pid pid, HwAbortCause cause, std::optional<BaseId> base) {
    auto& p = proc(pid);
    p.tau.invalidate(cause);
    p.tau.drop_entries();
    Event ev;
    ev.kind = cause == HwAbortCause::capacity   ? EventKind::capacity_abort
              : cause == HwAbortCause::spurious ? EventKind::spurious_abort
                                                : EventKind::tracking_abort;
    if (base) ev.base = base->index;
    record(pid, ev);
    return {0, cause};
  }

  void record_primitive(Pid pid, BaseId base, const Rmw& op, Access access, bool trivial,
                        Word returned) {
    Event ev;
    ev.kind = EventKind::primitive;
    ev.rmw = op.kind;
    ev.base = base.index;
    ev.access = access;
    ev.trivial = trivial;
    ev.value = returned;
    record(pid, ev);
  }

  MachineConfig cfg_;
  std::vector<Word> memory_;
  std::vector<ProcState> procs_;
  std::mt19937_64 rng_;
  History history_;
  std::uint64_t clock_ = 0;
  TxnId last_txn_ = 0;
};

}  // namespace hytm
