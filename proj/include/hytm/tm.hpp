#pragma once

// Transactional layer shared by every algorithm: t-object layout, transaction
// descriptors, the program-facing Tx handle and the fast/slow retry runner.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hytm/machine.hpp"
#include "hytm/process.hpp"
#include "hytm/task.hpp"

namespace hytm {

struct TObj {
  std::uint32_t index = 0;
  friend constexpr auto operator<=>(TObj, TObj) = default;
};

/// Memory layout: [lock array][L gsl esl gvc F][t-object values].
class Layout {
 public:
  static constexpr std::size_t kGlobals = 5;

  explicit Layout(std::size_t tobjects, unsigned lock_bits = 20)
      : tobjects_(tobjects), lock_bits_(lock_bits) {
    if (lock_bits < 1 || lock_bits > 24) throw ModelViolation("lock_bits must lie in [1,24]");
  }

  std::size_t tobjects() const { return tobjects_; }
  unsigned lock_bits() const { return lock_bits_; }
  std::size_t lock_count() const { return std::size_t{1} << lock_bits_; }
  std::size_t memory_size() const { return lock_count() + kGlobals + tobjects_; }

  /// Multiplicative hash of the t-object index onto the lock array.
  std::uint32_t lock_index(TObj x) const {
    return static_cast<std::uint32_t>((std::uint64_t{x.index} * 0x9E3779B97F4A7C15ull) >>
                                      (64 - lock_bits_));
  }
  BaseId lock(TObj x) const { return BaseId{lock_index(x)}; }

  BaseId value(TObj x) const {
    if (x.index >= tobjects_) {
      throw ModelViolation("t-object " + std::to_string(x.index) + " out of range");
    }
    return BaseId{static_cast<std::uint32_t>(lock_count() + kGlobals + x.index)};
  }

  /// Global lock: Algorithm 2's L, and the elided lock under TLE.
  BaseId global_lock() const { return global(0); }
  BaseId gsl() const { return global(1); }
  BaseId esl() const { return global(2); }
  BaseId gvc() const { return global(3); }
  /// Count of live slow-path transactions guarding the uninstrumented path.
  BaseId ff_counter() const { return global(4); }

  /// True when no two of the first `n` t-objects share a lock.
  bool locks_distinct(std::size_t n) const {
    std::vector<std::uint32_t> seen;
    for (std::uint32_t i = 0; i < n; ++i) seen.push_back(lock_index(TObj{i}));
    std::sort(seen.begin(), seen.end());
    return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
  }

 private:
  BaseId global(std::uint32_t k) const {
    return BaseId{static_cast<std::uint32_t>(lock_count() + k)};
  }
  std::size_t tobjects_;
  unsigned lock_bits_;
};

inline constexpr std::size_t kPathCount = 3;
constexpr std::size_t path_slot(Path p) { return static_cast<std::size_t>(p); }

/// Exact per-process counters; merged after a run.
struct TxStats {
  std::array<std::uint64_t, kPathCount> attempts{};
  std::array<std::uint64_t, kPathCount> commits{};
  std::array<std::array<std::uint64_t, kAbortCauseCount>, kPathCount> aborts{};
  std::uint64_t validations = 0;
  std::uint64_t ops = 0;
  bool collect_footprints = false;
  std::vector<std::uint32_t> read_footprints;

  std::uint64_t total_attempts() const { return sum(attempts); }
  std::uint64_t total_commits() const { return sum(commits); }
  std::uint64_t total_aborts() const {
    std::uint64_t n = 0;
    for (const auto& row : aborts) n += sum(row);
    return n;
  }
  std::uint64_t aborts_by(AbortCause c) const {
    std::uint64_t n = 0;
    for (const auto& row : aborts) n += row[static_cast<std::size_t>(c)];
    return n;
  }
  std::uint64_t aborts_on(Path p) const { return sum(aborts[path_slot(p)]); }

  void merge(const TxStats& o) {
    for (std::size_t p = 0; p < kPathCount; ++p) {
      attempts[p] += o.attempts[p];
      commits[p] += o.commits[p];
      for (std::size_t c = 0; c < aborts[p].size(); ++c) aborts[p][c] += o.aborts[p][c];
    }
    validations += o.validations;
    ops += o.ops;
    read_footprints.insert(read_footprints.end(), o.read_footprints.begin(),
                           o.read_footprints.end());
  }

 private:
  template <class A>
  static std::uint64_t sum(const A& a) {
    std::uint64_t n = 0;
    for (auto v : a) n += v;
    return n;
  }
};

struct ReadEntry {
  TObj obj;
  SeqLock snapshot;  // lock word observed by the read
  Word value = 0;    // value observed, for value-based validation
};

struct WriteEntry {
  TObj obj;
  Word value = 0;
  SeqLock snapshot;
};

/// One attempt of one transaction.
struct TxnDescriptor {
  TxnDescriptor(TxnId id, Process& proc, Path path, TxStats& stats)
      : id(id), proc(proc), path(path), stats(stats) {}

  TxnId id;
  Process& proc;
  Path path;
  TxStats& stats;

  std::vector<ReadEntry> rset;
  std::vector<WriteEntry> wset;
  std::vector<std::uint32_t> lset;  // lock indices held
  std::vector<TObj> dset;
  SeqLock snapshot;   // global sequence snapshot (Hybrid NOrec)
  Word read_version = 0;  // TL2 read version

  Pid pid() const { return proc.pid(); }
  Machine& machine() const { return proc.machine(); }
  bool updating() const { return !wset.empty(); }

  WriteEntry* find_write(TObj x) {
    for (auto& w : wset) {
      if (w.obj == x) return &w;
    }
    return nullptr;
  }

  /// Inserts or overwrites the buffered value for `x`.
  void buffer_write(TObj x, Word v, SeqLock snap) {
    if (auto* w = find_write(x)) {
      w->value = v;
      return;
    }
    wset.push_back({x, v, snap});
  }

  /// Records `x` in the data set; returns true when the data set grew past one t-object.
  bool touch(TObj x) {
    for (auto d : dset) {
      if (d == x) return dset.size() > 1;
    }
    dset.push_back(x);
    return dset.size() > 1;
  }
};

/// A HyTM algorithm written as step machines over the process's primitives.
class Algorithm {
 public:
  explicit Algorithm(const Layout& layout) : layout_(layout) {}
  virtual ~Algorithm() = default;

  virtual std::string_view name() const = 0;
  virtual bool has_fast_path() const { return true; }

  virtual Task<void> begin(TxnDescriptor& d) = 0;
  virtual Task<Word> read(TxnDescriptor& d, TObj x) = 0;
  virtual Task<void> write(TxnDescriptor& d, TObj x, Word v) = 0;
  virtual Task<void> commit(TxnDescriptor& d) = 0;

  const Layout& layout() const { return layout_; }

 protected:
  static Task<void> abort(AbortCause c) {
    throw Aborted{c};
    co_return;
  }

  Layout layout_;
};

namespace detail {

inline void record_top(Machine& m, Pid pid, EventKind kind, std::optional<std::uint32_t> base = {},
                       Word value = 0) {
  Event e;
  e.kind = kind;
  e.base = base;
  e.value = value;
  m.record(pid, e);
}

}  // namespace detail

/// Program-facing handle: records t-operation events and dispatches to the active path.
class Tx {
 public:
  Tx(Algorithm& alg, TxnDescriptor& d) : alg_(alg), d_(d) {}

  Pid pid() const { return d_.pid(); }
  Path path() const { return d_.path; }
  TxnDescriptor& descriptor() { return d_; }

  Task<Word> read(TObj x) {
    Machine& m = d_.machine();
    note_access(x);
    detail::record_top(m, pid(), EventKind::inv_read, x.index);
    m.meter_begin(pid());
    Word v = 0;
    if (d_.path == Path::fastfast) {
      v = co_await d_.proc.cached(alg_.layout().value(x), Rmw::read());
    } else {
      v = co_await alg_.read(d_, x);
    }
    const auto footprint = m.meter_end(pid());
    if (d_.stats.collect_footprints) d_.stats.read_footprints.push_back(static_cast<std::uint32_t>(footprint));
    detail::record_top(m, pid(), EventKind::res_read, std::nullopt, v);
    co_return v;
  }

  Task<void> write(TObj x, Word v) {
    Machine& m = d_.machine();
    note_access(x);
    detail::record_top(m, pid(), EventKind::inv_write, x.index, v);
    if (d_.path == Path::fastfast) {
      co_await d_.proc.cached(alg_.layout().value(x), Rmw::write(v));
    } else {
      co_await alg_.write(d_, x, v);
    }
    detail::record_top(m, pid(), EventKind::res_write);
  }

 private:
  void note_access(TObj x) {
    if (d_.touch(x) && d_.path != Path::slow) d_.machine().hw_set_multi_object(pid(), true);
  }

  Algorithm& alg_;
  TxnDescriptor& d_;
};

/// A transactional program: deterministic function of the values it reads.
using Program = std::function<Task<Word>(Tx&)>;

struct RetryPolicy {
  std::uint32_t max_fast_attempts = 20;
  bool fast_fast = false;
};

struct AttemptOutcome {
  bool committed = false;
  Word result = 0;
  AbortCause cause = AbortCause::tracking;
  std::uint64_t commit_clock = 0;  // machine clock at the commit response
  TxnId txn = 0;
};

/// Runs one attempt of `program` on `path`.
inline Task<AttemptOutcome> attempt(Process& proc, Algorithm& alg, const Program& program, Path path,
                                    TxStats& stats, bool fast_fast_enabled = false) {
  Machine& m = proc.machine();
  const Pid pid = proc.pid();
  TxnDescriptor d(m.new_txn(), proc, path, stats);
  m.set_txn(pid, d.id);
  {
    Event e;
    e.kind = EventKind::begin;
    e.path = path;
    m.record(pid, e);
  }
  ++stats.attempts[path_slot(path)];

  AttemptOutcome out;
  out.txn = d.id;
  std::optional<AbortCause> aborted;
  bool registered = false;
  try {
    if (path != Path::slow) m.hw_begin(pid);
    if (fast_fast_enabled && path == Path::slow) {
      co_await proc.direct(alg.layout().ff_counter(), Rmw::fetch_add(1));
      registered = true;
    }
    if (path == Path::fastfast) {
      if (co_await proc.cached(alg.layout().ff_counter(), Rmw::read()) != 0) {
        throw Aborted{AbortCause::ff_busy};
      }
    } else {
      co_await alg.begin(d);
    }
    Tx tx(alg, d);
    out.result = co_await program(tx);
    detail::record_top(m, pid, EventKind::inv_tryc);
    if (path == Path::fastfast) {
      co_await proc.commit();
    } else {
      co_await alg.commit(d);
    }
    detail::record_top(m, pid, EventKind::res_commit);
    out.committed = true;
    out.commit_clock = m.clock();
  } catch (const Aborted& a) {
    aborted = a.cause;
  }
  if (aborted) {
    out.cause = *aborted;
    detail::record_top(m, pid, EventKind::res_abort, std::nullopt, static_cast<Word>(*aborted));
    if (m.hw_live(pid)) m.hw_discard(pid);
    m.meter_end(pid);
    ++stats.aborts[path_slot(path)][static_cast<std::size_t>(*aborted)];
  } else {
    ++stats.commits[path_slot(path)];
  }
  m.set_txn(pid, 0);
  if (registered) {
    co_await proc.direct(alg.layout().ff_counter(), Rmw::fetch_add(static_cast<Word>(-1)));
  }
  co_return out;
}

struct RunOutcome {
  Word result = 0;
  Path path = Path::slow;
  std::uint32_t attempts = 0;
  std::uint64_t commit_clock = 0;
  TxnId txn = 0;
};

/// Optional uninstrumented attempt, then up to `max_fast_attempts` fast attempts,
/// then the slow path until it commits. The scheduler's liveness budget bounds the loop.
inline Task<RunOutcome> run_transaction(Process& proc, Algorithm& alg, const Program& program,
                                        const RetryPolicy& policy, TxStats& stats) {
  proc.op_steps = 0;
  RunOutcome r;
  auto done = [&](const AttemptOutcome& o, Path p) {
    r.result = o.result;
    r.path = p;
    r.commit_clock = o.commit_clock;
    r.txn = o.txn;
    ++stats.ops;
  };
  if (alg.has_fast_path()) {
    if (policy.fast_fast) {
      ++r.attempts;
      auto o = co_await attempt(proc, alg, program, Path::fastfast, stats, policy.fast_fast);
      if (o.committed) {
        done(o, Path::fastfast);
        co_return r;
      }
    }
    for (std::uint32_t i = 0; i < policy.max_fast_attempts; ++i) {
      ++r.attempts;
      auto o = co_await attempt(proc, alg, program, Path::fast, stats, policy.fast_fast);
      if (o.committed) {
        done(o, Path::fast);
        co_return r;
      }
    }
  }
  while (true) {
    ++r.attempts;
    auto o = co_await attempt(proc, alg, program, Path::slow, stats, policy.fast_fast);
    if (o.committed) {
      done(o, Path::slow);
      co_return r;
    }
  }
}

}  // namespace hytm
