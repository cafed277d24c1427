#pragma once

// Progressive HyTM with per-object sequence locks. Fast-path reads check the
// object's lock; slow-path reads validate the whole read set incrementally.

#include <algorithm>
#include <vector>

#include "hytm/tm.hpp"

namespace hytm {

struct Alg1Options {
  /// Read r_j with a cached access on the fast path instead of a direct one.
  bool tracked_lock_reads = false;
  /// Write back only after validation. With direct lock reads a slow updater can
  /// lock an object a fast transaction already read without aborting it, and the
  /// two can commit in a cycle. The default writes back first, under the locks,
  /// so fast readers of the write set are invalidated before validation.
  bool lazy_write_back = false;
  // Fault injection for checker mutation tests.
  bool skip_validate = false;
  bool skip_read_lock_check = false;
};

class Alg1 : public Algorithm {
 public:
  Alg1(const Layout& layout, Alg1Options opts = {}) : Algorithm(layout), opts_(opts) {}

  std::string_view name() const override { return "alg1"; }
  const Alg1Options& options() const { return opts_; }

  Task<void> begin(TxnDescriptor&) override { co_return; }

  Task<Word> read(TxnDescriptor& d, TObj x) override {
    if (d.path == Path::slow) co_return co_await slow_read(d, x);
    Process& p = d.proc;
    const Word v = co_await p.cached(layout_.value(x), Rmw::read());
    SeqLock r;
    if (opts_.tracked_lock_reads) {
      r = SeqLock(co_await p.cached(layout_.lock(x), Rmw::read()));
    } else {
      r = SeqLock(co_await p.hw_direct(layout_.lock(x), Rmw::read()));
    }
    if (r.locked()) co_await abort(AbortCause::locked);
    co_return v;
  }

  Task<void> write(TxnDescriptor& d, TObj x, Word v) override {
    if (d.path == Path::slow) {
      co_await slow_write(d, x, v);
      co_return;
    }
    co_await fast_write(d, x, v, true);
  }

  Task<void> commit(TxnDescriptor& d) override {
    if (d.path != Path::slow) {
      co_await d.proc.commit();
      co_return;
    }
    if (!d.updating()) co_return;
    if (!co_await acquire(d)) co_await abort(AbortCause::acquire);
    if (opts_.lazy_write_back) {
      if (!co_await validate(d)) {
        co_await release(d, false);
        co_await abort(AbortCause::validation);
      }
      co_await write_back(d);
      co_await release(d, true);
      co_return;
    }
    std::vector<Word> old;
    old.reserve(d.wset.size());
    for (const auto& w : d.wset) {
      old.push_back(co_await d.proc.direct(layout_.value(w.obj), Rmw::read()));
      co_await d.proc.direct(layout_.value(w.obj), Rmw::write(w.value));
    }
    if (!co_await validate(d)) {
      for (std::size_t k = 0; k < d.wset.size(); ++k) {
        co_await d.proc.direct(layout_.value(d.wset[k].obj), Rmw::write(old[k]));
      }
      // A new sequence, so nobody validates against the undone values.
      co_await release(d, true);
      co_await abort(AbortCause::validation);
    }
    co_await release(d, true);
  }

 protected:
  Task<void> fast_write(TxnDescriptor& d, TObj x, Word v, bool check_lock) {
    Process& p = d.proc;
    const SeqLock r(co_await p.cached(layout_.lock(x), Rmw::read()));
    if (check_lock && r.locked()) co_await abort(AbortCause::locked);
    co_await p.cached(layout_.lock(x), Rmw::inc_sequence());
    co_await p.cached(layout_.value(x), Rmw::write(v));
  }

  Task<Word> slow_read(TxnDescriptor& d, TObj x) {
    if (const auto* w = d.find_write(x)) co_return w->value;
    Process& p = d.proc;
    const SeqLock r(co_await p.direct(layout_.lock(x), Rmw::read()));
    const Word v = co_await p.direct(layout_.value(x), Rmw::read());
    d.rset.push_back({x, r, v});
    if (r.locked() && !opts_.skip_read_lock_check) co_await abort(AbortCause::locked);
    if (!co_await validate(d)) co_await abort(AbortCause::validation);
    co_return v;
  }

  Task<void> slow_write(TxnDescriptor& d, TObj x, Word v) {
    const SeqLock r(co_await d.proc.direct(layout_.lock(x), Rmw::read()));
    if (r.locked()) co_await abort(AbortCause::locked);
    d.buffer_write(x, v, r);
  }

  /// An entry is valid when its lock word is exactly as observed, or is now
  /// held by this transaction with the observed (unlocked) sequence.
  Task<bool> validate(TxnDescriptor& d) {
    ++d.stats.validations;
    if (opts_.skip_validate) co_return true;
    for (const auto& e : d.rset) {
      const SeqLock cur(co_await d.proc.direct(layout_.lock(e.obj), Rmw::read()));
      if (cur == e.snapshot) continue;
      if (!e.snapshot.locked() && cur.locked_by(d.pid()) &&
          cur.sequence() == e.snapshot.sequence()) {
        continue;
      }
      co_return false;
    }
    co_return true;
  }

  /// Locks every write-set object; on failure restores what was taken.
  Task<bool> acquire(TxnDescriptor& d) {
    for (const auto& w : d.wset) {
      const std::uint32_t idx = layout_.lock_index(w.obj);
      if (std::find(d.lset.begin(), d.lset.end(), idx) != d.lset.end()) continue;
      const SeqLock old(co_await d.proc.direct(BaseId{idx}, Rmw::try_lock(d.pid())));
      if (old.locked()) {
        co_await release(d, false);
        co_return false;
      }
      d.lset.push_back(idx);
    }
    co_return true;
  }

  Task<void> write_back(TxnDescriptor& d) {
    for (const auto& w : d.wset) co_await d.proc.direct(layout_.value(w.obj), Rmw::write(w.value));
  }

  /// Commit-path release publishes a new sequence; abort-path release restores the word.
  Task<void> release(TxnDescriptor& d, bool publish) {
    for (auto idx : d.lset) {
      co_await d.proc.direct(BaseId{idx}, publish ? Rmw::unlock_increment(d.pid())
                                                  : Rmw::unlock(d.pid()));
    }
    d.lset.clear();
  }

  Alg1Options opts_;
};

}  // namespace hytm
