#pragma once

// Hybrid NOrec. Slow-path transactions log read values and revalidate them
// only when the global sequence lock gsl has moved. Slow writers also take
// esl, which fast transactions subscribe to at begin. Fast updaters bump gsl
// inside the hardware transaction; the starred variant bumps it with a
// non-speculative fetch-and-add just before committing.

#include "hytm/tm.hpp"

namespace hytm {

class HybridNorec : public Algorithm {
 public:
  HybridNorec(const Layout& layout, bool star = false) : Algorithm(layout), star_(star) {}

  std::string_view name() const override { return star_ ? "hynorec-star" : "hynorec"; }
  bool star() const { return star_; }

  Task<void> begin(TxnDescriptor& d) override {
    Process& p = d.proc;
    if (d.path != Path::slow) {
      if (SeqLock(co_await p.cached(layout_.esl(), Rmw::read())).locked()) {
        co_await abort(AbortCause::esl);
      }
      co_return;
    }
    SeqLock g;
    do {
      g = SeqLock(co_await p.direct(layout_.gsl(), Rmw::read()));
    } while (g.locked());
    d.snapshot = g;
  }

  Task<Word> read(TxnDescriptor& d, TObj x) override {
    Process& p = d.proc;
    if (d.path != Path::slow) co_return co_await p.cached(layout_.value(x), Rmw::read());
    if (const auto* w = d.find_write(x)) co_return w->value;
    Word v = co_await p.direct(layout_.value(x), Rmw::read());
    SeqLock g(co_await p.direct(layout_.gsl(), Rmw::read()));
    while (g != d.snapshot) {
      if (g.locked()) {
        g = SeqLock(co_await p.direct(layout_.gsl(), Rmw::read()));
        continue;
      }
      if (!co_await revalidate(d)) co_await abort(AbortCause::validation);
      d.snapshot = g;
      v = co_await p.direct(layout_.value(x), Rmw::read());
      g = SeqLock(co_await p.direct(layout_.gsl(), Rmw::read()));
    }
    d.rset.push_back({x, g, v});
    co_return v;
  }

  Task<void> write(TxnDescriptor& d, TObj x, Word v) override {
    d.buffer_write(x, v, {});
    if (d.path != Path::slow) co_await d.proc.cached(layout_.value(x), Rmw::write(v));
  }

  Task<void> commit(TxnDescriptor& d) override {
    Process& p = d.proc;
    if (d.path != Path::slow) {
      if (d.updating()) {
        if (star_) {
          co_await p.hw_direct(layout_.gsl(), Rmw::fetch_add(Word{2} << SeqLock::kSeqShift));
        } else {
          if (SeqLock(co_await p.cached(layout_.gsl(), Rmw::read())).locked()) {
            co_await abort(AbortCause::locked);
          }
          co_await p.cached(layout_.gsl(), Rmw::inc_sequence());
          co_await p.cached(layout_.gsl(), Rmw::inc_sequence());
        }
      }
      co_await p.commit();
      co_return;
    }
    if (!d.updating()) co_return;
    while (SeqLock(co_await p.direct(layout_.esl(), Rmw::try_lock(d.pid()))).locked()) {
    }
    SeqLock g;
    while ((g = SeqLock(co_await p.direct(layout_.gsl(), Rmw::try_lock(d.pid())))).locked()) {
    }
    if (g.sequence() != d.snapshot.sequence() && !co_await revalidate(d)) {
      co_await p.direct(layout_.gsl(), Rmw::unlock(d.pid()));
      co_await p.direct(layout_.esl(), Rmw::unlock(d.pid()));
      co_await abort(AbortCause::validation);
    }
    for (const auto& w : d.wset) co_await p.direct(layout_.value(w.obj), Rmw::write(w.value));
    co_await p.direct(layout_.gsl(), Rmw::unlock_increment(d.pid()));
    co_await p.direct(layout_.esl(), Rmw::unlock(d.pid()));
  }

 private:
  /// Value-based validation of the read log.
  Task<bool> revalidate(TxnDescriptor& d) {
    ++d.stats.validations;
    for (const auto& e : d.rset) {
      if (co_await d.proc.direct(layout_.value(e.obj), Rmw::read()) != e.value) co_return false;
    }
    co_return true;
  }

  bool star_;
};

}  // namespace hytm
