#pragma once

// Transactional lock elision: hardware transactions subscribe to one global
// lock; the fallback takes that lock and runs in place.

#include "hytm/tm.hpp"

namespace hytm {

class Tle : public Algorithm {
 public:
  explicit Tle(const Layout& layout) : Algorithm(layout) {}

  std::string_view name() const override { return "tle"; }

  Task<void> begin(TxnDescriptor& d) override {
    Process& p = d.proc;
    const BaseId g = layout_.global_lock();
    if (d.path == Path::slow) {
      while (SeqLock(co_await p.direct(g, Rmw::try_lock(d.pid()))).locked()) {
      }
      co_return;
    }
    if (SeqLock(co_await p.cached(g, Rmw::read())).locked()) co_await abort(AbortCause::locked);
  }

  Task<Word> read(TxnDescriptor& d, TObj x) override {
    if (d.path == Path::slow) co_return co_await d.proc.direct(layout_.value(x), Rmw::read());
    co_return co_await d.proc.cached(layout_.value(x), Rmw::read());
  }

  Task<void> write(TxnDescriptor& d, TObj x, Word v) override {
    d.buffer_write(x, v, {});
    if (d.path == Path::slow) {
      co_await d.proc.direct(layout_.value(x), Rmw::write(v));
    } else {
      co_await d.proc.cached(layout_.value(x), Rmw::write(v));
    }
  }

  Task<void> commit(TxnDescriptor& d) override {
    if (d.path == Path::slow) {
      co_await d.proc.direct(layout_.global_lock(), Rmw::unlock(d.pid()));
    } else {
      co_await d.proc.commit();
    }
  }
};

}  // namespace hytm
