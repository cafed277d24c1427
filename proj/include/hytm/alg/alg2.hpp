#pragma once

// Algorithm 1's slow path serialized under a global lock L, which lets the
// fast path read t-objects without touching their metadata.

#include "hytm/alg/alg1.hpp"

namespace hytm {

class Alg2 : public Alg1 {
 public:
  explicit Alg2(const Layout& layout) : Alg1(layout) {}

  std::string_view name() const override { return "alg2"; }

  Task<void> begin(TxnDescriptor& d) override {
    if (d.path == Path::slow) co_return;
    const SeqLock l(co_await d.proc.cached(layout_.global_lock(), Rmw::read()));
    if (l.locked()) co_await abort(AbortCause::locked);
  }

  Task<Word> read(TxnDescriptor& d, TObj x) override {
    if (d.path == Path::slow) co_return co_await slow_read(d, x);
    co_return co_await d.proc.cached(layout_.value(x), Rmw::read());
  }

  Task<void> write(TxnDescriptor& d, TObj x, Word v) override {
    if (d.path == Path::slow) {
      co_await slow_write(d, x, v);
      co_return;
    }
    co_await fast_write(d, x, v, false);
  }

  Task<void> commit(TxnDescriptor& d) override {
    if (d.path != Path::slow) {
      co_await d.proc.commit();
      co_return;
    }
    if (!d.updating()) co_return;
    Process& p = d.proc;
    const BaseId l = layout_.global_lock();
    while (SeqLock(co_await p.direct(l, Rmw::try_lock(d.pid()))).locked()) {
    }
    if (!co_await acquire(d)) {
      co_await p.direct(l, Rmw::unlock(d.pid()));
      co_await abort(AbortCause::acquire);
    }
    if (!co_await validate(d)) {
      co_await release(d, false);
      co_await p.direct(l, Rmw::unlock(d.pid()));
      co_await abort(AbortCause::validation);
    }
    co_await write_back(d);
    co_await release(d, true);
    co_await p.direct(l, Rmw::unlock(d.pid()));
  }
};

}  // namespace hytm
