#pragma once

// TL2: software-only, versioned write locks and a global version clock.
// Reads cost a constant number of base objects; there is no fast path.

#include <algorithm>

#include "hytm/tm.hpp"

namespace hytm {

class Tl2 : public Algorithm {
 public:
  explicit Tl2(const Layout& layout) : Algorithm(layout) {}

  std::string_view name() const override { return "tl2"; }
  bool has_fast_path() const override { return false; }

  Task<void> begin(TxnDescriptor& d) override {
    d.read_version = co_await d.proc.direct(layout_.gvc(), Rmw::read());
  }

  Task<Word> read(TxnDescriptor& d, TObj x) override {
    if (const auto* w = d.find_write(x)) co_return w->value;
    Process& p = d.proc;
    const SeqLock r1(co_await p.direct(layout_.lock(x), Rmw::read()));
    const Word v = co_await p.direct(layout_.value(x), Rmw::read());
    const SeqLock r2(co_await p.direct(layout_.lock(x), Rmw::read()));
    if (r1.locked() || r2.locked()) co_await abort(AbortCause::locked);
    if (r1 != r2 || r1.sequence() > d.read_version) co_await abort(AbortCause::stale_version);
    d.rset.push_back({x, r1, v});
    co_return v;
  }

  Task<void> write(TxnDescriptor& d, TObj x, Word v) override {
    d.buffer_write(x, v, {});
    co_return;
  }

  Task<void> commit(TxnDescriptor& d) override {
    if (!d.updating()) co_return;
    Process& p = d.proc;
    for (const auto& w : d.wset) {
      const std::uint32_t idx = layout_.lock_index(w.obj);
      if (std::find(d.lset.begin(), d.lset.end(), idx) != d.lset.end()) continue;
      if (SeqLock(co_await p.direct(BaseId{idx}, Rmw::try_lock(d.pid()))).locked()) {
        co_await unlock_all(d);
        co_await abort(AbortCause::acquire);
      }
      d.lset.push_back(idx);
    }
    const Word wv = co_await p.direct(layout_.gvc(), Rmw::fetch_add(1)) + 1;
    for (const auto& e : d.rset) {
      const SeqLock cur(co_await p.direct(layout_.lock(e.obj), Rmw::read()));
      if ((cur.locked() && !cur.locked_by(d.pid())) || cur.sequence() > d.read_version) {
        co_await unlock_all(d);
        co_await abort(AbortCause::validation);
      }
    }
    for (const auto& w : d.wset) co_await p.direct(layout_.value(w.obj), Rmw::write(w.value));
    for (auto idx : d.lset) co_await p.direct(BaseId{idx}, Rmw::write(SeqLock::make(wv).raw()));
    d.lset.clear();
  }

 private:
  Task<void> unlock_all(TxnDescriptor& d) {
    for (auto idx : d.lset) co_await d.proc.direct(BaseId{idx}, Rmw::unlock(d.pid()));
    d.lset.clear();
  }
};

}  // namespace hytm
