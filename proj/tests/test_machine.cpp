#include <gtest/gtest.h>

#include "hytm/machine.hpp"

using namespace hytm;

namespace {

constexpr BaseId b0{0}, b1{1}, b2{2};

Machine make(std::size_t procs = 2, std::size_t ts = 64, double p = 0.0) {
  return Machine(MachineConfig{16, procs, ts, p, 1, true});
}

}  // namespace

TEST(Direct, ApplyReturnsOldAndTriviality) {
  auto m = make();
  m.poke(b0, 5);
  auto r = m.apply_rmw(0, b0, Rmw::read());
  EXPECT_EQ(r.old, 5u);
  EXPECT_FALSE(r.changed);
  r = m.apply_rmw(0, b0, Rmw::cas(5, 5));
  EXPECT_FALSE(r.changed);
  m.poke(b0, 7);
  r = m.apply_rmw(0, b0, Rmw::fetch_add(1));
  EXPECT_EQ(r.old, 7u);
  EXPECT_TRUE(r.changed);
  EXPECT_EQ(m.peek(b0), 8u);
}

TEST(Direct, EventsCarryTags) {
  auto m = make();
  m.apply_rmw(1, b2, Rmw::write(3));
  m.hw_begin(0);
  ASSERT_TRUE(m.hw_cached(0, b2, Rmw::read()).ok());
  const auto& ev = m.history().events();
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[0].access, Access::direct);
  EXPECT_EQ(ev[0].trivial, false);
  EXPECT_EQ(ev[0].pid, 1);
  EXPECT_EQ(ev[1].access, Access::cached);
  EXPECT_EQ(ev[1].trivial, true);
  EXPECT_EQ(ev[1].value, 3u);
}

TEST(Direct, OutOfRangeIsFatal) {
  auto m = make();
  EXPECT_THROW(m.apply_rmw(0, BaseId{16}, Rmw::read()), ModelViolation);
  EXPECT_THROW(m.apply_rmw(7, b0, Rmw::read()), ModelViolation);
}

TEST(HwLifecycle, BeginTwiceIsFatal) {
  auto m = make();
  m.hw_begin(0);
  EXPECT_TRUE(m.tracking_set(0).empty());
  EXPECT_THROW(m.hw_begin(0), ModelViolation);
  ASSERT_TRUE(m.hw_commit(0).ok());
  EXPECT_NO_THROW(m.hw_begin(0));
  EXPECT_TRUE(m.tracking_set(0).empty());
}

TEST(HwLifecycle, CachedOutsideTransactionIsFatal) {
  auto m = make();
  EXPECT_THROW(m.hw_cached(0, b0, Rmw::read()), ModelViolation);
  EXPECT_THROW(m.hw_commit(0), ModelViolation);
}

TEST(Buffering, FirstAccessReadsThroughAndWritesStayCached) {
  auto m = make();
  m.poke(b0, 9);
  m.hw_begin(0);
  EXPECT_EQ(m.hw_cached(0, b0, Rmw::read()).value, 9u);
  ASSERT_EQ(m.tracking_set(0).size(), 1u);
  EXPECT_EQ(m.tracking_set(0).entries()[0].mode, TrackMode::shared);
  EXPECT_EQ(m.hw_cached(0, b0, Rmw::write(5)).value, 9u);
  const auto& e = m.tracking_set(0).entries()[0];
  EXPECT_EQ(e.mode, TrackMode::exclusive);
  EXPECT_EQ(e.value, 5u);
  EXPECT_EQ(m.peek(b0), 9u);
  EXPECT_EQ(m.hw_cached(0, b0, Rmw::read()).value, 5u);
  EXPECT_EQ(m.tracking_set(0).entries()[0].mode, TrackMode::exclusive);
}

TEST(Buffering, CommitPublishesExclusiveEntriesAtomically) {
  auto m = make();
  m.poke(b0, 9);
  m.poke(b1, 1);
  m.hw_begin(0);
  m.hw_cached(0, b0, Rmw::write(5));
  m.hw_cached(0, b1, Rmw::read());
  m.hw_cached(0, b2, Rmw::fetch_add(4));
  const auto before = m.history().size();
  auto r = m.hw_commit(0);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.value, 2u);
  EXPECT_EQ(m.history().size(), before + 1);  // one step
  EXPECT_EQ(m.history().events().back().kind, EventKind::cache_commit);
  EXPECT_EQ(m.peek(b0), 5u);
  EXPECT_EQ(m.peek(b1), 1u);
  EXPECT_EQ(m.peek(b2), 4u);
  EXPECT_FALSE(m.hw_live(0));
}

TEST(Buffering, SharedOnlyCommitLeavesMemory) {
  auto m = make();
  m.poke(b0, 9);
  m.hw_begin(0);
  m.hw_cached(0, b0, Rmw::read());
  ASSERT_TRUE(m.hw_commit(0).ok());
  EXPECT_EQ(m.peek(b0), 9u);
}

TEST(Buffering, DirectThenCachedSeesPostDirectValue) {
  auto m = make();
  m.poke(b0, 3);
  m.hw_begin(0);
  EXPECT_EQ(m.hw_direct(0, b0, Rmw::fetch_add(1)).value, 3u);
  EXPECT_TRUE(m.tracking_set(0).empty());
  EXPECT_EQ(m.hw_cached(0, b0, Rmw::read()).value, 4u);
}

// Invalidation: shared entries survive trivial primitives only; exclusive entries survive none.
TEST(Invalidation, SharedTrivialDoesNotAbort) {
  auto m = make();
  m.hw_begin(1);
  m.hw_cached(1, b0, Rmw::read());
  EXPECT_TRUE(m.propagate_conflict(0, b0, false).empty());
  m.apply_rmw(0, b0, Rmw::read());
  m.apply_rmw(0, b0, Rmw::cas(1, 2));  // fails, trivial
  EXPECT_TRUE(m.tracking_set(1).valid());
  EXPECT_TRUE(m.hw_cached(1, b1, Rmw::read()).ok());
  EXPECT_TRUE(m.hw_commit(1).ok());
}

TEST(Invalidation, SharedNontrivialAborts) {
  auto m = make();
  m.hw_begin(1);
  m.hw_cached(1, b0, Rmw::read());
  m.apply_rmw(0, b0, Rmw::write(1));
  EXPECT_FALSE(m.tracking_set(1).valid());
  auto r = m.hw_cached(1, b1, Rmw::read());
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(*r.abort, HwAbortCause::tracking);
  EXPECT_TRUE(m.tracking_set(1).empty());
  EXPECT_EQ(m.history().events().back().kind, EventKind::tracking_abort);
}

TEST(Invalidation, ExclusiveAnyPrimitiveAborts) {
  auto m = make();
  m.hw_begin(1);
  m.hw_cached(1, b0, Rmw::write(4));
  m.apply_rmw(0, b0, Rmw::read());
  auto r = m.hw_commit(1);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(*r.abort, HwAbortCause::tracking);
  EXPECT_EQ(m.peek(b0), 0u);
  EXPECT_FALSE(m.hw_live(1));
}

TEST(Invalidation, CachedAccessesConflictToo) {
  auto m = make();
  m.hw_begin(0);
  m.hw_begin(1);
  m.hw_cached(1, b0, Rmw::read());
  m.hw_cached(0, b0, Rmw::write(1));  // nontrivial cached access invalidates p1's shared entry
  EXPECT_FALSE(m.tracking_set(1).valid());
  EXPECT_TRUE(m.tracking_set(0).valid());
}

TEST(Invalidation, CommitPublicationConflicts) {
  auto m = make();
  m.hw_begin(0);
  m.hw_begin(1);
  m.hw_cached(0, b0, Rmw::write(1));
  m.hw_cached(1, b1, Rmw::read());
  m.hw_cached(1, b2, Rmw::read());
  ASSERT_TRUE(m.hw_commit(0).ok());
  EXPECT_TRUE(m.tracking_set(1).valid());
  m.hw_begin(0);
  m.hw_cached(0, b1, Rmw::write(3));
  EXPECT_FALSE(m.tracking_set(1).valid());
}

TEST(Invalidation, OwnDirectAccessIsExempt) {
  auto m = make();
  m.hw_begin(0);
  m.hw_cached(0, b0, Rmw::write(4));
  m.hw_direct(0, b0, Rmw::read());
  EXPECT_TRUE(m.tracking_set(0).valid());
  m.hw_direct(0, b1, Rmw::write(1));
  EXPECT_TRUE(m.tracking_set(0).valid());
}

TEST(Invalidation, DirectAccessAfterInvalidationAborts) {
  auto m = make();
  m.hw_begin(0);
  m.hw_cached(0, b0, Rmw::read());
  m.apply_rmw(1, b0, Rmw::write(5));
  const Word before = m.peek(b1);
  auto r = m.hw_direct(0, b1, Rmw::write(before + 1));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(*r.abort, HwAbortCause::tracking);
  EXPECT_EQ(m.peek(b1), before);
}

TEST(Invalidation, AbortHygiene) {
  auto m = make();
  m.poke(b0, 1);
  m.hw_begin(1);
  m.hw_cached(1, b0, Rmw::write(7));
  m.hw_cached(1, b1, Rmw::write(8));
  m.apply_rmw(0, b0, Rmw::read());
  ASSERT_FALSE(m.hw_cached(1, b2, Rmw::read()).ok());
  EXPECT_TRUE(m.tracking_set(1).empty());
  EXPECT_EQ(m.peek(b0), 1u);
  EXPECT_EQ(m.peek(b1), 0u);
  // Further accesses keep failing until the transaction ends.
  EXPECT_FALSE(m.hw_cached(1, b2, Rmw::read()).ok());
  EXPECT_FALSE(m.hw_commit(1).ok());
  m.hw_begin(1);
  EXPECT_TRUE(m.hw_cached(1, b2, Rmw::read()).ok());
}

// Capacity
TEST(Capacity, AbortAtTsPlusOneDistinctBases) {
  Machine m(MachineConfig{16, 1, 4, 0.0, 1, true});
  m.hw_begin(0);
  m.hw_set_multi_object(0, true);
  for (std::uint32_t b = 0; b < 4; ++b) ASSERT_TRUE(m.hw_cached(0, BaseId{b}, Rmw::read()).ok());
  // Re-accessing tracked bases never overflows.
  ASSERT_TRUE(m.hw_cached(0, BaseId{2}, Rmw::write(1)).ok());
  auto r = m.hw_cached(0, BaseId{4}, Rmw::read());
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(*r.abort, HwAbortCause::capacity);
  EXPECT_EQ(m.history().events().back().kind, EventKind::capacity_abort);
  EXPECT_TRUE(m.tracking_set(0).empty());
}

TEST(Capacity, SingleObjectTransactionsAreExempt) {
  Machine m(MachineConfig{16, 1, 4, 0.0, 1, true});
  m.hw_begin(0);
  for (std::uint32_t b = 0; b < 10; ++b) ASSERT_TRUE(m.hw_cached(0, BaseId{b}, Rmw::read()).ok());
  EXPECT_EQ(m.tracking_set(0).size(), 10u);
}

TEST(Capacity, DefaultTs64) {
  Machine m(MachineConfig{128, 1, 64, 0.0, 1, true});
  m.hw_begin(0);
  m.hw_set_multi_object(0, true);
  for (std::uint32_t b = 0; b < 64; ++b) ASSERT_TRUE(m.hw_cached(0, BaseId{b}, Rmw::read()).ok());
  auto r = m.hw_cached(0, BaseId{64}, Rmw::read());
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(*r.abort, HwAbortCause::capacity);
}

TEST(Capacity, DirectAccessesNeverCount) {
  Machine m(MachineConfig{16, 1, 2, 0.0, 1, true});
  m.hw_begin(0);
  m.hw_set_multi_object(0, true);
  for (std::uint32_t b = 0; b < 10; ++b) m.hw_direct(0, BaseId{b}, Rmw::read());
  EXPECT_TRUE(m.hw_cached(0, b0, Rmw::read()).ok());
}

TEST(Spurious, ZeroNeverFiresOneAlwaysFires) {
  auto m0 = make(1, 64, 0.0);
  m0.hw_begin(0);
  for (int i = 0; i < 1000; ++i) ASSERT_TRUE(m0.hw_cached(0, b0, Rmw::read()).ok());
  auto m1 = make(1, 64, 1.0);
  m1.hw_begin(0);
  auto r = m1.hw_cached(0, b0, Rmw::read());
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(*r.abort, HwAbortCause::spurious);
  EXPECT_THROW(make(1, 64, 1.5), ModelViolation);
}

TEST(Spurious, DeterministicPerSeed) {
  auto run = [](std::uint64_t seed) {
    Machine m(MachineConfig{4, 1, 64, 0.3, seed, true});
    std::vector<int> out;
    for (int i = 0; i < 200; ++i) {
      m.hw_begin(0);
      out.push_back(m.hw_cached(0, b0, Rmw::read()).ok());
      m.hw_discard(0);
    }
    return out;
  };
  EXPECT_EQ(run(5), run(5));
  EXPECT_NE(run(5), run(6));
}

TEST(Meter, CountsDistinctBasesOfOwnPrimitives) {
  auto m = make();
  m.meter_begin(0);
  m.apply_rmw(0, b0, Rmw::read());
  m.apply_rmw(0, b0, Rmw::read());
  m.apply_rmw(1, b1, Rmw::read());
  m.apply_rmw(0, b2, Rmw::read());
  EXPECT_EQ(m.meter_end(0), 2u);
}
