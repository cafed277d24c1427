#include <gtest/gtest.h>

#include <random>

#include "hytm/word.hpp"

using namespace hytm;

TEST(SeqLock, PackUnpackRoundTrip) {
  std::mt19937_64 rng(7);
  for (int n = 0; n < (1 << 16); ++n) {
    const Word w = rng();
    const SeqLock s(w);
    const auto back = SeqLock::make(s.sequence(), s.locked(), s.owner());
    ASSERT_EQ(back.raw(), w) << std::hex << w;
  }
}

TEST(SeqLock, FieldLayout) {
  const auto s = SeqLock::make(3, true, 2);
  EXPECT_EQ(s.raw(), (Word{3} << 17) | (Word{2} << 1) | 1);
  EXPECT_TRUE(s.locked());
  EXPECT_EQ(s.owner(), 2);
  EXPECT_EQ(s.sequence(), 3u);
}

TEST(SeqLock, TryLockUnlocked) {
  auto l = SeqLock::make(3).try_lock(2);
  ASSERT_TRUE(l);
  EXPECT_EQ(*l, SeqLock::make(3, true, 2));
}

TEST(SeqLock, TryLockHeldFails) {
  EXPECT_FALSE(SeqLock::make(3, true, 2).try_lock(1));
  const Word w = SeqLock::make(3, true, 2).raw();
  auto out = evaluate(Rmw::try_lock(1), w);
  EXPECT_EQ(out.next, w);
  EXPECT_FALSE(out.changed);
}

TEST(SeqLock, IncSequencePreservesLock) {
  EXPECT_EQ(SeqLock::make(3, true, 2).inc_sequence(), SeqLock::make(4, true, 2));
  EXPECT_EQ(SeqLock::make(3).inc_sequence(), SeqLock::make(4));
}

TEST(SeqLock, UnlockKeepsSequenceAndUnlockIncrementBumpsIt) {
  const auto held = *SeqLock::make(9).try_lock(5);
  EXPECT_EQ(held.unlock(5), SeqLock::make(9));
  EXPECT_EQ(held.unlock_increment(5), SeqLock::make(10));
}

TEST(SeqLock, LockUnlockPairRestoresSequence) {
  const auto w = SeqLock::make(41);
  EXPECT_EQ(w.try_lock(3)->unlock(3).sequence(), w.sequence());
  EXPECT_EQ(w.try_lock(3)->unlock(3), w);
}

TEST(SeqLock, UnlockByNonOwnerIsFatal) {
  const auto held = *SeqLock::make(1).try_lock(2);
  EXPECT_THROW(held.unlock(1), ModelViolation);
  EXPECT_THROW(held.unlock_increment(1), ModelViolation);
  EXPECT_THROW(SeqLock::make(1).unlock(1), ModelViolation);
  EXPECT_THROW(evaluate(Rmw::unlock(1), held.raw()), ModelViolation);
}

TEST(Rmw, Triviality) {
  EXPECT_FALSE(evaluate(Rmw::read(), 5).changed);
  EXPECT_EQ(evaluate(Rmw::read(), 5).next, 5u);
  EXPECT_FALSE(evaluate(Rmw::cas(5, 5), 5).changed);
  EXPECT_FALSE(evaluate(Rmw::cas(4, 9), 5).changed);
  EXPECT_TRUE(evaluate(Rmw::cas(5, 9), 5).changed);
  EXPECT_TRUE(evaluate(Rmw::fetch_add(1), 7).changed);
  EXPECT_EQ(evaluate(Rmw::fetch_add(1), 7).next, 8u);
  EXPECT_FALSE(evaluate(Rmw::fetch_add(0), 7).changed);
  EXPECT_FALSE(evaluate(Rmw::write(5), 5).changed);
  EXPECT_TRUE(evaluate(Rmw::write(6), 5).changed);
  EXPECT_TRUE(evaluate(Rmw::inc_sequence(), 0).changed);
}

TEST(Rmw, TrivialPrimitivesAreIdempotentOnSnapshots) {
  std::mt19937_64 rng(3);
  const Rmw ops[] = {Rmw::read(), Rmw::write(17), Rmw::cas(17, 4), Rmw::fetch_add(0), Rmw::try_lock(3)};
  for (int n = 0; n < 10000; ++n) {
    const Word w = rng() % 4 == 0 ? 17 : rng();
    for (const auto& op : ops) {
      const auto first = evaluate(op, w);
      if (!first.changed) {
        EXPECT_EQ(evaluate(op, w).next, w);
      }
    }
  }
}

TEST(Rmw, KindNamesRoundTrip) {
  for (auto k : {RmwKind::read, RmwKind::write, RmwKind::compare_and_swap, RmwKind::fetch_and_add,
                 RmwKind::try_lock, RmwKind::unlock, RmwKind::unlock_increment, RmwKind::inc_sequence}) {
    EXPECT_EQ(rmw_kind_from_string(to_string(k)), k);
  }
  EXPECT_FALSE(rmw_kind_from_string("swap"));
}
