#include <gtest/gtest.h>

#include <map>

#include "hytm/campaign.hpp"
#include "hytm/check/transactions.hpp"

using namespace hytm;

namespace {

CampaignConfig config(const std::string& alg) {
  CampaignConfig c;
  c.alg = alg;
  return c;
}

std::string describe(const CampaignReport& r) {
  if (!r.first_failure) return "clean";
  return "seed " + std::to_string(r.first_failure->seed) + ": " + r.first_failure->what;
}

}  // namespace

class EveryAlgorithm : public ::testing::TestWithParam<std::string> {};

TEST_P(EveryAlgorithm, RandomSchedulesAreOpaque) {
  auto r = run_campaign(config(GetParam()), 1, 300, {CampaignCheck::opacity, CampaignCheck::invisible});
  EXPECT_TRUE(r.clean()) << describe(r);
  EXPECT_EQ(r.opaque, 300u);
}

TEST_P(EveryAlgorithm, StressedHardwareStaysOpaque) {
  auto cfg = config(GetParam());
  cfg.stress = true;
  cfg.fast_fast = true;
  auto r = run_campaign(cfg, 5000, 200, {CampaignCheck::opacity});
  EXPECT_TRUE(r.clean()) << describe(r);
}

/// A reader appended after the run that observes final memory must keep the history opaque.
TEST_P(EveryAlgorithm, MemoryHoldsOnlyCommittedWrites) {
  auto cfg = config(GetParam());
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto inst = generate_instance(cfg, seed);
    History h = inst.history;
    TxnId last = 0;
    for (const auto& e : h) last = std::max(last, e.txn);
    const Layout& lay = inst.world->layout();
    auto push = [&](EventKind k, std::optional<std::uint32_t> base, Word v) {
      Event e;
      e.pid = static_cast<Pid>(cfg.processes);
      e.txn = last + 1;
      e.kind = k;
      e.base = base;
      e.value = v;
      if (k == EventKind::begin) e.path = Path::slow;
      h.append(e);
    };
    push(EventKind::begin, std::nullopt, 0);
    for (std::uint32_t x = 0; x < cfg.tobjects; ++x) {
      push(EventKind::inv_read, x, 0);
      push(EventKind::res_read, std::nullopt, inst.world->machine().peek(lay.value(TObj{x})));
    }
    push(EventKind::inv_tryc, std::nullopt, 0);
    push(EventKind::res_commit, std::nullopt, 0);
    EXPECT_EQ(check_opacity(h).verdict, Verdict::opaque) << "seed " << seed;
  }
}

TEST(Campaign, FinalMemoryOracleDetectsLostWrites) {
  auto inst = generate_instance(config("alg1"), 3);
  History h = inst.history;
  bool any_commit_write = false;
  for (const auto& t : extract_transactions(h)) {
    if (t.status != TxnStatus::committed) continue;
    for (const auto& op : t.ops) any_commit_write |= op.kind == TOp::Kind::write;
  }
  ASSERT_TRUE(any_commit_write);
  TxnId last = 0;
  for (const auto& e : h) last = std::max(last, e.txn);
  Event e;
  e.pid = 3;
  e.txn = last + 1;
  e.kind = EventKind::begin;
  e.path = Path::slow;
  h.append(e);
  for (std::uint32_t x = 0; x < 4; ++x) {
    e.kind = EventKind::inv_read;
    e.base = x;
    h.append(e);
    e.kind = EventKind::res_read;
    e.base.reset();
    e.value = 0;
    h.append(e);
  }
  e.kind = EventKind::inv_tryc;
  h.append(e);
  e.kind = EventKind::res_commit;
  h.append(e);
  EXPECT_EQ(check_opacity(h).verdict, Verdict::not_opaque);
}

INSTANTIATE_TEST_SUITE_P(Algorithms, EveryAlgorithm,
                         ::testing::Values("alg1", "alg2", "tle", "hynorec", "hynorec-star", "tl2"));

TEST(Campaign, Alg1IsProgressiveWithInvisibleReads) {
  auto r = run_campaign(config("alg1"), 1, 500,
                        {CampaignCheck::progress_all, CampaignCheck::invisible, CampaignCheck::witness});
  EXPECT_TRUE(r.clean()) << describe(r);
  EXPECT_EQ(r.witness_agreements, 500u);
}

TEST(Campaign, Alg2IsProgressiveOnlyForSlowReaders) {
  auto slow = run_campaign(config("alg2"), 1, 500, {CampaignCheck::progress_slow_readers});
  EXPECT_TRUE(slow.clean()) << describe(slow);
  auto all = run_campaign(config("alg2"), 1, 500, {CampaignCheck::progress_all});
  EXPECT_GT(all.progress_violations, 0u);
}

TEST(Campaign, SkippingValidationBreaksOpacity) {
  auto cfg = config("alg1");
  cfg.alg1.skip_validate = true;
  auto r = run_campaign(cfg, 1, 500, {CampaignCheck::opacity});
  EXPECT_GT(r.not_opaque, 0u);
  ASSERT_TRUE(r.first_failure);
}

TEST(Campaign, WitnessIsSoundOnBrokenRuns) {
  auto cfg = config("alg1");
  cfg.alg1.skip_validate = true;
  std::size_t reports = 0;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    auto inst = generate_instance(cfg, seed);
    auto w = witness_serialize_alg1(inst.history, inst.world->layout());
    if (!w.ok) {
      ++reports;
      continue;
    }
    EXPECT_EQ(check_opacity(inst.history).verdict, Verdict::opaque) << "seed " << seed;
  }
  EXPECT_GT(reports, 0u);
}

TEST(Campaign, IgnoringHeldLocksOnReadBreaksOpacity) {
  auto cfg = config("alg1");
  cfg.alg1.skip_read_lock_check = true;
  auto r = run_campaign(cfg, 1, 10000, {CampaignCheck::opacity});
  EXPECT_GT(r.not_opaque, 0u);
}

TEST(Campaign, InstancesAreDeterministic) {
  auto cfg = config("hynorec");
  EXPECT_EQ(generate_instance(cfg, 77).history, generate_instance(cfg, 77).history);
}

TEST(Campaign, FailingHistoryRoundTrips) {
  auto cfg = config("alg1");
  cfg.alg1.skip_validate = true;
  auto r = run_campaign(cfg, 1, 500, {CampaignCheck::opacity});
  ASSERT_TRUE(r.first_failure);
  std::stringstream ss;
  write_history(ss, r.first_failure->history);
  auto back = read_history(ss);
  EXPECT_EQ(check_opacity(back).verdict, Verdict::not_opaque);
}
