#include <gtest/gtest.h>

#include <set>

#include "hytm/scheduler.hpp"

using namespace hytm;

namespace {

/// `steps` direct reads of base 0 (or increments when `write`).
Task<void> ticker(Process& p, int steps, bool write) {
  for (int i = 0; i < steps; ++i) {
    co_await p.direct(BaseId{0}, write ? Rmw::fetch_add(1) : Rmw::read());
  }
}

struct Sim {
  Machine machine;
  Scheduler sched;
  Sim(std::vector<int> lengths, bool write = false)
      : machine(MachineConfig{4, lengths.size(), 64, 0.0, 1, true}), sched(machine) {
    for (int n : lengths) {
      auto& p = sched.add_process();
      p.start(ticker(p, n, write));
    }
  }
  Scheduler& scheduler() { return sched; }
};

std::size_t binomial(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(Scheduler, SoloRunMatchesProgram) {
  Sim s({3});
  auto r = s.sched.run(Schedule::list({0, 0, 0}));
  EXPECT_EQ(r.steps, 3u);
  EXPECT_TRUE(s.sched.all_finished());
  EXPECT_EQ(s.machine.history().size(), 3u);
}

TEST(Scheduler, OnePrimitivePerStep) {
  Sim s({2, 2}, true);
  s.sched.step(1);
  EXPECT_EQ(s.machine.history().size(), 1u);
  EXPECT_EQ(s.machine.history()[0].pid, 1);
  s.sched.step(0);
  s.sched.step(1);
  EXPECT_EQ(s.machine.history().size(), 3u);
  EXPECT_TRUE(s.sched.process(1).finished());
  EXPECT_EQ(s.machine.peek(BaseId{0}), 3u);
}

TEST(Scheduler, FinishedProcessStepsAreSkippedWithWarning) {
  Sim s({1, 1});
  auto r = s.sched.run(Schedule::list({0, 0, 1, 5}));
  EXPECT_EQ(r.steps, 2u);
  EXPECT_EQ(r.warnings.size(), 2u);
}

TEST(Scheduler, RandomScheduleIsDeterministic) {
  auto run = [](std::uint64_t seed) {
    Sim s({5, 5, 5}, true);
    s.sched.run(Schedule::random(seed));
    return s.machine.history();
  };
  EXPECT_EQ(run(11), run(11));
  EXPECT_NE(run(11), run(12));
}

TEST(Scheduler, StepBudgetTruncates) {
  Sim s({50, 50});
  auto r = s.sched.run(Schedule::random(1, 10));
  EXPECT_TRUE(r.truncated);
  EXPECT_EQ(r.steps, 10u);
}

TEST(Scheduler, LivenessBudget) {
  Sim s({50});
  s.sched.set_op_budget(20);
  EXPECT_THROW(s.sched.run(Schedule::random(1)), LivenessBudgetExceeded);
}

TEST(Scheduler, ScheduleParsing) {
  auto a = Schedule::parse("seed:42");
  ASSERT_TRUE(a.seed);
  EXPECT_EQ(*a.seed, 42u);
  auto b = Schedule::parse("0 1 1\n0");
  EXPECT_EQ(b.pids, (std::vector<Pid>{0, 1, 1, 0}));
  EXPECT_THROW(Schedule::parse("0 x"), std::invalid_argument);
  EXPECT_THROW(Schedule::parse("seed:1 0"), std::invalid_argument);
  EXPECT_THROW(Schedule::parse("seed:abc"), std::invalid_argument);
}

TEST(Enumeration, CountMatchesMultinomial) {
  for (auto [a, b] : {std::pair{1, 1}, {2, 3}, {4, 4}, {6, 5}}) {
    std::set<std::vector<Pid>> seen;
    auto n = enumerate_interleavings(
        [&] { return std::make_unique<Sim>(std::vector<int>{a, b}); },
        [&](Sim& sim, const std::vector<Pid>& sched) {
          EXPECT_TRUE(sim.sched.all_finished());
          seen.insert(sched);
        });
    EXPECT_EQ(n, binomial(a + b, a));
    EXPECT_EQ(seen.size(), n);
  }
}

TEST(Enumeration, EveryInterleavingReachesTheSameTotal) {
  // C(12,6) interleavings; every one observed exactly once.
  std::size_t distinct_final = 0;
  auto n = enumerate_interleavings([] { return std::make_unique<Sim>(std::vector<int>{6, 6}, true); },
                                   [&](Sim& sim, const std::vector<Pid>&) {
                                     distinct_final += sim.machine.peek(BaseId{0}) == 12;
                                   });
  EXPECT_EQ(n, binomial(12, 6));
  EXPECT_EQ(distinct_final, n);
}
