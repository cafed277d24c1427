#pragma once

// Deterministic cooperative scheduling of simulated processes.

#include <charconv>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hytm/machine.hpp"
#include "hytm/process.hpp"

namespace hytm {

/// An operation exceeded its step allowance; reported, never silently retried.
class LivenessBudgetExceeded : public std::runtime_error {
 public:
  LivenessBudgetExceeded(Pid pid, std::uint64_t steps)
      : std::runtime_error("process " + std::to_string(pid) + " exceeded the liveness budget of " +
                           std::to_string(steps) + " steps"),
        pid(pid) {}
  Pid pid;
};

/// Either an explicit pid list (one entry per step) or a seeded uniform random choice.
struct Schedule {
  std::vector<Pid> pids;
  std::optional<std::uint64_t> seed;
  std::size_t max_steps = 1'000'000;

  static Schedule random(std::uint64_t seed, std::size_t max_steps = 1'000'000) {
    Schedule s;
    s.seed = seed;
    s.max_steps = max_steps;
    return s;
  }
  static Schedule list(std::vector<Pid> pids) {
    Schedule s;
    s.pids = std::move(pids);
    return s;
  }

  /// Parses "seed:<u64>" or a whitespace-separated pid list.
  static Schedule parse(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    Schedule s;
    while (in >> tok) {
      if (tok.starts_with("seed:")) {
        std::uint64_t v = 0;
        auto body = tok.substr(5);
        auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
        if (ec != std::errc{} || ptr != body.data() + body.size()) {
          throw std::invalid_argument("bad seed '" + tok + "'");
        }
        s.seed = v;
        continue;
      }
      unsigned v = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || ptr != tok.data() + tok.size() || v > 0xFFFF) {
        throw std::invalid_argument("bad pid '" + tok + "'");
      }
      s.pids.push_back(static_cast<Pid>(v));
    }
    if (s.seed && !s.pids.empty()) throw std::invalid_argument("schedule mixes seed and pid list");
    return s;
  }
};

struct RunResult {
  std::size_t steps = 0;
  bool truncated = false;
  std::vector<std::string> warnings;
};

class Scheduler {
 public:
  explicit Scheduler(Machine& m) : machine_(&m) {}

  Machine& machine() const { return *machine_; }

  /// Creates the process with the next pid. Start it with Process::start.
  Process& add_process() {
    if (procs_.size() >= machine_->processes()) {
      throw ModelViolation("more processes than the machine was configured for");
    }
    procs_.push_back(std::make_unique<Process>(*machine_, static_cast<Pid>(procs_.size())));
    return *procs_.back();
  }

  Process& process(Pid pid) { return *procs_.at(pid); }
  std::size_t size() const { return procs_.size(); }
  std::size_t steps() const { return steps_; }

  /// Per-operation step allowance; 0 disables the check.
  void set_op_budget(std::uint64_t steps) { op_budget_ = steps; }

  bool runnable(Pid pid) const { return pid < procs_.size() && !procs_[pid]->finished(); }
  bool all_finished() const {
    for (const auto& p : procs_) {
      if (!p->finished()) return false;
    }
    return true;
  }

  /// One scheduling decision for `pid`: at most one primitive. False if the process is finished.
  bool step(Pid pid) {
    Process& p = *procs_.at(pid);
    if (p.finished()) return false;
    ++steps_;
    if (!p.has_pending()) {
      p.advance();
      if (!p.has_pending()) return true;
    }
    p.execute_pending();
    p.advance();
    if (op_budget_ && ++p.op_steps > op_budget_) throw LivenessBudgetExceeded(pid, op_budget_);
    return true;
  }

  /// Steps `pid` alone until `done()` holds or the process finishes. Returns steps taken.
  template <class Pred>
  std::size_t run_solo(Pid pid, Pred done, std::size_t max_steps = 1'000'000) {
    std::size_t n = 0;
    while (!done() && runnable(pid)) {
      if (n++ >= max_steps) throw LivenessBudgetExceeded(pid, max_steps);
      step(pid);
    }
    return n;
  }

  RunResult run(const Schedule& s) {
    RunResult r;
    if (!s.seed) {
      for (Pid pid : s.pids) {
        if (!runnable(pid)) {
          r.warnings.push_back("step for finished or unknown process " + std::to_string(pid) +
                               " skipped");
          continue;
        }
        step(pid);
        ++r.steps;
      }
      return r;
    }
    std::mt19937_64 rng(*s.seed);
    std::vector<Pid> live;
    while (true) {
      live.clear();
      for (Pid pid = 0; pid < procs_.size(); ++pid) {
        if (runnable(pid)) live.push_back(pid);
      }
      if (live.empty()) break;
      if (r.steps >= s.max_steps) {
        r.truncated = true;
        break;
      }
      Pid pick = live[std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(rng)];
      step(pick);
      ++r.steps;
    }
    return r;
  }

 private:
  Machine* machine_;
  std::vector<std::unique_ptr<Process>> procs_;
  std::size_t steps_ = 0;
  std::uint64_t op_budget_ = 0;
};

/// Visits every maximal interleaving of a freshly built simulation, by replay.
///
/// `make` returns an owning handle whose `scheduler()` yields a Scheduler
/// with all processes started. `visit(handle, schedule)` is called once per
/// complete interleaving. Returns the number of interleavings.
template <class Make, class Visit>
std::size_t enumerate_interleavings(Make make, Visit visit, std::size_t max_depth = 64) {
  std::size_t count = 0;
  std::vector<std::vector<Pid>> stack{{}};
  while (!stack.empty()) {
    auto prefix = std::move(stack.back());
    stack.pop_back();
    auto world = make();
    Scheduler& sched = world->scheduler();
    for (Pid pid : prefix) sched.step(pid);
    std::vector<Pid> live;
    for (Pid pid = 0; pid < sched.size(); ++pid) {
      if (sched.runnable(pid)) live.push_back(pid);
    }
    if (live.empty() || prefix.size() >= max_depth) {
      ++count;
      visit(*world, prefix);
      continue;
    }
    for (auto it = live.rbegin(); it != live.rend(); ++it) {
      auto next = prefix;
      next.push_back(*it);
      stack.push_back(std::move(next));
    }
  }
  return count;
}

}  // namespace hytm
