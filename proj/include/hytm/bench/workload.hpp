#pragma once

// BST microbenchmark driver: prefill to steady state, then measure. Deterministic
// mode interleaves workers under a seeded scheduler and counts steps; threaded
// mode runs one OS thread per worker, each step taken under a single gate.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "hytm/bench/bst.hpp"
#include "hytm/world.hpp"

namespace hytm::bench {

enum class Workload : std::uint8_t { w1, w2 };
enum class RunMode : std::uint8_t { deterministic, threaded };

inline std::string_view to_string(Workload w) { return w == Workload::w1 ? "W1" : "W2"; }
inline std::string_view to_string(RunMode m) { return m == RunMode::deterministic ? "deterministic" : "threaded"; }

struct WorkloadConfig {
  std::string alg = "alg1";
  RunMode mode = RunMode::deterministic;
  Workload workload = Workload::w1;
  unsigned update_percent = 10;
  std::size_t keys = 10'000;
  std::size_t threads = 4;
  std::size_t ops = 20'000;      // measured operations
  std::size_t range_width = 0;   // 0: keys / 100
  std::uint64_t seed = 1;
  std::size_t tracking_capacity = 64;
  double spurious_probability = 0.0;
  bool fast_fast = false;
  std::uint32_t max_fast_attempts = 20;
  unsigned lock_bits = 20;
  std::uint64_t op_step_budget = 5'000'000;
  bool prefill = true;
  bool record_ops = false;
  Alg1Options alg1;

  std::size_t width() const { return range_width ? range_width : std::max<std::size_t>(1, keys / 100); }
  /// Throws std::invalid_argument describing the first bad field.
  void validate() const {
    if (update_percent > 100) throw std::invalid_argument("update rate must be in [0, 100]");
    if (keys < 2) throw std::invalid_argument("key range must hold at least 2 keys");
    if (threads < 1) throw std::invalid_argument("at least one thread is required");
    if (workload == Workload::w2 && threads < 2) throw std::invalid_argument("W2 needs at least 2 threads");
    if (width() > keys) throw std::invalid_argument("range width exceeds the key range");
    if (threads > 0xFFFF) throw std::invalid_argument("too many threads");
  }
};

struct OpRecord {
  Pid pid = 0;
  bool measured = false;
  BstOp op;
  BstResult result;
  std::uint64_t start = 0;  // machine clock when the operation began
  std::uint64_t end = 0;    // machine clock at the committing response
  Path path = Path::slow;
};

struct MetricsRecord {
  WorkloadConfig config;
  bool failed = false;
  std::string failure;
  std::uint64_t prefill_ops = 0;
  std::uint64_t ops = 0;
  std::uint64_t steps = 0;
  double seconds = 0.0;
  TxStats stats;
  std::size_t final_size = 0;
  std::vector<OpRecord> log;

  std::uint64_t commits() const { return stats.total_commits(); }
  double slow_fraction() const {
    return ops ? static_cast<double>(stats.commits[path_slot(Path::slow)]) / static_cast<double>(ops) : 0.0;
  }
  /// Operations per 10^6 scheduler steps, or per second in threaded mode.
  double throughput() const {
    if (config.mode == RunMode::threaded) return seconds > 0 ? static_cast<double>(ops) / seconds : 0.0;
    return steps ? static_cast<double>(ops) * 1e6 / static_cast<double>(steps) : 0.0;
  }
  /// Nearest-rank percentile of distinct base objects per t-read.
  std::uint32_t footprint_percentile(double q) const {
    const auto& f = stats.read_footprints;
    if (f.empty()) return 0;
    std::vector<std::uint32_t> v(f.begin(), f.end());
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
    const auto idx = std::min(v.size() - 1, rank == 0 ? 0 : rank - 1);
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(idx), v.end());
    return v[idx];
  }
};

namespace detail {

struct Bench {
  const WorkloadConfig& cfg;
  BstLayout layout;
  World world;
  NodePool pool;
  RetryPolicy policy;
  std::vector<std::mt19937_64> rngs;
  std::vector<TxStats> stats;

  bool measuring = false;
  bool stop = false;
  bool converged = false;
  std::int64_t size = 0;
  std::uint64_t prefill_done = 0;
  unsigned stable_windows = 0;
  std::uint64_t started = 0;
  std::uint64_t completed = 0;
  std::vector<OpRecord> log;

  static WorldConfig world_config(const WorkloadConfig& c, const BstLayout& l) {
    WorldConfig wc;
    wc.alg = c.alg;
    wc.tobjects = l.tobjects();
    wc.lock_bits = c.lock_bits;
    wc.processes = c.threads;
    wc.tracking_capacity = c.tracking_capacity;
    wc.spurious_probability = c.spurious_probability;
    wc.seed = c.seed;
    wc.record_history = false;
    wc.alg1 = c.alg1;
    return wc;
  }

  explicit Bench(const WorkloadConfig& c)
      : cfg(c),
        layout{c.keys + 2 * c.threads + 2},
        world(world_config(c, layout)),
        pool(layout.capacity),
        policy{c.max_fast_attempts, c.fast_fast},
        stats(c.threads) {
    for (std::size_t p = 0; p < c.threads; ++p) {
      std::seed_seq seq{c.seed, static_cast<std::uint64_t>(p), std::uint64_t{0x5EED}};
      rngs.emplace_back(seq);
    }
    world.scheduler().set_op_budget(c.op_step_budget);
  }

  std::uint64_t prefill_window() const { return std::max<std::uint64_t>(10, cfg.keys / 10); }
  std::uint64_t prefill_cap() const { return 200 * static_cast<std::uint64_t>(cfg.keys) + 10'000; }

  BstOp next_op(Pid pid) {
    auto& rng = rngs[pid];
    auto key = [&] { return std::uniform_int_distribution<Word>(0, cfg.keys - 1)(rng); };
    BstOp op;
    if (!measuring) {
      op.kind = std::bernoulli_distribution(0.5)(rng) ? OpKind::insert : OpKind::erase;
      op.key = key();
      op.value = rng() >> 16;
      return op;
    }
    if (cfg.workload == Workload::w2 && pid == 0) {
      op.kind = OpKind::range_increment;
      op.key = std::uniform_int_distribution<Word>(0, cfg.keys - cfg.width())(rng);
      op.hi = op.key + cfg.width() - 1;
      return op;
    }
    const double x = std::uniform_real_distribution<double>(0.0, 100.0)(rng);
    const double u = cfg.update_percent;
    op.kind = x < u / 2 ? OpKind::insert : (x < u ? OpKind::erase : OpKind::search);
    op.key = key();
    op.value = rng() >> 16;
    return op;
  }

  bool more_work() {
    if (stop) return false;
    if (!measuring) return !converged && prefill_done < prefill_cap();
    if (started >= cfg.ops) return false;
    ++started;
    return true;
  }

  void after_prefill_op(const BstCall& c) {
    if (c.op.kind == OpKind::insert && !c.result.found) ++size;
    if (c.op.kind == OpKind::erase && c.result.found) --size;
    if (++prefill_done % prefill_window() != 0) return;
    const double target = static_cast<double>(cfg.keys) / 2.0;
    const double tol = std::max(0.05 * target, 1.0);
    stable_windows = std::abs(static_cast<double>(size) - target) <= tol ? stable_windows + 1 : 0;
    if (stable_windows >= 2) converged = true;
  }

  Task<void> worker(Pid pid) {
    Process& proc = world.process(pid);
    Machine& m = world.machine();
    while (more_work()) {
      BstCall call;
      call.op = next_op(pid);
      const std::uint64_t start = m.clock();
      Program prog = bst_program(call, pool, layout.capacity);
      const RunOutcome out = co_await run_transaction(proc, world.algorithm(), prog, policy, stats[pid]);
      bst_settle(call, pool);
      if (cfg.record_ops) log.push_back({pid, measuring, call.op, call.result, start, out.commit_clock, out.path});
      if (measuring) {
        ++completed;
      } else {
        after_prefill_op(call);
      }
    }
  }

  void start_workers() {
    for (Pid p = 0; p < cfg.threads; ++p) world.process(p).start(worker(p));
  }

  /// Runs until every worker exits. Returns the failure message, if any.
  std::string run_phase(std::uint64_t phase_seed) {
    start_workers();
    try {
      if (cfg.mode == RunMode::deterministic) {
        world.scheduler().run(Schedule::random(phase_seed, std::numeric_limits<std::size_t>::max()));
      } else {
        run_threads();
      }
    } catch (const std::exception& e) {
      return e.what();
    }
    return {};
  }

  void run_threads() {
    std::mutex gate;
    std::string error;
    std::vector<std::thread> threads;
    Scheduler& s = world.scheduler();
    for (Pid p = 0; p < cfg.threads; ++p) {
      threads.emplace_back([&, p] {
        try {
          while (true) {
            std::lock_guard lock(gate);
            if (!s.runnable(p) || stop) break;
            s.step(p);
          }
        } catch (const std::exception& e) {
          std::lock_guard lock(gate);
          if (error.empty()) error = e.what();
          stop = true;
        }
      });
    }
    for (auto& t : threads) t.join();
    if (!error.empty()) throw std::runtime_error(error);
  }
};

}  // namespace detail

inline MetricsRecord run_workload(const WorkloadConfig& cfg) {
  cfg.validate();
  MetricsRecord rec;
  rec.config = cfg;
  detail::Bench b(cfg);

  if (cfg.prefill) {
    if (auto err = b.run_phase(cfg.seed ^ 0xF111); !err.empty()) {
      rec.failed = true;
      rec.failure = "prefill: " + err;
    } else if (!b.converged) {
      rec.failed = true;
      rec.failure = "prefill did not reach steady state";
    }
  }
  rec.prefill_ops = b.prefill_done;
  if (!rec.failed) {
    b.measuring = true;
    for (auto& s : b.stats) {
      s = TxStats{};
      s.collect_footprints = true;
    }
    const auto steps0 = b.world.scheduler().steps();
    const auto t0 = std::chrono::steady_clock::now();
    if (auto err = b.run_phase(cfg.seed); !err.empty()) {
      rec.failed = true;
      rec.failure = err;
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.steps = b.world.scheduler().steps() - steps0;
    for (const auto& s : b.stats) rec.stats.merge(s);
    rec.ops = b.completed;
  }
  if (!rec.failed) {
    Machine& m = b.world.machine();
    const Layout& lay = b.world.layout();
    auto peek = [&](TObj x) { return m.peek(lay.value(x)); };
    try {
      rec.final_size = bst_snapshot(peek, b.layout.capacity).size();
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.failure = e.what();
    }
  }
  rec.log = std::move(b.log);
  return rec;
}

}  // namespace hytm::bench
