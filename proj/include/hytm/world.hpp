#pragma once

// A self-contained simulation: layout, machine, algorithm and scheduler.

#include <memory>
#include <string>
#include <vector>

#include "hytm/alg/registry.hpp"
#include "hytm/scheduler.hpp"

namespace hytm {

struct WorldConfig {
  std::string alg = "alg1";
  std::size_t tobjects = 4;
  unsigned lock_bits = 12;
  std::size_t processes = 2;
  std::size_t tracking_capacity = 64;
  double spurious_probability = 0.0;
  std::uint64_t seed = 0;
  bool record_history = true;
  Alg1Options alg1;
};

class World {
 public:
  explicit World(const WorldConfig& cfg)
      : cfg_(cfg),
        layout_(cfg.tobjects, cfg.lock_bits),
        machine_(MachineConfig{layout_.memory_size(), cfg.processes, cfg.tracking_capacity,
                               cfg.spurious_probability, cfg.seed, cfg.record_history}),
        alg_(make_algorithm(cfg.alg, layout_, cfg.alg1)),
        sched_(machine_),
        stats_(cfg.processes) {
    for (std::size_t i = 0; i < cfg.processes; ++i) sched_.add_process();
  }
  World(const World&) = delete;
  World& operator=(const World&) = delete;

  const WorldConfig& config() const { return cfg_; }
  const Layout& layout() const { return layout_; }
  Machine& machine() { return machine_; }
  Algorithm& algorithm() { return *alg_; }
  Scheduler& scheduler() { return sched_; }
  Process& process(Pid pid) { return sched_.process(pid); }
  TxStats& stats(Pid pid) { return stats_.at(pid); }

  TxStats merged_stats() const {
    TxStats all;
    for (const auto& s : stats_) all.merge(s);
    return all;
  }

  Word value(TObj x) const { return machine_.peek(layout_.value(x)); }

 private:
  WorldConfig cfg_;
  Layout layout_;
  Machine machine_;
  std::unique_ptr<Algorithm> alg_;
  Scheduler sched_;
  std::vector<TxStats> stats_;
};

/// One scripted t-operation.
struct OpSpec {
  bool write = false;
  std::uint32_t obj = 0;
  Word value = 0;
};

/// Executes a fixed operation list; returns the sum of values read.
inline Task<Word> run_ops(Tx& tx, const std::vector<OpSpec>* ops) {
  Word sum = 0;
  for (const auto& op : *ops) {
    if (op.write) {
      co_await tx.write(TObj{op.obj}, op.value);
    } else {
      sum += co_await tx.read(TObj{op.obj});
    }
  }
  co_return sum;
}

inline Program scripted(const std::vector<OpSpec>& ops) {
  return [p = &ops](Tx& tx) { return run_ops(tx, p); };
}

struct ScriptedTxn {
  std::vector<OpSpec> ops;
  Path path = Path::slow;
};

/// Runs each transaction once on its chosen path; outcomes are appended to `out` if given.
inline Task<void> run_scripted(Process& proc, Algorithm& alg, std::vector<ScriptedTxn> txns,
                               TxStats& stats, bool fast_fast, std::vector<AttemptOutcome>* out) {
  for (const auto& t : txns) {
    Program prog = scripted(t.ops);
    auto o = co_await attempt(proc, alg, prog, t.path, stats, fast_fast);
    if (out) out->push_back(o);
  }
}

}  // namespace hytm
