#pragma once

// Random-schedule property campaigns over small instances.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hytm/check/opacity.hpp"
#include "hytm/check/progress.hpp"
#include "hytm/check/witness.hpp"
#include "hytm/world.hpp"

namespace hytm {

struct CampaignConfig {
  std::string alg = "alg1";
  std::size_t processes = 3;
  std::size_t min_txns = 2;
  std::size_t max_txns = 6;
  std::size_t max_ops = 4;
  std::size_t tobjects = 4;
  double read_ratio = 0.6;
  bool fast_fast = false;
  /// Small tracking sets and spurious aborts; for opacity only.
  bool stress = false;
  unsigned lock_bits = 12;
  std::size_t max_steps = 200'000;
  Alg1Options alg1;
  /// Replaces the seeded random interleaving; the seed still picks the programs.
  std::optional<Schedule> schedule;
};

struct Instance {
  History history;
  std::vector<std::vector<ScriptedTxn>> plans;  // per process
  RunResult run;
  std::unique_ptr<World> world;
};

/// Builds and runs the instance for `seed`; deterministic in (config, seed).
inline Instance generate_instance(const CampaignConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  WorldConfig wc;
  wc.alg = cfg.alg;
  wc.tobjects = cfg.tobjects;
  wc.lock_bits = cfg.lock_bits;
  wc.processes = cfg.processes;
  wc.seed = seed;
  wc.alg1 = cfg.alg1;
  if (cfg.stress) {
    wc.tracking_capacity = 3;
    wc.spurious_probability = 0.05;
  }
  Instance inst;
  inst.world = std::make_unique<World>(wc);
  World& w = *inst.world;

  const bool hybrid = w.algorithm().has_fast_path();
  std::vector<Path> paths{Path::slow};
  if (hybrid) paths.push_back(Path::fast);
  if (hybrid && cfg.fast_fast) paths.push_back(Path::fastfast);

  inst.plans.resize(cfg.processes);
  const std::size_t n = uniform(cfg.min_txns, cfg.max_txns);
  for (std::size_t t = 0; t < n; ++t) {
    ScriptedTxn st;
    st.path = paths[uniform(0, paths.size() - 1)];
    const std::size_t ops = uniform(1, cfg.max_ops);
    for (std::size_t k = 0; k < ops; ++k) {
      OpSpec op;
      op.write = std::uniform_real_distribution<double>(0.0, 1.0)(rng) >= cfg.read_ratio;
      op.obj = static_cast<std::uint32_t>(uniform(0, cfg.tobjects - 1));
      op.value = op.write ? (t + 1) * 100 + k + 1 : 0;
      st.ops.push_back(op);
    }
    inst.plans[uniform(0, cfg.processes - 1)].push_back(std::move(st));
  }
  for (Pid pid = 0; pid < cfg.processes; ++pid) {
    w.process(pid).start(run_scripted(w.process(pid), w.algorithm(), inst.plans[pid], w.stats(pid),
                                      cfg.fast_fast, nullptr));
  }
  Schedule sched = Schedule::random(rng(), cfg.max_steps);
  if (cfg.schedule) {
    sched = *cfg.schedule;
    sched.max_steps = cfg.max_steps;
  }
  inst.run = w.scheduler().run(sched);
  inst.history = w.machine().take_history();
  inst.history.truncated = inst.run.truncated;
  return inst;
}

enum class CampaignCheck : std::uint8_t { opacity, progress_all, progress_slow_readers, invisible, witness };

struct CampaignFailure {
  std::uint64_t seed = 0;
  std::string what;
  History history;
};

struct CampaignReport {
  std::size_t runs = 0;
  std::size_t opaque = 0;
  std::size_t not_opaque = 0;
  std::size_t undecided = 0;
  std::size_t truncated = 0;
  std::size_t progress_violations = 0;
  std::size_t invisible_violations = 0;
  std::size_t witness_mismatches = 0;
  std::size_t witness_agreements = 0;
  std::optional<CampaignFailure> first_failure;

  bool clean() const {
    return not_opaque == 0 && undecided == 0 && truncated == 0 && progress_violations == 0 &&
           invisible_violations == 0 && witness_mismatches == 0;
  }
};

/// Runs `seeds` instances starting at `first_seed` and applies the selected checks.
inline CampaignReport run_campaign(const CampaignConfig& cfg, std::uint64_t first_seed, std::size_t seeds,
                                   const std::vector<CampaignCheck>& checks) {
  CampaignReport rep;
  auto fail = [&](std::uint64_t seed, std::string what, const History& h) {
    if (!rep.first_failure) rep.first_failure = CampaignFailure{seed, std::move(what), h};
  };
  for (std::uint64_t s = first_seed; s < first_seed + seeds; ++s) {
    auto inst = generate_instance(cfg, s);
    ++rep.runs;
    const History& h = inst.history;
    if (h.truncated) {
      ++rep.truncated;
      fail(s, "schedule truncated at the step budget", h);
      continue;
    }
    for (auto c : checks) {
      switch (c) {
        case CampaignCheck::opacity: {
          auto r = check_opacity(h);
          if (r.verdict == Verdict::opaque) {
            ++rep.opaque;
          } else if (r.verdict == Verdict::not_opaque) {
            ++rep.not_opaque;
            fail(s, "not opaque: " + r.reason, h);
          } else {
            ++rep.undecided;
            fail(s, r.reason, h);
          }
          break;
        }
        case CampaignCheck::progress_all:
        case CampaignCheck::progress_slow_readers: {
          auto scope = c == CampaignCheck::progress_all ? ProgressScope::all_txns
                                                        : ProgressScope::slow_path_readers;
          if (auto v = check_progressiveness(h, scope)) {
            ++rep.progress_violations;
            fail(s, "progressiveness: " + v->reason, h);
          }
          break;
        }
        case CampaignCheck::invisible:
          if (auto v = check_invisible_reads(h)) {
            ++rep.invisible_violations;
            fail(s, "nontrivial primitive at event " + std::to_string(v->event) +
                        " inside a slow-path read of T" + std::to_string(v->txn),
                 h);
          }
          break;
        case CampaignCheck::witness: {
          auto w = witness_serialize_alg1(h, inst.world->layout());
          auto o = check_opacity(h);
          const bool agree = w.ok == (o.verdict == Verdict::opaque);
          if (agree) {
            ++rep.witness_agreements;
          } else {
            ++rep.witness_mismatches;
            fail(s, "witness " + std::string(w.ok ? "legal" : "illegal: " + w.mismatch) +
                        ", brute force " + std::string(to_string(o.verdict)),
                 h);
          }
          break;
        }
      }
    }
  }
  return rep;
}

}  // namespace hytm
