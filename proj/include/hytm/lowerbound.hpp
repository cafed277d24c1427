#pragma once

// Adversarial executions for the quadratic slow-read lower bound.
//
// For each i, a slow-path reader performs i-1 reads alone, a fast-path writer
// commits a new value to X_i, and the reader then reads X_i. The i-th read's
// footprint is measured on that execution. For small m, every variant with an
// extra committed writer of some earlier X_l is also run, and the reader must
// not return the new value of X_i there.

#include <string>
#include <vector>

#include "hytm/check/progress.hpp"
#include "hytm/world.hpp"

namespace hytm {

enum class BoundVerdict : std::uint8_t { pass, fail, not_applicable };

inline std::string_view to_string(BoundVerdict v) {
  switch (v) {
    case BoundVerdict::pass: return "PASS";
    case BoundVerdict::fail: return "FAIL";
    case BoundVerdict::not_applicable: return "NOT-APPLICABLE";
  }
  return "?";
}

struct BoundRow {
  std::size_t i = 0;
  std::size_t footprint = 0;
  bool read_completed = false;
  Word read_value = 0;
  bool writers_committed = true;
  std::size_t variants = 0;      // extra-writer executions checked
  bool variants_consistent = true;
};

struct BoundReport {
  std::string alg;
  std::size_t m = 0;
  std::vector<BoundRow> rows;
  std::size_t total = 0;
  std::size_t required_total = 0;
  bool writers_commit = true;       // (a)
  bool no_new_value = true;         // (b)
  bool per_read_bound = true;       // (c)
  bool total_bound = true;          // (d)
  BoundVerdict verdict = BoundVerdict::pass;
  std::string detail;
};

struct BoundOptions {
  std::size_t variant_limit = 32;  // run the extra-writer variants only when m is at most this
  Alg1Options alg1;
};

namespace detail {

inline Task<Word> read_prefix(Tx& tx, std::size_t count, std::size_t* done) {
  Word sum = 0;
  for (std::uint32_t k = 0; k < count; ++k) {
    sum += co_await tx.read(TObj{k});
    ++*done;
  }
  co_return sum;
}

inline Task<void> reader_body(Process& p, Algorithm& alg, TxStats& stats, std::size_t count,
                              std::size_t* done) {
  Program prog = [count, done](Tx& tx) { return read_prefix(tx, count, done); };
  co_await attempt(p, alg, prog, Path::slow, stats);
}

inline Task<void> writer_body(Process& p, Algorithm& alg, TxStats& stats, std::vector<OpSpec> ops,
                              Path path, AttemptOutcome* out) {
  Program prog = scripted(ops);
  *out = co_await attempt(p, alg, prog, path, stats);
}

inline Word new_value(std::size_t k) { return 1000 + k; }

inline unsigned lock_bits_for(std::size_t objects) {
  unsigned bits = 8;
  while ((std::size_t{1} << bits) < objects * 16) ++bits;
  while (bits < 24 && !Layout(objects, bits).locks_distinct(objects)) ++bits;
  return bits;
}

struct Execution {
  std::size_t footprint = 0;
  bool completed = false;
  Word value = 0;
  bool writers_committed = true;
};

/// Runs reader prefix (i-1 reads), optional writer of X_l, writer of X_i, then read i.
inline Execution execute(const std::string& alg, std::size_t m, unsigned bits, std::size_t i,
                         std::optional<std::size_t> l, const Alg1Options& opts) {
  WorldConfig wc;
  wc.alg = alg;
  wc.tobjects = m;
  wc.lock_bits = bits;
  wc.processes = 3;
  wc.alg1 = opts;
  World w(wc);
  Scheduler& s = w.scheduler();
  const Path wpath = w.algorithm().has_fast_path() ? Path::fast : Path::slow;

  std::size_t done = 0;
  w.process(0).start(reader_body(w.process(0), w.algorithm(), w.stats(0), i, &done));
  s.run_solo(0, [&] { return done >= i - 1; });

  Execution ex;
  auto run_writer = [&](Pid pid, std::size_t obj, AttemptOutcome& out) {
    std::vector<OpSpec> ops{{true, static_cast<std::uint32_t>(obj), new_value(obj)}};
    w.process(pid).start(writer_body(w.process(pid), w.algorithm(), w.stats(pid), ops, wpath, &out));
    s.run_solo(pid, [] { return false; });
    if (!out.committed) ex.writers_committed = false;
  };
  AttemptOutcome beta, rho;
  if (l) run_writer(2, *l - 1, beta);
  run_writer(1, i - 1, rho);
  s.run_solo(0, [&] { return done >= i; });

  for (const auto& f : read_step_complexity(w.machine().history())) {
    if (f.index == i && f.obj == i - 1) {
      ex.footprint = f.distinct;
      ex.completed = f.complete;
      ex.value = f.value;
    }
  }
  return ex;
}

}  // namespace detail

inline BoundReport read_bound_run(const std::string& alg, std::size_t m, const BoundOptions& opts = {}) {
  BoundReport rep;
  rep.alg = alg;
  rep.m = m;
  rep.required_total = m * (m - 1) / 2;
  if (m < 2) throw std::invalid_argument("m must be at least 2");
  const unsigned bits = detail::lock_bits_for(m);
  const bool variants = m <= opts.variant_limit;

  for (std::size_t i = 1; i <= m; ++i) {
    BoundRow row;
    row.i = i;
    auto base = detail::execute(alg, m, bits, i, std::nullopt, opts.alg1);
    row.footprint = base.footprint;
    row.read_completed = base.completed;
    row.read_value = base.value;
    row.writers_committed = base.writers_committed;
    if (variants) {
      for (std::size_t l = 1; l < i; ++l) {
        auto v = detail::execute(alg, m, bits, i, l, opts.alg1);
        ++row.variants;
        if (!v.writers_committed) row.writers_committed = false;
        if (v.completed && v.value == detail::new_value(i - 1)) row.variants_consistent = false;
      }
    }
    rep.total += row.footprint;
    if (!row.writers_committed && rep.writers_commit) {
      rep.writers_commit = false;
      rep.detail += "writer aborted at i=" + std::to_string(i) + "; ";
    }
    if (!row.variants_consistent && rep.no_new_value) {
      rep.no_new_value = false;
      rep.detail += "read of X_" + std::to_string(i) + " returned the new value after an earlier write; ";
    }
    if (i >= 2 && row.footprint < i - 1 && rep.per_read_bound) {
      rep.per_read_bound = false;
      rep.detail += "read " + std::to_string(i) + " touched " + std::to_string(row.footprint) +
                    " < " + std::to_string(i - 1) + " base objects; ";
    }
    rep.rows.push_back(row);
  }
  rep.total_bound = rep.total >= rep.required_total;
  if (!rep.total_bound) {
    rep.detail += "total " + std::to_string(rep.total) + " < " + std::to_string(rep.required_total) + "; ";
  }

  if (!rep.no_new_value) {
    rep.verdict = BoundVerdict::fail;
  } else if (rep.writers_commit && rep.per_read_bound && rep.total_bound) {
    rep.verdict = BoundVerdict::pass;
  } else {
    rep.verdict = alg == "alg1" ? BoundVerdict::fail : BoundVerdict::not_applicable;
  }
  return rep;
}

}  // namespace hytm
