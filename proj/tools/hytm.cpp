// hytm: benchmark, check, lower-bound and replay driver.
//
// Exit codes: 0 success, 1 a checker violation or failed run, 2 usage or input error.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hytm/cli/config.hpp"
#include "hytm/hytm.hpp"

namespace fs = std::filesystem;
using namespace hytm;

namespace {

constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check_algorithms(const std::vector<std::string>& algs) {
  const auto& known = algorithm_names();
  for (const auto& a : algs) {
    if (std::find(known.begin(), known.end(), a) == known.end()) throw UsageError("unknown algorithm '" + a + "'");
  }
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

// ---- bench ---------------------------------------------------------------

struct BenchArgs {
  std::string algs = "alg1";
  std::string rates = "10";
  std::string workloads = "W1";
  std::string threads = "4";
  std::string seeds = "1";
  std::string mode = "deterministic";
  std::size_t keys = 10'000;
  std::size_t ops = 20'000;
  std::size_t range_width = 0;
  std::size_t ts = 64;
  double spurious = 0.0;
  bool fast_fast = false;
  std::uint32_t retries = 20;
  unsigned lock_bits = 20;
  std::uint64_t step_budget = 5'000'000;
  bool no_prefill = false;
  bool tracked_lock_reads = false;
  bool lazy_write_back = false;
  bool verify = false;
  bool no_header = false;
  std::string out;
  std::string out_dir = ".";
};

void add_bench(CLI::App& app, BenchArgs& a) {
  auto* s = app.add_subcommand("bench", "Run the BST microbenchmark and print CSV rows");
  s->add_option("--alg", a.algs, "Algorithms, comma separated")->capture_default_str();
  s->add_option("--u", a.rates, "Update rates in percent, comma separated")->capture_default_str();
  s->add_option("--workload", a.workloads, "W1 and/or W2, comma separated")->capture_default_str();
  s->add_option("-n,--threads", a.threads, "Worker counts, comma separated")->capture_default_str();
  s->add_option("--seed", a.seeds, "Seeds, comma separated")->capture_default_str();
  s->add_option("--mode", a.mode, "deterministic or threaded")
      ->check(CLI::IsMember({"deterministic", "threaded"}))
      ->capture_default_str();
  s->add_option("--keys", a.keys, "Key range K")->capture_default_str();
  s->add_option("--ops", a.ops, "Measured operations per run")->capture_default_str();
  s->add_option("--range-width", a.range_width, "Range-increment width (0: K/100)")->capture_default_str();
  s->add_option("--ts", a.ts, "Tracking-set capacity")->capture_default_str();
  s->add_option("--spurious", a.spurious, "Spurious hardware abort probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  s->add_flag("--fast-fast", a.fast_fast, "Try an uninstrumented hardware attempt first");
  s->add_option("--retries", a.retries, "Fast-path attempts before the slow path")->capture_default_str();
  s->add_option("--lock-bits", a.lock_bits, "log2 of the lock table size")
      ->check(CLI::Range(1u, 24u))
      ->capture_default_str();
  s->add_option("--step-budget", a.step_budget, "Liveness budget per operation, in steps")->capture_default_str();
  s->add_flag("--no-prefill", a.no_prefill, "Start measuring from an empty tree");
  s->add_flag("--tracked-lock-reads", a.tracked_lock_reads, "alg1: read locks with cached accesses");
  s->add_flag("--lazy-write-back", a.lazy_write_back, "alg1: write back after validation");
  s->add_flag("--verify", a.verify, "Record operations and check the dictionary is linearizable");
  s->add_flag("--no-header", a.no_header, "Omit the CSV header");
  s->add_option("-o,--out", a.out, "CSV file (default stdout)");
  s->add_option("--out-dir", a.out_dir, "Where logs of failed verifications go")->capture_default_str();
}

int run_bench(const BenchArgs& a) {
  const auto algs = cli::split_list(a.algs);
  check_algorithms(algs);
  const auto rates = cli::split_numbers<unsigned>(a.rates);
  const auto threads = cli::split_numbers<std::size_t>(a.threads);
  const auto seeds = cli::split_numbers<std::uint64_t>(a.seeds);
  std::vector<bench::Workload> workloads;
  for (const auto& w : cli::split_list(a.workloads)) {
    if (w == "W1" || w == "w1") {
      workloads.push_back(bench::Workload::w1);
    } else if (w == "W2" || w == "w2") {
      workloads.push_back(bench::Workload::w2);
    } else {
      throw UsageError("unknown workload '" + w + "'");
    }
  }
  std::vector<bench::WorkloadConfig> configs;
  for (const auto& alg : algs) {
    for (auto w : workloads) {
      for (unsigned u : rates) {
        for (auto n : threads) {
          for (auto seed : seeds) {
            bench::WorkloadConfig c;
            c.alg = alg;
            c.mode = a.mode == "threaded" ? bench::RunMode::threaded : bench::RunMode::deterministic;
            c.workload = w;
            c.update_percent = u;
            c.threads = n;
            c.seed = seed;
            c.keys = a.keys;
            c.ops = a.ops;
            c.range_width = a.range_width;
            c.tracking_capacity = a.ts;
            c.spurious_probability = a.spurious;
            c.fast_fast = a.fast_fast;
            c.max_fast_attempts = a.retries;
            c.lock_bits = a.lock_bits;
            c.op_step_budget = a.step_budget;
            c.prefill = !a.no_prefill;
            c.record_ops = a.verify;
            c.alg1.tracked_lock_reads = a.tracked_lock_reads;
            c.alg1.lazy_write_back = a.lazy_write_back;
            try {
              c.validate();
            } catch (const std::invalid_argument& e) {
              throw UsageError(e.what());
            }
            configs.push_back(c);
          }
        }
      }
    }
  }

  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw UsageError("cannot write " + a.out);
  }
  std::ostream& os = a.out.empty() ? std::cout : file;
  if (!a.no_header) os << bench::kCsvHeader << '\n';
  int rc = 0;
  for (const auto& c : configs) {
    auto m = bench::run_workload(c);
    os << bench::format_csv_row(bench::to_csv_row(m)) << std::endl;
    if (m.failed) {
      std::cerr << "run failed: " << c.alg << ' ' << to_string(c.workload) << " U=" << c.update_percent
                << " n=" << c.threads << " seed=" << c.seed << ": " << m.failure << '\n';
      rc = kViolation;
      continue;
    }
    if (a.verify) {
      auto r = bench::check_dictionary_log(m.log, {});
      if (!r.ok) {
        fs::create_directories(a.out_dir);
        const fs::path p = fs::path(a.out_dir) / ("bench-violation-" + c.alg + "-seed" + std::to_string(c.seed) + ".log");
        std::ofstream lf(p);
        lf << "# pid measured op key hi value found result-value count start end path\n";
        for (const auto& rec : m.log) {
          lf << rec.pid << ' ' << rec.measured << ' ' << to_string(rec.op.kind) << ' ' << rec.op.key << ' '
             << rec.op.hi << ' ' << rec.op.value << ' ' << rec.result.found << ' ' << rec.result.value << ' '
             << rec.result.count << ' ' << rec.start << ' ' << rec.end << ' ' << to_string(rec.path) << '\n';
        }
        std::cerr << "not linearizable (" << r.reason << "); operation log written to " << p.string() << '\n';
        rc = kViolation;
      }
    }
  }
  return rc;
}

// ---- check ---------------------------------------------------------------

struct CheckArgs {
  std::string algs = "alg1";
  std::size_t seeds = 1000;
  std::uint64_t first_seed = 1;
  std::size_t procs = 3;
  std::size_t txns = 6;
  std::size_t ops = 4;
  std::size_t objects = 4;
  double read_ratio = 0.6;
  bool fast_fast = false;
  bool stress = false;
  std::string checks = "auto";
  std::string schedule_file;
  std::size_t steps = 200'000;
  std::string out_dir = ".";
  bool tracked_lock_reads = false;
  bool lazy_write_back = false;
  bool skip_validate = false;
  bool skip_read_lock_check = false;
};

void add_check(CLI::App& app, CheckArgs& a) {
  auto* s = app.add_subcommand("check", "Random-schedule property campaign over small instances");
  s->add_option("--alg", a.algs, "Algorithms, comma separated")->capture_default_str();
  s->add_option("--seeds", a.seeds, "Number of seeds")->capture_default_str();
  s->add_option("--first-seed", a.first_seed, "First seed")->capture_default_str();
  s->add_option("--procs", a.procs, "Processes")->check(CLI::Range(1, 16))->capture_default_str();
  s->add_option("--txns", a.txns, "Maximum transactions per instance")->check(CLI::Range(2, 64))->capture_default_str();
  s->add_option("--ops", a.ops, "Maximum t-operations per transaction")->check(CLI::Range(1, 64))->capture_default_str();
  s->add_option("--objects", a.objects, "t-objects")->check(CLI::Range(1, 64))->capture_default_str();
  s->add_option("--read-ratio", a.read_ratio, "Probability that an operation is a read")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  s->add_flag("--fast-fast", a.fast_fast, "Allow uninstrumented hardware attempts");
  s->add_flag("--stress", a.stress, "Tiny tracking sets and spurious aborts");
  s->add_option("--checks", a.checks,
                "auto or a list of opacity,invisible,progress-all,progress-slow-readers,witness")
      ->capture_default_str();
  s->add_option("--schedule", a.schedule_file, "Schedule file: seed:<u64> or a pid list");
  s->add_option("--steps", a.steps, "Step budget per instance")->capture_default_str();
  s->add_option("--out-dir", a.out_dir, "Where violating histories are written")->capture_default_str();
  s->add_flag("--tracked-lock-reads", a.tracked_lock_reads, "alg1: read locks with cached accesses");
  s->add_flag("--lazy-write-back", a.lazy_write_back, "alg1: write back after validation");
  s->add_flag("--skip-validate", a.skip_validate, "alg1 fault injection: no commit-time validation");
  s->add_flag("--skip-read-lock-check", a.skip_read_lock_check, "alg1 fault injection: ignore held locks on read");
}

std::vector<CampaignCheck> checks_for(const std::string& alg, const CheckArgs& a) {
  if (a.checks != "auto") {
    std::vector<CampaignCheck> out;
    for (const auto& c : cli::split_list(a.checks)) {
      if (c == "opacity") {
        out.push_back(CampaignCheck::opacity);
      } else if (c == "invisible") {
        out.push_back(CampaignCheck::invisible);
      } else if (c == "progress-all") {
        out.push_back(CampaignCheck::progress_all);
      } else if (c == "progress-slow-readers") {
        out.push_back(CampaignCheck::progress_slow_readers);
      } else if (c == "witness") {
        if (alg != "alg1") throw UsageError("the witness check applies to alg1 only");
        out.push_back(CampaignCheck::witness);
      } else {
        throw UsageError("unknown check '" + c + "'");
      }
    }
    return out;
  }
  std::vector<CampaignCheck> out{CampaignCheck::opacity, CampaignCheck::invisible};
  if (a.stress) return {CampaignCheck::opacity};
  if (!a.fast_fast && alg == "alg1") out.push_back(CampaignCheck::progress_all);
  if (!a.fast_fast && alg == "alg2") out.push_back(CampaignCheck::progress_slow_readers);
  const bool faulty = a.skip_validate || a.skip_read_lock_check || a.lazy_write_back;
  if (alg == "alg1" && !faulty && a.procs <= 3 && a.txns <= 8) out.push_back(CampaignCheck::witness);
  return out;
}

std::string check_name(CampaignCheck c) {
  switch (c) {
    case CampaignCheck::opacity: return "opacity";
    case CampaignCheck::invisible: return "invisible";
    case CampaignCheck::progress_all: return "progress-all";
    case CampaignCheck::progress_slow_readers: return "progress-slow-readers";
    case CampaignCheck::witness: return "witness";
  }
  return "?";
}

int run_check(const CheckArgs& a) {
  const auto algs = cli::split_list(a.algs);
  check_algorithms(algs);
  if (a.seeds == 0) throw UsageError("--seeds must be positive");
  std::optional<Schedule> schedule;
  if (!a.schedule_file.empty()) {
    std::ifstream in(a.schedule_file);
    if (!in) throw UsageError("cannot read " + a.schedule_file);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      schedule = Schedule::parse(ss.str());
    } catch (const std::invalid_argument& e) {
      throw UsageError(a.schedule_file + ": " + e.what());
    }
    for (Pid p : schedule->pids) {
      if (p >= a.procs) throw UsageError("schedule names pid " + std::to_string(p) + " but --procs is " + std::to_string(a.procs));
    }
  }
  int rc = 0;
  for (const auto& alg : algs) {
    CampaignConfig cfg;
    cfg.alg = alg;
    cfg.processes = a.procs;
    cfg.max_txns = a.txns;
    cfg.min_txns = std::min<std::size_t>(2, a.txns);
    cfg.max_ops = a.ops;
    cfg.tobjects = a.objects;
    cfg.read_ratio = a.read_ratio;
    cfg.fast_fast = a.fast_fast;
    cfg.stress = a.stress;
    cfg.max_steps = a.steps;
    cfg.schedule = schedule;
    cfg.alg1.tracked_lock_reads = a.tracked_lock_reads;
    cfg.alg1.lazy_write_back = a.lazy_write_back;
    cfg.alg1.skip_validate = a.skip_validate;
    cfg.alg1.skip_read_lock_check = a.skip_read_lock_check;
    const auto checks = checks_for(alg, a);

    CampaignReport total;
    std::optional<CampaignFailure> violation;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t s = a.first_seed; s < a.first_seed + a.seeds; ++s) {
      auto r = run_campaign(cfg, s, 1, checks);
      const bool violated = r.not_opaque || r.progress_violations || r.invisible_violations || r.witness_mismatches;
      if (violated && !violation) violation = r.first_failure;
      total.runs += r.runs;
      total.opaque += r.opaque;
      total.not_opaque += r.not_opaque;
      total.undecided += r.undecided;
      total.truncated += r.truncated;
      total.progress_violations += r.progress_violations;
      total.invisible_violations += r.invisible_violations;
      total.witness_mismatches += r.witness_mismatches;
      total.witness_agreements += r.witness_agreements;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::vector<std::string> names;
    for (auto c : checks) names.push_back(check_name(c));
    std::cout << alg << ": " << total.runs << " histories [" << join(names) << "] opaque=" << total.opaque
              << " not-opaque=" << total.not_opaque << " undecided=" << total.undecided
              << " truncated=" << total.truncated << " progress-violations=" << total.progress_violations
              << " invisible-violations=" << total.invisible_violations;
    if (std::find(checks.begin(), checks.end(), CampaignCheck::witness) != checks.end()) {
      std::cout << " witness-agreements=" << total.witness_agreements
                << " witness-mismatches=" << total.witness_mismatches;
    }
    std::cout << std::fixed << std::setprecision(2) << " (" << secs << " s)" << std::defaultfloat << '\n';
    if (total.undecided || total.truncated) {
      std::cerr << alg << ": " << total.undecided + total.truncated
                << " histories were outside the checker budget and not decided\n";
    }
    if (violation) {
      fs::create_directories(a.out_dir);
      const fs::path p = fs::path(a.out_dir) / ("violation-" + alg + "-seed" + std::to_string(violation->seed) + ".hist");
      std::ofstream out(p);
      write_history(out, violation->history);
      std::cout << alg << ": VIOLATION at seed " << violation->seed << ": " << violation->what << '\n'
                << alg << ": history written to " << p.string() << '\n';
      rc = kViolation;
    }
  }
  return rc;
}

// ---- lowerbound ----------------------------------------------------------

struct LowerboundArgs {
  std::string algs = "alg1";
  std::string m = "2..10";
  std::size_t variant_limit = 32;
  bool tracked_lock_reads = false;
  bool skip_validate = false;
  bool quiet = false;
};

void add_lowerbound(CLI::App& app, LowerboundArgs& a) {
  auto* s = app.add_subcommand("lowerbound", "Measure slow-path read cost on the adversarial executions");
  s->add_option("--alg", a.algs, "Algorithms, comma separated")->capture_default_str();
  s->add_option("--m", a.m, "Read-set sizes: N, A..B or a comma list")->capture_default_str();
  s->add_option("--variant-limit", a.variant_limit, "Largest m for which extra-writer variants run")
      ->capture_default_str();
  s->add_flag("--tracked-lock-reads", a.tracked_lock_reads, "alg1: read locks with cached accesses");
  s->add_flag("--skip-validate", a.skip_validate, "alg1 fault injection: no validation");
  s->add_flag("-q,--quiet", a.quiet, "Print only the per-m summary line");
}

int run_lowerbound(const LowerboundArgs& a) {
  const auto algs = cli::split_list(a.algs);
  check_algorithms(algs);
  const auto ms = cli::parse_range(a.m);
  for (auto m : ms) {
    if (m < 2) throw UsageError("m must be at least 2");
  }
  BoundOptions opts;
  opts.variant_limit = a.variant_limit;
  opts.alg1.tracked_lock_reads = a.tracked_lock_reads;
  opts.alg1.skip_validate = a.skip_validate;
  int rc = 0;
  for (const auto& alg : algs) {
    for (auto m : ms) {
      const auto rep = read_bound_run(alg, m, opts);
      const std::string total_col = "total-read-footprint ≥ " + std::to_string(rep.required_total);
      if (!a.quiet) {
        std::cout << "alg=" << alg << " m=" << m << '\n';
        std::cout << std::setw(6) << "i" << std::setw(12) << "footprint" << std::setw(10) << "≥ i-1"
                  << std::setw(10) << "variants" << std::setw(14) << "new-value" << '\n';
        for (const auto& r : rep.rows) {
          const bool ok = r.i < 2 || r.footprint >= r.i - 1;
          std::cout << std::setw(6) << r.i << std::setw(12) << r.footprint << std::setw(8) << (r.i - 1)
                    << (ok ? "  " : " !") << std::setw(10) << r.variants << std::setw(14)
                    << (r.variants_consistent ? "never" : "SEEN") << '\n';
        }
      }
      std::size_t widest = 0;
      for (const auto& r : rep.rows) widest = std::max(widest, r.footprint);
      std::cout << std::left << std::setw(10) << "alg" << std::setw(7) << "m" << std::setw(32) << total_col
                << std::setw(10) << "max-read" << std::setw(12) << "per-read" << "verdict" << std::right << '\n';
      std::cout << std::left << std::setw(10) << alg << std::setw(7) << m << std::setw(30) << rep.total
                << std::setw(10) << widest << std::setw(12) << (rep.per_read_bound ? "i-1 met" : "below i-1")
                << to_string(rep.verdict) << std::right << '\n';
      if (!rep.detail.empty() && !a.quiet) std::cout << "  " << rep.detail << '\n';
      if (!a.quiet) std::cout << '\n';
      if (rep.verdict == BoundVerdict::fail) rc = kViolation;
    }
  }
  return rc;
}

// ---- replay --------------------------------------------------------------

struct ReplayArgs {
  std::string file;
  std::string checks = "opacity,invisible";
};

void add_replay(CLI::App& app, ReplayArgs& a) {
  auto* s = app.add_subcommand("replay", "Run the checkers on a recorded history file");
  s->add_option("file", a.file, "History file")->required();
  s->add_option("--checks", a.checks,
                "Checks whose failure sets the exit code: opacity,invisible,progress-all,progress-slow-readers")
      ->capture_default_str();
}

int run_replay(const ReplayArgs& a) {
  std::ifstream in(a.file);
  if (!in) throw UsageError("cannot read " + a.file);
  History h;
  try {
    h = read_history(in);
  } catch (const HistoryParseError& e) {
    throw UsageError(a.file + ": " + e.what());
  }
  const auto enforced = cli::split_list(a.checks);
  for (const auto& c : enforced) {
    if (c != "opacity" && c != "invisible" && c != "progress-all" && c != "progress-slow-readers") {
      throw UsageError("unknown check '" + c + "'");
    }
  }
  auto enforce = [&](const std::string& c) { return std::find(enforced.begin(), enforced.end(), c) != enforced.end(); };
  int rc = 0;
  const auto txns = extract_transactions(h);
  std::cout << "events=" << h.size() << " transactions=" << txns.size() << (h.truncated ? " (truncated)" : "") << '\n';

  const auto op = check_opacity(h);
  std::cout << "opacity: " << to_string(op.verdict);
  if (op.verdict == Verdict::opaque) {
    std::cout << " order=";
    for (std::size_t i = 0; i < op.witness.size(); ++i) std::cout << (i ? "," : "") << 'T' << op.witness[i];
  } else {
    std::cout << " (" << op.reason << ')';
  }
  std::cout << '\n';
  if (op.verdict == Verdict::not_opaque && enforce("opacity")) rc = kViolation;

  for (auto [scope, name] : {std::pair{ProgressScope::all_txns, "progress-all"},
                             std::pair{ProgressScope::slow_path_readers, "progress-slow-readers"}}) {
    const auto v = check_progressiveness(h, scope);
    std::cout << name << ": " << (v ? "VIOLATION " + v->reason : std::string("ok")) << '\n';
    if (v && enforce(name)) rc = kViolation;
  }
  const auto inv = check_invisible_reads(h);
  std::cout << "invisible: "
            << (inv ? "VIOLATION nontrivial primitive at event " + std::to_string(inv->event) + " in T" +
                          std::to_string(inv->txn)
                    : std::string("ok"))
            << '\n';
  if (inv && enforce("invisible")) rc = kViolation;

  const auto fp = read_step_complexity(h);
  std::size_t widest = 0;
  std::size_t total = 0;
  for (const auto& f : fp) {
    widest = std::max(widest, f.distinct);
    total += f.distinct;
  }
  std::cout << "read-footprint: reads=" << fp.size() << " max=" << widest << " total=" << total << '\n';
  return rc;
}

// ---- plot ----------------------------------------------------------------

struct PlotArgs {
  std::vector<std::string> inputs;
  std::string out = "bench.svg";
  std::string title = "BST microbenchmark";
};

void add_plot(CLI::App& app, PlotArgs& a) {
  auto* s = app.add_subcommand("plot", "Draw throughput charts from bench CSV files");
  s->add_option("csv", a.inputs, "CSV files written by bench")->required();
  s->add_option("-o,--out", a.out, "SVG file")->capture_default_str();
  s->add_option("--title", a.title, "Chart title")->capture_default_str();
}

int run_plot(const PlotArgs& a) {
  std::vector<bench::CsvRow> rows;
  for (const auto& f : a.inputs) {
    std::ifstream in(f);
    if (!in) throw UsageError("cannot read " + f);
    try {
      auto r = bench::read_csv(in);
      rows.insert(rows.end(), r.begin(), r.end());
    } catch (const bench::CsvParseError& e) {
      throw UsageError(f + ": " + e.what());
    }
  }
  std::ofstream out(a.out);
  if (!out) throw UsageError("cannot write " + a.out);
  bench::PlotOptions opt;
  opt.title = a.title;
  const auto points = bench::write_svg_plot(out, rows, opt);
  std::cout << "wrote " << a.out << " (" << points << " points from " << rows.size() << " rows)\n";
  return 0;
}

/// Pulls `--config FILE` out of the arguments and appends its entries last, so they win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::vector<std::string> out;
  std::vector<std::string> extra;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string file;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      file = args[++i];
    } else if (args[i].starts_with("--config=")) {
      file = args[i].substr(9);
    } else {
      out.push_back(args[i]);
      continue;
    }
    std::ifstream in(file);
    if (!in) throw UsageError("cannot read config " + file);
    try {
      for (auto& a : cli::config_arguments(cli::parse_config(in))) extra.push_back(std::move(a));
    } catch (const cli::ConfigError& e) {
      throw UsageError(file + ": " + e.what());
    }
  }
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid transactional memory lab"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.footer("Any subcommand accepts --config FILE with key=value lines; config entries override flags.");

  BenchArgs bench_args;
  CheckArgs check_args;
  LowerboundArgs lb_args;
  ReplayArgs replay_args;
  PlotArgs plot_args;
  add_bench(app, bench_args);
  add_check(app, check_args);
  add_lowerbound(app, lb_args);
  add_replay(app, replay_args);
  add_plot(app, plot_args);

  try {
    std::vector<std::string> args = expand_config(std::vector<std::string>(argv + 1, argv + argc));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  try {
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "bench") return run_bench(bench_args);
    if (cmd == "check") return run_check(check_args);
    if (cmd == "lowerbound") return run_lowerbound(lb_args);
    if (cmd == "replay") return run_replay(replay_args);
    if (cmd == "plot") return run_plot(plot_args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
