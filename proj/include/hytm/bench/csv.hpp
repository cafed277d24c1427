#pragma once

// One CSV row per run. Column order is fixed; failed runs keep their counters
// and carry FAILED in the throughput column.

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hytm/bench/workload.hpp"

namespace hytm::bench {

inline constexpr std::string_view kCsvHeader =
    "alg,mode,workload,U,n,seed,ops,commits,aborts_tracking,aborts_capacity,aborts_locked,"
    "aborts_validation,aborts_other,slowpath_frac,throughput";

struct CsvRow {
  std::string alg;
  std::string mode;
  std::string workload;
  unsigned update_percent = 0;
  std::size_t threads = 0;
  std::uint64_t seed = 0;
  std::uint64_t ops = 0;
  std::uint64_t commits = 0;
  std::uint64_t aborts_tracking = 0;
  std::uint64_t aborts_capacity = 0;
  std::uint64_t aborts_locked = 0;
  std::uint64_t aborts_validation = 0;
  std::uint64_t aborts_other = 0;
  double slowpath_frac = 0.0;
  bool failed = false;
  double throughput = 0.0;
};

inline CsvRow to_csv_row(const MetricsRecord& m) {
  CsvRow r;
  r.alg = m.config.alg;
  r.mode = to_string(m.config.mode);
  r.workload = to_string(m.config.workload);
  r.update_percent = m.config.update_percent;
  r.threads = m.config.threads;
  r.seed = m.config.seed;
  r.ops = m.ops;
  r.commits = m.commits();
  r.aborts_tracking = m.stats.aborts_by(AbortCause::tracking);
  r.aborts_capacity = m.stats.aborts_by(AbortCause::capacity);
  r.aborts_locked = m.stats.aborts_by(AbortCause::locked);
  r.aborts_validation = m.stats.aborts_by(AbortCause::validation);
  r.aborts_other =
      m.stats.total_aborts() - r.aborts_tracking - r.aborts_capacity - r.aborts_locked - r.aborts_validation;
  r.slowpath_frac = m.slow_fraction();
  r.failed = m.failed;
  r.throughput = m.throughput();
  return r;
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string format_csv_row(const CsvRow& r) {
  std::ostringstream os;
  os << r.alg << ',' << r.mode << ',' << r.workload << ',' << r.update_percent << ',' << r.threads << ','
     << r.seed << ',' << r.ops << ',' << r.commits << ',' << r.aborts_tracking << ',' << r.aborts_capacity << ','
     << r.aborts_locked << ',' << r.aborts_validation << ',' << r.aborts_other << ','
     << format_double(r.slowpath_frac) << ',' << (r.failed ? std::string("FAILED") : format_double(r.throughput));
  return os.str();
}

class CsvParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <class T>
T parse_number(const std::string& s, std::size_t line, const char* col) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw CsvParseError("line " + std::to_string(line) + ": bad " + col + " '" + s + "'");
  }
  return v;
}

}  // namespace detail

/// Reads rows written by `format_csv_row`; a header line is skipped wherever it appears.
inline std::vector<CsvRow> read_csv(std::istream& is) {
  std::vector<CsvRow> rows;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == kCsvHeader) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 15) throw CsvParseError("line " + std::to_string(n) + ": expected 15 columns");
    using detail::parse_number;
    CsvRow r;
    r.alg = f[0];
    r.mode = f[1];
    r.workload = f[2];
    r.update_percent = parse_number<unsigned>(f[3], n, "U");
    r.threads = parse_number<std::size_t>(f[4], n, "n");
    r.seed = parse_number<std::uint64_t>(f[5], n, "seed");
    r.ops = parse_number<std::uint64_t>(f[6], n, "ops");
    r.commits = parse_number<std::uint64_t>(f[7], n, "commits");
    r.aborts_tracking = parse_number<std::uint64_t>(f[8], n, "aborts_tracking");
    r.aborts_capacity = parse_number<std::uint64_t>(f[9], n, "aborts_capacity");
    r.aborts_locked = parse_number<std::uint64_t>(f[10], n, "aborts_locked");
    r.aborts_validation = parse_number<std::uint64_t>(f[11], n, "aborts_validation");
    r.aborts_other = parse_number<std::uint64_t>(f[12], n, "aborts_other");
    r.slowpath_frac = parse_number<double>(f[13], n, "slowpath_frac");
    r.failed = f[14] == "FAILED";
    if (!r.failed) r.throughput = parse_number<double>(f[14], n, "throughput");
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace hytm::bench
