#pragma once

// Recorded executions and their line-oriented text format:
//
//   seq pid txn kind base mode trivial value
//
// Numeric columns are decimal; columns that do not apply to an event are "-".

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hytm/word.hpp"

namespace hytm {

enum class Access : std::uint8_t { direct, cached };

enum class Path : std::uint8_t { fast, slow, fastfast };

constexpr std::string_view to_string(Path p) {
  switch (p) {
    case Path::fast: return "fast";
    case Path::slow: return "slow";
    case Path::fastfast: return "fastfast";
  }
  return "?";
}

enum class AbortCause : std::uint8_t {
  tracking,
  capacity,
  spurious,
  locked,
  validation,
  acquire,
  esl,
  stale_version,
  ff_busy,
};

inline constexpr int kAbortCauseCount = 9;

constexpr std::string_view to_string(AbortCause c) {
  switch (c) {
    case AbortCause::tracking: return "tracking";
    case AbortCause::capacity: return "capacity";
    case AbortCause::spurious: return "spurious";
    case AbortCause::locked: return "locked";
    case AbortCause::validation: return "validation";
    case AbortCause::acquire: return "acquire";
    case AbortCause::esl: return "esl";
    case AbortCause::stale_version: return "stale-version";
    case AbortCause::ff_busy: return "ff-busy";
  }
  return "?";
}

enum class EventKind : std::uint8_t {
  begin,
  inv_read,
  res_read,
  inv_write,
  res_write,
  inv_tryc,
  res_commit,
  res_abort,
  primitive,
  cache_commit,
  tracking_abort,
  capacity_abort,
  spurious_abort,
};

struct Event {
  std::uint64_t seq = 0;
  Pid pid = 0;
  TxnId txn = 0;
  EventKind kind = EventKind::begin;
  RmwKind rmw = RmwKind::read;           // primitive events only
  std::optional<std::uint32_t> base;     // base object, or t-object for t-operations
  std::optional<Access> access;          // primitive events only
  std::optional<Path> path;              // begin events only
  std::optional<bool> trivial;           // primitive events only
  Word value = 0;

  bool is_primitive() const { return kind == EventKind::primitive; }
  bool is_invocation() const {
    return kind == EventKind::inv_read || kind == EventKind::inv_write || kind == EventKind::inv_tryc;
  }
  bool is_response() const {
    return kind == EventKind::res_read || kind == EventKind::res_write ||
           kind == EventKind::res_commit || kind == EventKind::res_abort;
  }
  bool is_hw_abort() const {
    return kind == EventKind::tracking_abort || kind == EventKind::capacity_abort ||
           kind == EventKind::spurious_abort;
  }

  friend bool operator==(const Event&, const Event&) = default;
};

class History {
 public:
  void append(Event e) {
    e.seq = events_.size();
    events_.push_back(e);
  }

  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const Event& operator[](std::size_t i) const { return events_[i]; }
  auto begin() const { return events_.begin(); }
  auto end() const { return events_.end(); }

  /// Set when the run stopped on a step budget rather than completion.
  bool truncated = false;

  friend bool operator==(const History& a, const History& b) { return a.events_ == b.events_; }

 private:
  std::vector<Event> events_;
};

namespace detail {

inline std::string_view kind_token(const Event& e) {
  switch (e.kind) {
    case EventKind::begin: return "begin";
    case EventKind::inv_read: return "inv-read";
    case EventKind::res_read: return "res-read";
    case EventKind::inv_write: return "inv-write";
    case EventKind::res_write: return "res-write";
    case EventKind::inv_tryc: return "inv-tryc";
    case EventKind::res_commit: return "res-commit";
    case EventKind::res_abort: return "res-abort";
    case EventKind::cache_commit: return "cache-commit";
    case EventKind::tracking_abort: return "tracking-abort";
    case EventKind::capacity_abort: return "capacity-abort";
    case EventKind::spurious_abort: return "spurious-abort";
    case EventKind::primitive: break;
  }
  return {};
}

inline bool parse_kind(std::string_view tok, Event& e) {
  static constexpr std::pair<std::string_view, EventKind> table[] = {
      {"begin", EventKind::begin},
      {"inv-read", EventKind::inv_read},
      {"res-read", EventKind::res_read},
      {"inv-write", EventKind::inv_write},
      {"res-write", EventKind::res_write},
      {"inv-tryc", EventKind::inv_tryc},
      {"res-commit", EventKind::res_commit},
      {"res-abort", EventKind::res_abort},
      {"cache-commit", EventKind::cache_commit},
      {"tracking-abort", EventKind::tracking_abort},
      {"capacity-abort", EventKind::capacity_abort},
      {"spurious-abort", EventKind::spurious_abort},
  };
  for (auto [name, kind] : table) {
    if (tok == name) {
      e.kind = kind;
      return true;
    }
  }
  if (tok.starts_with("rmw-")) {
    if (auto k = rmw_kind_from_string(tok.substr(4))) {
      e.kind = EventKind::primitive;
      e.rmw = *k;
      return true;
    }
  }
  return false;
}

}  // namespace detail

inline void write_event(std::ostream& os, const Event& e) {
  os << e.seq << ' ' << e.pid << ' ' << e.txn << ' ';
  if (e.kind == EventKind::primitive) {
    os << "rmw-" << to_string(e.rmw);
  } else {
    os << detail::kind_token(e);
  }
  os << ' ';
  if (e.base) os << *e.base; else os << '-';
  os << ' ';
  if (e.access) {
    os << (*e.access == Access::direct ? "direct" : "cached");
  } else if (e.path) {
    os << to_string(*e.path);
  } else {
    os << '-';
  }
  os << ' ';
  if (e.trivial) os << (*e.trivial ? '1' : '0'); else os << '-';
  os << ' ' << e.value << '\n';
}

inline void write_history(std::ostream& os, const History& h) {
  for (const auto& e : h) write_event(os, e);
}

class HistoryParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline History read_history(std::istream& is) {
  History h;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string seq, pid, txn, kind, base, mode, trivial, value;
    if (!(ls >> seq >> pid >> txn >> kind >> base >> mode >> trivial >> value)) {
      throw HistoryParseError("line " + std::to_string(lineno) + ": expected 8 columns");
    }
    Event e;
    try {
      e.pid = static_cast<Pid>(std::stoul(pid));
      e.txn = static_cast<TxnId>(std::stoul(txn));
      if (!detail::parse_kind(kind, e)) throw HistoryParseError("unknown kind '" + kind + "'");
      if (base != "-") e.base = static_cast<std::uint32_t>(std::stoul(base));
      if (mode == "direct") e.access = Access::direct;
      else if (mode == "cached") e.access = Access::cached;
      else if (mode == "fast") e.path = Path::fast;
      else if (mode == "slow") e.path = Path::slow;
      else if (mode == "fastfast") e.path = Path::fastfast;
      else if (mode != "-") throw HistoryParseError("unknown mode '" + mode + "'");
      if (trivial == "0") e.trivial = false;
      else if (trivial == "1") e.trivial = true;
      else if (trivial != "-") throw HistoryParseError("bad trivial flag '" + trivial + "'");
      e.value = std::stoull(value);
    } catch (const HistoryParseError& err) {
      throw HistoryParseError("line " + std::to_string(lineno) + ": " + err.what());
    } catch (const std::exception&) {
      throw HistoryParseError("line " + std::to_string(lineno) + ": malformed number");
    }
    h.append(e);
  }
  return h;
}

}  // namespace hytm
