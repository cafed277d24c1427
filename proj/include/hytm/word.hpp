#pragma once

// Base objects, sequence-lock words and read-modify-write primitives.

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hytm {

using Word = std::uint64_t;
using Pid = std::uint16_t;
using TxnId = std::uint32_t;

/// Index of a base object in the machine's memory array.
struct BaseId {
  std::uint32_t index = 0;
  friend constexpr auto operator<=>(BaseId, BaseId) = default;
};

/// A broken algorithm or harness invariant. Never used for modeled contention.
class ModelViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Packed sequence lock: bit 0 locked, bits 1..16 owner, bits 17..63 sequence.
class SeqLock {
 public:
  static constexpr int kOwnerShift = 1;
  static constexpr int kSeqShift = 17;
  static constexpr Word kLockBit = 1;
  static constexpr Word kOwnerMask = Word{0xFFFF} << kOwnerShift;

  constexpr SeqLock() = default;
  constexpr explicit SeqLock(Word raw) : raw_(raw) {}

  static constexpr SeqLock make(Word sequence, bool locked = false, Pid owner = 0) {
    Word raw = (sequence << kSeqShift) | (Word{owner} << kOwnerShift);
    if (locked) raw |= kLockBit;
    return SeqLock(raw);
  }

  constexpr Word raw() const { return raw_; }
  constexpr bool locked() const { return (raw_ & kLockBit) != 0; }
  constexpr Pid owner() const { return static_cast<Pid>((raw_ & kOwnerMask) >> kOwnerShift); }
  constexpr Word sequence() const { return raw_ >> kSeqShift; }
  constexpr bool locked_by(Pid pid) const { return locked() && owner() == pid; }

  /// Empty when the word is already locked.
  constexpr std::optional<SeqLock> try_lock(Pid pid) const {
    if (locked()) return std::nullopt;
    return make(sequence(), true, pid);
  }

  SeqLock unlock(Pid pid) const {
    check_owner(pid, "unlock");
    return make(sequence());
  }

  /// Release that also publishes a new sequence number.
  SeqLock unlock_increment(Pid pid) const {
    check_owner(pid, "unlock_increment");
    return make(sequence() + 1);
  }

  constexpr SeqLock inc_sequence() const { return SeqLock(raw_ + (Word{1} << kSeqShift)); }

  friend constexpr bool operator==(SeqLock, SeqLock) = default;

 private:
  void check_owner(Pid pid, const char* what) const {
    if (!locked_by(pid)) {
      throw ModelViolation(std::string(what) + " by non-owner process " + std::to_string(pid));
    }
  }

  Word raw_ = 0;
};

enum class RmwKind : std::uint8_t {
  read,
  write,
  compare_and_swap,
  fetch_and_add,
  try_lock,
  unlock,
  unlock_increment,
  inc_sequence,
};

constexpr std::string_view to_string(RmwKind k) {
  switch (k) {
    case RmwKind::read: return "read";
    case RmwKind::write: return "write";
    case RmwKind::compare_and_swap: return "cas";
    case RmwKind::fetch_and_add: return "faa";
    case RmwKind::try_lock: return "trylock";
    case RmwKind::unlock: return "unlock";
    case RmwKind::unlock_increment: return "unlockinc";
    case RmwKind::inc_sequence: return "incseq";
  }
  return "?";
}

inline std::optional<RmwKind> rmw_kind_from_string(std::string_view s) {
  for (auto k : {RmwKind::read, RmwKind::write, RmwKind::compare_and_swap, RmwKind::fetch_and_add,
                 RmwKind::try_lock, RmwKind::unlock, RmwKind::unlock_increment,
                 RmwKind::inc_sequence}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

/// A read-modify-write primitive. `a`/`b` carry operands (value, expected/new, delta, owner).
struct Rmw {
  RmwKind kind = RmwKind::read;
  Word a = 0;
  Word b = 0;

  static constexpr Rmw read() { return {RmwKind::read}; }
  static constexpr Rmw write(Word v) { return {RmwKind::write, v}; }
  static constexpr Rmw cas(Word expect, Word desired) {
    return {RmwKind::compare_and_swap, expect, desired};
  }
  static constexpr Rmw fetch_add(Word delta) { return {RmwKind::fetch_and_add, delta}; }
  static constexpr Rmw try_lock(Pid owner) { return {RmwKind::try_lock, owner}; }
  static constexpr Rmw unlock(Pid owner) { return {RmwKind::unlock, owner}; }
  static constexpr Rmw unlock_increment(Pid owner) { return {RmwKind::unlock_increment, owner}; }
  static constexpr Rmw inc_sequence() { return {RmwKind::inc_sequence}; }
};

/// Result of applying a primitive to a word. `changed == false` means the primitive was trivial.
struct RmwOutcome {
  Word next = 0;
  bool changed = false;
};

/// Pure evaluation. Throws ModelViolation for unlock by a non-owner.
inline RmwOutcome evaluate(const Rmw& op, Word current) {
  Word next = current;
  switch (op.kind) {
    case RmwKind::read:
      break;
    case RmwKind::write:
      next = op.a;
      break;
    case RmwKind::compare_and_swap:
      if (current == op.a) next = op.b;
      break;
    case RmwKind::fetch_and_add:
      next = current + op.a;
      break;
    case RmwKind::try_lock:
      if (auto l = SeqLock(current).try_lock(static_cast<Pid>(op.a))) next = l->raw();
      break;
    case RmwKind::unlock:
      next = SeqLock(current).unlock(static_cast<Pid>(op.a)).raw();
      break;
    case RmwKind::unlock_increment:
      next = SeqLock(current).unlock_increment(static_cast<Pid>(op.a)).raw();
      break;
    case RmwKind::inc_sequence:
      next = SeqLock(current).inc_sequence().raw();
      break;
  }
  return {next, next != current};
}

}  // namespace hytm
