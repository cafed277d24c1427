#pragma once

// A simulated process: a coroutine that suspends once per primitive request.
// The scheduler applies the pending request to the machine and resumes the
// coroutine, which runs local computation up to its next request.

#include <coroutine>
#include <optional>

#include "hytm/machine.hpp"
#include "hytm/task.hpp"

namespace hytm {

/// Transaction abort, raised by hardware aborts and algorithm checks alike.
struct Aborted {
  AbortCause cause;
};

class Process {
 public:
  enum class RequestKind : std::uint8_t { direct, cached, hw_direct, commit };

  struct Request {
    RequestKind kind = RequestKind::direct;
    BaseId base;
    Rmw op;
  };

  Process(Machine& m, Pid pid) : machine_(&m), pid_(pid) {}
  Process(const Process&) = delete;
  Process& operator=(const Process&) = delete;

  Pid pid() const { return pid_; }
  Machine& machine() const { return *machine_; }

  void start(Task<void> body) {
    body_ = std::move(body);
    started_ = false;
    resume_point_ = {};
    pending_.reset();
  }

  bool finished() const { return body_.done(); }
  bool has_pending() const { return pending_.has_value(); }
  const std::optional<Request>& pending() const { return pending_; }

  /// Runs local computation until the next request or completion.
  void advance() {
    if (finished()) return;
    if (!started_) {
      started_ = true;
      body_.raw().resume();
    } else {
      resume_point_.resume();
    }
    if (body_.done() && body_.error()) std::rethrow_exception(body_.error());
  }

  /// Applies the pending request; exactly one primitive event (or hardware outcome).
  void execute_pending() {
    const Request req = *pending_;
    pending_.reset();
    switch (req.kind) {
      case RequestKind::direct:
        result_ = {machine_->apply_rmw(pid_, req.base, req.op).old, std::nullopt};
        break;
      case RequestKind::cached:
        result_ = machine_->hw_cached(pid_, req.base, req.op);
        break;
      case RequestKind::hw_direct:
        result_ = machine_->hw_direct(pid_, req.base, req.op);
        break;
      case RequestKind::commit:
        result_ = machine_->hw_commit(pid_);
        break;
    }
  }

  struct StepAwaiter {
    Process* self;
    Request req;
    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<> h) noexcept {
      self->pending_ = req;
      self->resume_point_ = h;
    }
    Word await_resume() const {
      if (self->result_.abort) throw Aborted{to_abort_cause(*self->result_.abort)};
      return self->result_.value;
    }
  };

  /// Direct primitive on memory (slow path). Returns the prior word.
  StepAwaiter direct(BaseId b, Rmw op) { return {this, {RequestKind::direct, b, op}}; }
  /// Cached primitive inside a hardware transaction; throws Aborted on a hardware abort.
  StepAwaiter cached(BaseId b, Rmw op) { return {this, {RequestKind::cached, b, op}}; }
  /// Non-speculative primitive from inside a hardware transaction.
  StepAwaiter hw_direct(BaseId b, Rmw op) { return {this, {RequestKind::hw_direct, b, op}}; }
  /// Cache-commit; throws Aborted if the tracking set was invalidated.
  StepAwaiter commit() { return {this, {RequestKind::commit, BaseId{}, Rmw{}}}; }

  /// Steps charged to the current operation; reset by the transaction runner.
  std::uint64_t op_steps = 0;

 private:
  Machine* machine_;
  Pid pid_;
  Task<void> body_;
  bool started_ = false;
  std::coroutine_handle<> resume_point_;
  std::optional<Request> pending_;
  HwResult result_;
};

}  // namespace hytm
