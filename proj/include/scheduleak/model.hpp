#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace scheduleak {

/// Simulator time unit. All periods, execution times and interval bounds are
/// whole ticks; signed so that interval arithmetic may dip below zero.
using Tick = std::int64_t;
using TaskId = int;

enum class ErrorCode {
  configuration,
  generation_infeasible,
  io,
  tolerance_exceeds_execution,
  degenerate_segment,
  no_arrival_evidence,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parameters of one periodic task. `offset` is ground truth and is never
/// read by the inference code; everything else is attacker knowledge.
struct TaskSpec {
  TaskId id = 0;
  Tick period = 1;
  Tick wcet = 1;
  Tick acet = 1;     // mean execution time c_i
  Tick offset = 0;   // first arrival a_i
  int priority = 0;  // larger value preempts smaller
  Tick gamma = 0;    // execution time variation bound
  Tick theta = 0;    // arrival jitter bound

  Tick deadline() const noexcept { return period; }

  /// Shortest execution time the inference may assume for one job once
  /// jitter and variation are accounted for.
  Tick effective_exec() const noexcept { return acet - 2 * theta - gamma; }

  double utilization() const noexcept {
    return static_cast<double>(wcet) / static_cast<double>(period);
  }

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

Tick lcm_checked(Tick a, Tick b);

/// Least common multiple of all periods. Throws ErrorCode::configuration
/// on overflow or an empty set.
Tick hyper_period(std::span<const TaskSpec> tasks);

class TaskSet {
 public:
  TaskSet() = default;
  explicit TaskSet(std::vector<TaskSpec> tasks);

  std::span<const TaskSpec> tasks() const noexcept { return tasks_; }
  const TaskSpec& operator[](std::size_t i) const { return tasks_.at(i); }
  std::size_t size() const noexcept { return tasks_.size(); }
  bool empty() const noexcept { return tasks_.empty(); }
  Tick hyper_period() const noexcept { return hyper_period_; }

  /// Position of the task with the given id; throws if absent.
  std::size_t index_of(TaskId id) const;

  double utilization() const noexcept;

  /// Checks every TaskSpec/TaskSet invariant. Returns an empty string when
  /// valid, otherwise a description of the first violation.
  std::string validate() const;

  friend bool operator==(const TaskSet&, const TaskSet&) = default;

 private:
  std::vector<TaskSpec> tasks_;
  Tick hyper_period_ = 0;
};

struct Job {
  TaskId task_id = 0;
  int ordinal = 0;
  Tick arrival = 0;
  Tick start = -1;       // -1 until the job first executes
  Tick completion = -1;  // -1 if unfinished at the horizon
  Tick exec = 0;         // sampled execution time

  bool started() const noexcept { return start >= 0; }
  bool completed() const noexcept { return completion >= 0; }
};

/// Half-open execution run [begin, end) of one task.
struct ExecSlice {
  TaskId task_id = 0;
  Tick begin = 0;
  Tick end = 0;

  friend bool operator==(const ExecSlice&, const ExecSlice&) = default;
};

/// Half-open idle gap [begin, end).
struct IdleInterval {
  Tick begin = 0;
  Tick end = 0;

  friend bool operator==(const IdleInterval&, const IdleInterval&) = default;
};

struct Trace {
  Tick horizon = 0;
  std::vector<ExecSlice> slices;
  std::vector<std::vector<Job>> jobs;  // indexed like TaskSet::tasks()
  std::vector<IdleInterval> idle;
};

/// Observer view of a busy interval: occupies [start, start + length).
struct BusyInterval {
  Tick start = 0;
  Tick length = 0;

  Tick end() const noexcept { return start + length; }
  bool contains(Tick t) const noexcept { return t >= start && t < end(); }

  friend bool operator==(const BusyInterval&, const BusyInterval&) = default;
};

inline Tick floor_div(Tick a, Tick b) {
  Tick q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Tick ceil_div(Tick a, Tick b) { return -floor_div(-a, b); }

inline Tick floor_mod(Tick a, Tick b) { return a - floor_div(a, b) * b; }

}  // namespace scheduleak
