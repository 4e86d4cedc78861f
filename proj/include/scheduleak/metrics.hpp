#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scheduleak/simulator.hpp"
#include "scheduleak/translate.hpp"

namespace scheduleak {

struct TaskPrecision {
  TaskId task_id = 0;
  Tick period = 1;
  std::vector<Tick> errors;  // inferred start minus actual start, matched jobs only
  double sd = 0.0;
  double precision = 1.0;
  std::size_t matched = 0;
  std::size_t unmatched = 0;  // jobs present on one side only
};

struct PrecisionReport {
  std::vector<TaskPrecision> tasks;  // indexed like TaskSet::tasks()
  double eta_prime = 1.0;
};

/// Scores inferred start times against the trace over the given busy
/// intervals. Each task's actual and inferred starts are paired in order,
/// at most one period apart, minimizing squared error; a job without a
/// partner costs one full period.
PrecisionReport precision_ratio(const Trace& truth, const ReconstructedSchedule& inferred,
                                const TaskSet& taskset, std::span<const BusyInterval> intervals);

/// Same, over the trace's busy intervals lying inside the window.
PrecisionReport precision_ratio(const Trace& truth, const ReconstructedSchedule& inferred,
                                const TaskSet& taskset, const ObservationWindow& window);

/// Random guess: each arrival uniform in [0, p), then every interval is
/// replayed with the grid arrivals that fall inside it.
ReconstructedSchedule naive_baseline(const TaskSet& taskset,
                                     std::span<const BusyInterval> intervals,
                                     std::uint64_t seed);

}  // namespace scheduleak
