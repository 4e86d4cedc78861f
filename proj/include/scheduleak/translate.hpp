#pragma once

#include <optional>
#include <span>
#include <vector>

#include "scheduleak/refine.hpp"

namespace scheduleak {

struct InferredJob {
  TaskId task_id = 0;
  Tick interval_start = 0;
  Tick arrival = 0;
  Tick start = 0;

  friend bool operator==(const InferredJob&, const InferredJob&) = default;
};

struct ReconstructedSchedule {
  std::vector<std::optional<Tick>> committed;  // per task; empty without a window
  std::vector<InferredJob> jobs;               // ordered by interval, then arrival
  std::size_t dropped = 0;    // arrivals that fell past their interval's end
  std::size_t overflows = 0;  // intervals whose replay ran past the observed end
  std::size_t conflicts = 0;
  std::size_t forced = 0;
  bool unconverged = false;
  bool missing_windows = false;  // some task had no arrival evidence
};

/// Begin of the earliest window. Requires a non-empty list.
Tick commit_arrival(std::span<const ArrivalWindow> windows);

struct IntervalArrivals {
  std::vector<Tick> arrivals;
  std::size_t dropped = 0;
};

/// `count` arrivals on the grid a + kp, starting at the first grid point at
/// or after the interval start; arrivals at or past the interval end are
/// dropped and counted.
IntervalArrivals arrivals_in_interval(Tick committed, const TaskSpec& task,
                                      const BusyInterval& interval, int count);

struct ArrivalEvent {
  std::size_t task_index = 0;
  Tick arrival = 0;
};

struct Translation {
  std::vector<InferredJob> jobs;  // same order as the input arrivals
  Tick finish = 0;
  bool overflow = false;
};

/// Nominal fixed-priority replay of the given arrivals inside one busy
/// interval. A fresh arrival competes with resumed work at the same tick.
Translation compact_translate(const TaskSet& taskset, const BusyInterval& interval,
                              std::span<const ArrivalEvent> arrivals);

enum class VectorChoice {
  min_residual,       // first surviving vector
  commit_consistent,  // vector agreeing with the committed arrivals for most tasks
};

/// Commits one arrival per task and replays every interval with one of its
/// surviving count vectors. With `commit_consistent`, a task's count is
/// compared against the committed grid points in [s_k, s_k + l_k - c_i];
/// residual order breaks ties.
ReconstructedSchedule reconstruct(const TaskSet& taskset, std::span<const BusyInterval> intervals,
                                  const InferenceState& state,
                                  VectorChoice choice = VectorChoice::commit_consistent);

/// Replays intervals from fixed arrivals alone: each task contributes every
/// grid point that lands inside the interval.
ReconstructedSchedule reconstruct_nominal(const TaskSet& taskset,
                                          std::span<const BusyInterval> intervals,
                                          const std::vector<std::optional<Tick>>& committed);

}  // namespace scheduleak
