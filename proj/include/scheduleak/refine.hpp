#pragma once

#include <set>
#include <utility>
#include <vector>

#include "scheduleak/decompose.hpp"
#include "scheduleak/windows.hpp"

namespace scheduleak {

/// Closed tick range.
struct TickRange {
  Tick begin = 0;
  Tick end = 0;

  friend bool operator==(const TickRange&, const TickRange&) = default;
};

struct IterationLog {
  int iteration = 0;
  std::size_t vectors = 0;  // total candidate vectors over all intervals
  std::size_t windows = 0;  // total candidate windows over all tasks
  std::size_t unique_tasks = 0;
  bool changed = false;
};

struct InferenceState {
  std::vector<std::vector<JobCountVector>> vectors;      // per interval
  std::vector<std::vector<ArrivalWindow>> windows;       // per task
  std::vector<ArrivalHistogram> histograms;              // per task
  std::set<std::pair<std::size_t, std::size_t>> skipped; // (task, interval) left out of histograms
  std::set<std::pair<std::size_t, std::size_t>> conflicts;  // (task, interval)
  std::size_t forced = 0;  // intervals that needed the forced-match fallback
  int iterations = 0;
  bool changed = false;
  bool unconverged = false;
  std::vector<IterationLog> log;
};

struct RefineOptions {
  int max_iterations = 16;
  ToleranceMode tolerance = ToleranceMode::per_vector;
};

/// Decomposes every interval and derives the first histograms and windows.
InferenceState initial_state(const TaskSet& taskset, std::span<const BusyInterval> intervals,
                             const RefineOptions& options = {});

/// Recomputes segments, histograms and windows from the current vectors.
void update_windows(const TaskSet& taskset, std::span<const BusyInterval> intervals,
                    InferenceState& state);

/// h-th projection (h >= 1) of a window into the busy interval starting at
/// s_k: the window shifted by (ceil(s_k / p) + h - 1) periods.
TickRange project_window(const ArrivalWindow& window, const TaskSpec& task,
                         const BusyInterval& interval, int h);

/// Settles an ambiguous {N, N+1} count with a single arrival window: N + 1
/// if some projection lies inside the 0-1 segment, N if none touches it,
/// -1 if a projection straddles its edge. Exact candidates are returned as is.
int implied_count(const ArrivalWindow& window, const TaskSpec& task, const BusyInterval& interval,
                  const CountCandidates& cands);

/// Prunes the interval's vectors where the task's count is ambiguous, using
/// its unique window. Returns true if the vector list changed.
bool resolve_interval(InferenceState& state, const TaskSet& taskset, std::size_t task_index,
                      std::span<const BusyInterval> intervals, std::size_t interval_index);

/// Alternates window updates and interval resolution until nothing changes
/// or the iteration cap is hit.
InferenceState refine_fixpoint(const TaskSet& taskset, std::span<const BusyInterval> intervals,
                               InferenceState state, const RefineOptions& options = {});

}  // namespace scheduleak
