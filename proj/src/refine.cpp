#include "scheduleak/refine.hpp"

#include <algorithm>

namespace scheduleak {

InferenceState initial_state(const TaskSet& taskset, std::span<const BusyInterval> intervals,
                             const RefineOptions& options) {
  InferenceState state;
  state.vectors.reserve(intervals.size());
  for (const auto& bi : intervals) {
    MatchResult m = enumerate_matches(taskset, bi, options.tolerance);
    if (m.forced) ++state.forced;
    state.vectors.push_back(std::move(m.vectors));
  }
  update_windows(taskset, intervals, state);
  return state;
}

void update_windows(const TaskSet& taskset, std::span<const BusyInterval> intervals,
                    InferenceState& state) {
  const std::size_t n = taskset.size();
  state.windows.assign(n, {});
  state.histograms.assign(n, {});
  state.skipped.clear();
  std::vector<ClassifiedSegment> segments;
  for (std::size_t i = 0; i < n; ++i) {
    const TaskSpec& task = taskset[i];
    segments.clear();
    for (std::size_t k = 0; k < intervals.size(); ++k) {
      const CountCandidates cands = candidates_from_vectors(state.vectors[k], i);
      if (!cands.ambiguous && cands.low == 0) continue;
      try {
        auto segs = classify_segments(task, intervals[k], cands, static_cast<int>(k));
        segments.insert(segments.end(), segs.begin(), segs.end());
      } catch (const Error& e) {
        if (e.code() != ErrorCode::degenerate_segment) throw;
        state.skipped.insert({i, k});
      }
    }
    state.histograms[i] = accumulate_histogram(task, segments);
    try {
      state.windows[i] = candidate_arrival_windows(state.histograms[i]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::no_arrival_evidence) throw;
    }
  }
}

TickRange project_window(const ArrivalWindow& window, const TaskSpec& task,
                         const BusyInterval& interval, int h) {
  const Tick p = task.period;
  const Tick shift = (ceil_div(interval.start, p) + h - 1) * p;
  const Tick end = window.wraps() ? window.end + p : window.end;
  return {window.begin + shift, end + shift};
}

int implied_count(const ArrivalWindow& window, const TaskSpec& task,
                  const BusyInterval& interval, const CountCandidates& cands) {
  if (!cands.ambiguous) return cands.low;
  const Tick p = task.period;
  // The 0-1 segment: an arrival here is the (N+1)-th job.
  const Tick lo = interval.start + cands.low * p;
  const Tick hi = interval.end() - task.effective_exec();
  if (hi < lo) return cands.low;

  // Walk every shift of the window that touches [lo, hi], including those
  // below h = 1 when the window begins past s_k mod p.
  const TickRange base = project_window(window, task, interval, 1);
  const Tick width = base.end - base.begin;
  const Tick first = ceil_div(lo - base.end, p);
  const Tick last = floor_div(hi - base.begin, p);
  bool inside = false;
  for (Tick j = first; j <= last; ++j) {
    const Tick b = base.begin + j * p;
    const Tick e = b + width;
    if (b >= lo && e <= hi) {
      inside = true;
    } else if (e >= lo && b <= hi) {
      return -1;
    }
  }
  return inside ? cands.low + 1 : cands.low;
}

bool resolve_interval(InferenceState& state, const TaskSet& taskset, std::size_t task_index,
                      std::span<const BusyInterval> intervals, std::size_t interval_index) {
  const auto& windows = state.windows[task_index];
  if (windows.size() != 1) return false;
  auto& vectors = state.vectors[interval_index];
  const CountCandidates cands = candidates_from_vectors(vectors, task_index);
  if (!cands.ambiguous) return false;
  const int n =
      implied_count(windows.front(), taskset[task_index], intervals[interval_index], cands);
  if (n < 0) return false;

  std::vector<JobCountVector> kept;
  for (const auto& v : vectors) {
    if (v.counts[task_index] == n) kept.push_back(v);
  }
  if (kept.size() == vectors.size()) return false;
  if (kept.empty()) {
    state.conflicts.insert({task_index, interval_index});
    if (vectors.size() > 1) {
      vectors.resize(1);
      return true;
    }
    return false;
  }
  vectors = std::move(kept);
  return true;
}

InferenceState refine_fixpoint(const TaskSet& taskset, std::span<const BusyInterval> intervals,
                               InferenceState state, const RefineOptions& options) {
  state.iterations = 0;
  state.unconverged = false;
  state.log.clear();
  while (true) {
    ++state.iterations;
    update_windows(taskset, intervals, state);

    IterationLog entry;
    entry.iteration = state.iterations;
    bool changed = false;
    for (std::size_t i = 0; i < taskset.size(); ++i) {
      if (state.windows[i].size() != 1) continue;
      ++entry.unique_tasks;
      for (std::size_t k = 0; k < intervals.size(); ++k) {
        changed |= resolve_interval(state, taskset, i, intervals, k);
      }
    }
    for (const auto& v : state.vectors) entry.vectors += v.size();
    for (const auto& w : state.windows) entry.windows += w.size();
    entry.changed = changed;
    state.log.push_back(entry);
    state.changed = changed;

    if (!changed) break;
    if (state.iterations >= options.max_iterations) {
      state.unconverged = true;
      update_windows(taskset, intervals, state);
      break;
    }
  }
  return state;
}

}  // namespace scheduleak
