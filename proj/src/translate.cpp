#include "scheduleak/translate.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace scheduleak {

Tick commit_arrival(std::span<const ArrivalWindow> windows) {
  if (windows.empty()) throw Error(ErrorCode::no_arrival_evidence, "no window to commit");
  Tick best = windows.front().begin;
  for (const auto& w : windows) best = std::min(best, w.begin);
  return best;
}

IntervalArrivals arrivals_in_interval(Tick committed, const TaskSpec& task,
                                      const BusyInterval& interval, int count) {
  IntervalArrivals out;
  const Tick p = task.period;
  const Tick first = committed + ceil_div(interval.start - committed, p) * p;
  for (int h = 0; h < count; ++h) {
    const Tick sigma = first + h * p;
    if (sigma >= interval.end()) {
      ++out.dropped;
    } else {
      out.arrivals.push_back(sigma);
    }
  }
  return out;
}

Translation compact_translate(const TaskSet& taskset, const BusyInterval& interval,
                              std::span<const ArrivalEvent> arrivals) {
  Translation out;
  out.jobs.resize(arrivals.size());
  if (arrivals.empty()) {
    out.finish = interval.start;
    return out;
  }

  std::vector<std::size_t> order(arrivals.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (arrivals[a].arrival != arrivals[b].arrival) return arrivals[a].arrival < arrivals[b].arrival;
    return taskset[arrivals[a].task_index].priority > taskset[arrivals[b].task_index].priority;
  });

  std::vector<Tick> remaining(arrivals.size());
  std::vector<bool> started(arrivals.size(), false);
  std::vector<std::size_t> ready;
  Tick slack = 0;
  for (std::size_t j = 0; j < arrivals.size(); ++j) {
    const TaskSpec& task = taskset[arrivals[j].task_index];
    remaining[j] = task.acet;
    slack += task.gamma;
    out.jobs[j] = {task.id, interval.start, arrivals[j].arrival, -1};
  }

  // Earliest-then-highest-priority pop order; among jobs of equal priority
  // the earlier arrival wins.
  auto better = [&](std::size_t a, std::size_t b) {
    const int pa = taskset[arrivals[a].task_index].priority;
    const int pb = taskset[arrivals[b].task_index].priority;
    if (pa != pb) return pa > pb;
    return arrivals[a].arrival < arrivals[b].arrival;
  };

  std::size_t next = 0;
  Tick t = arrivals[order.front()].arrival;
  while (next < order.size() || !ready.empty()) {
    while (next < order.size() && arrivals[order[next]].arrival <= t) ready.push_back(order[next++]);
    if (ready.empty()) {
      t = arrivals[order[next]].arrival;
      continue;
    }
    auto it = std::min_element(ready.begin(), ready.end(), better);
    const std::size_t j = *it;
    if (!started[j]) {
      started[j] = true;
      out.jobs[j].start = t;
    }
    const Tick horizon =
        next < order.size() ? arrivals[order[next]].arrival : std::numeric_limits<Tick>::max();
    const Tick until = std::min(t + remaining[j], horizon);
    remaining[j] -= until - t;
    t = until;
    if (remaining[j] == 0) ready.erase(it);
  }
  out.finish = t;
  out.overflow = t > interval.end() + slack;
  return out;
}

namespace {

void replay_interval(const TaskSet& taskset, const BusyInterval& interval,
                     const std::vector<std::optional<Tick>>& committed,
                     const std::vector<int>* counts, ReconstructedSchedule& out) {
  std::vector<ArrivalEvent> events;
  for (std::size_t i = 0; i < taskset.size(); ++i) {
    if (!committed[i]) continue;
    const TaskSpec& task = taskset[i];
    int count = 0;
    if (counts) {
      count = (*counts)[i];
    } else {
      const Tick first = *committed[i] + ceil_div(interval.start - *committed[i], task.period) * task.period;
      if (first < interval.end()) {
        count = static_cast<int>(ceil_div(interval.end() - first, task.period));
      }
    }
    IntervalArrivals a = arrivals_in_interval(*committed[i], task, interval, count);
    out.dropped += a.dropped;
    for (Tick sigma : a.arrivals) events.push_back({i, sigma});
  }
  Translation tr = compact_translate(taskset, interval, events);
  if (tr.overflow) ++out.overflows;
  std::vector<std::size_t> order(events.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return tr.jobs[a].arrival < tr.jobs[b].arrival;
  });
  for (std::size_t j : order) out.jobs.push_back(tr.jobs[j]);
}

}  // namespace

ReconstructedSchedule reconstruct(const TaskSet& taskset, std::span<const BusyInterval> intervals,
                                  const InferenceState& state, VectorChoice choice) {
  ReconstructedSchedule out;
  out.committed.resize(taskset.size());
  for (std::size_t i = 0; i < taskset.size(); ++i) {
    if (i < state.windows.size() && !state.windows[i].empty()) {
      out.committed[i] = commit_arrival(state.windows[i]);
    } else {
      out.missing_windows = true;
    }
  }
  out.conflicts = state.conflicts.size();
  out.forced = state.forced;
  out.unconverged = state.unconverged;
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    const auto& vectors = state.vectors.at(k);
    if (vectors.empty()) continue;
    const BusyInterval& bi = intervals[k];
    if (choice == VectorChoice::min_residual) {
      replay_interval(taskset, bi, out.committed, &vectors.front().counts, out);
      continue;
    }
    // Grid points of each committed arrival that could start inside bi.
    std::vector<int> grid(taskset.size(), -1);
    for (std::size_t i = 0; i < taskset.size(); ++i) {
      if (!out.committed[i]) continue;
      const TaskSpec& t = taskset[i];
      const Tick first = *out.committed[i] + ceil_div(bi.start - *out.committed[i], t.period) * t.period;
      const Tick last = bi.end() - t.effective_exec();
      grid[i] = last < first ? 0 : static_cast<int>((last - first) / t.period + 1);
    }
    // Fewest tasks whose count disagrees with the grid; earlier vectors
    // (smaller residual) win ties.
    const JobCountVector* best = &vectors.front();
    int best_miss = -1;
    for (const auto& v : vectors) {
      int miss = 0;
      for (std::size_t i = 0; i < taskset.size(); ++i) {
        if (grid[i] >= 0 && grid[i] != v.counts[i]) ++miss;
      }
      if (best_miss < 0 || miss < best_miss) {
        best = &v;
        best_miss = miss;
      }
    }
    replay_interval(taskset, bi, out.committed, &best->counts, out);
  }
  return out;
}

ReconstructedSchedule reconstruct_nominal(const TaskSet& taskset,
                                          std::span<const BusyInterval> intervals,
                                          const std::vector<std::optional<Tick>>& committed) {
  ReconstructedSchedule out;
  out.committed = committed;
  for (const auto& c : committed) {
    if (!c) out.missing_windows = true;
  }
  for (const auto& bi : intervals) replay_interval(taskset, bi, committed, nullptr, out);
  return out;
}

}  // namespace scheduleak
