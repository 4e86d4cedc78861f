#pragma once

#include <vector>

#include "scheduleak/model.hpp"

namespace scheduleak::fixtures {

// (p, c) = (5,1), (6,2), (10,2), zero offsets, RM priorities.
inline TaskSet example1() {
  return TaskSet({{1, 5, 1, 1, 0, 3, 0, 0}, {2, 6, 2, 2, 0, 2, 0, 0}, {3, 10, 2, 2, 0, 1, 0, 0}});
}

// (p, c) = (5,1), (17,6), (24,7).
inline TaskSet appendix_set() {
  return TaskSet({{1, 5, 1, 1, 0, 3, 0, 0}, {2, 17, 6, 6, 0, 2, 0, 0}, {3, 24, 7, 7, 0, 1, 0, 0}});
}

struct TickJob {
  Tick arrival;
  Tick start;
};

// Unit-step reference scheduler: at every tick the highest-priority
// released, unfinished job runs for one tick. Execution time is acet.
inline std::vector<std::vector<TickJob>> tick_schedule(const TaskSet& ts, Tick horizon) {
  struct Live {
    std::size_t task;
    Tick arrival;
    Tick left;
    Tick start;
    std::size_t slot;
  };
  std::vector<std::vector<TickJob>> out(ts.size());
  std::vector<Live> live;
  for (Tick t = 0; t < horizon; ++t) {
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const auto& task = ts[i];
      if (t >= task.offset && (t - task.offset) % task.period == 0) {
        out[i].push_back({t, -1});
        live.push_back({i, t, task.acet, -1, out[i].size() - 1});
      }
    }
    Live* run = nullptr;
    for (auto& j : live) {
      if (!run || ts[j.task].priority > ts[run->task].priority ||
          (j.task == run->task && j.arrival < run->arrival)) {
        run = &j;
      }
    }
    if (!run) continue;
    if (run->start < 0) {
      run->start = t;
      out[run->task][run->slot].start = t;
    }
    if (--run->left == 0) {
      const Live* done = run;
      std::erase_if(live, [&](const Live& j) { return &j == done; });
    }
  }
  return out;
}

}  // namespace scheduleak::fixtures
