#include "scheduleak/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

#include <boost/math/distributions/normal.hpp>

namespace scheduleak {

std::string VariationModel::validate() const {
  if (!(mean_fraction > 0.0 && mean_fraction <= 1.0)) return "mean_fraction must lie in (0, 1]";
  if (!(upper_tail_prob > 0.0 && upper_tail_prob < 0.5)) {
    return "upper_tail_prob must lie in (0, 0.5)";
  }
  if (arrival_jitter < 0) return "arrival_jitter must be non-negative";
  return {};
}

double tail_quantile(double upper_tail_prob) {
  return boost::math::quantile(boost::math::normal_distribution<double>(),
                               1.0 - upper_tail_prob);
}

Tick sample_exec_time(const TaskSpec& task, const VariationModel& variation, Rng& rng) {
  if (variation.kind == VariationKind::none || task.wcet == task.acet) return task.acet;
  const double z = tail_quantile(variation.upper_tail_prob);
  const double sigma = static_cast<double>(task.wcet - task.acet) / z;
  std::normal_distribution<double> dist(static_cast<double>(task.acet), sigma);
  const Tick drawn = static_cast<Tick>(std::floor(dist(rng) + 0.5));
  const Tick lo = std::max<Tick>(1, 2 * task.acet - task.wcet);
  return std::clamp(drawn, lo, task.wcet);
}

namespace {

constexpr Tick kNever = std::numeric_limits<Tick>::max();

struct TaskState {
  int next_ordinal = 0;
  Tick next_arrival = kNever;
  Tick last_arrival = -1;
  std::deque<std::size_t> pending;  // indices into trace.jobs[task]
  std::vector<Tick> remaining;      // per job
};

}  // namespace

Trace simulate(const TaskSet& taskset, Tick horizon, const VariationModel& variation,
               std::uint64_t seed) {
  if (horizon < 0) throw Error(ErrorCode::configuration, "negative horizon");
  if (auto err = variation.validate(); !err.empty()) {
    throw Error(ErrorCode::configuration, "invalid variation model: " + err);
  }
  Trace trace;
  trace.horizon = horizon;
  const std::size_t n = taskset.size();
  trace.jobs.resize(n);
  Rng rng(seed);
  const bool jitter = variation.arrival_jitter > 0;

  std::vector<TaskState> state(n);
  auto schedule_next_arrival = [&](std::size_t i) {
    const TaskSpec& task = taskset[i];
    TaskState& st = state[i];
    Tick arrival = task.offset + static_cast<Tick>(st.next_ordinal) * task.period;
    if (jitter && task.theta > 0) {
      std::uniform_int_distribution<Tick> shift(-task.theta, task.theta);
      arrival += shift(rng);
      arrival = std::max({arrival, Tick{0}, st.last_arrival + 1});
    }
    st.next_arrival = arrival < horizon ? arrival : kNever;
  };
  for (std::size_t i = 0; i < n; ++i) schedule_next_arrival(i);

  auto add_idle = [&](Tick from, Tick to) {
    if (from >= to) return;
    if (!trace.idle.empty() && trace.idle.back().end == from) {
      trace.idle.back().end = to;
    } else {
      trace.idle.push_back({from, to});
    }
  };

  std::size_t last_task = n;
  std::size_t last_job = 0;
  Tick t = 0;
  while (t < horizon) {
    for (std::size_t i = 0; i < n; ++i) {
      TaskState& st = state[i];
      while (st.next_arrival <= t) {
        Job job;
        job.task_id = taskset[i].id;
        job.ordinal = st.next_ordinal;
        job.arrival = st.next_arrival;
        job.exec = sample_exec_time(taskset[i], variation, rng);
        st.pending.push_back(trace.jobs[i].size());
        st.remaining.push_back(job.exec);
        trace.jobs[i].push_back(job);
        st.last_arrival = job.arrival;
        ++st.next_ordinal;
        schedule_next_arrival(i);
      }
    }

    Tick next_arrival = kNever;
    std::size_t running = n;
    for (std::size_t i = 0; i < n; ++i) {
      next_arrival = std::min(next_arrival, state[i].next_arrival);
      if (!state[i].pending.empty() &&
          (running == n || taskset[i].priority > taskset[running].priority)) {
        running = i;
      }
    }

    if (running == n) {
      const Tick until = std::min(next_arrival, horizon);
      add_idle(t, until);
      t = until;
      continue;
    }

    TaskState& st = state[running];
    const std::size_t job_index = st.pending.front();
    Job& job = trace.jobs[running][job_index];
    Tick& remaining = st.remaining[job_index];
    if (!job.started()) job.start = t;
    const Tick until = std::min({t + remaining, next_arrival, horizon});

    if (!trace.slices.empty() && last_task == running && last_job == job_index &&
        trace.slices.back().end == t) {
      trace.slices.back().end = until;
    } else {
      trace.slices.push_back({job.task_id, t, until});
    }
    last_task = running;
    last_job = job_index;
    remaining -= until - t;
    t = until;

    if (remaining == 0) {
      job.completion = t;
      st.pending.pop_front();
      if (!jitter && job.completion > job.arrival + taskset[running].deadline()) {
        throw std::logic_error("deadline miss for task " + std::to_string(job.task_id) +
                               " job " + std::to_string(job.ordinal));
      }
    }
  }
  return trace;
}

std::vector<BusyInterval> busy_intervals(const Trace& trace) {
  std::vector<BusyInterval> out;
  for (const auto& s : trace.slices) {
    if (!out.empty() && out.back().end() == s.begin) {
      out.back().length += s.end - s.begin;
    } else {
      out.push_back({s.begin, s.end - s.begin});
    }
  }
  return out;
}

std::vector<BusyInterval> clip_observation(const std::vector<BusyInterval>& intervals,
                                           const ObservationWindow& window) {
  std::vector<BusyInterval> out;
  for (const auto& bi : intervals) {
    if (bi.start >= window.start && bi.end() <= window.end()) out.push_back(bi);
  }
  return out;
}

}  // namespace scheduleak
