#include "scheduleak/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace scheduleak {

namespace {

std::size_t interval_of(std::span<const BusyInterval> intervals, Tick t) {
  auto it = std::upper_bound(intervals.begin(), intervals.end(), t,
                             [](Tick v, const BusyInterval& bi) { return v < bi.start; });
  if (it == intervals.begin()) return intervals.size();
  --it;
  return it->contains(t) ? static_cast<std::size_t>(it - intervals.begin()) : intervals.size();
}

struct Pairing {
  std::vector<Tick> errors;  // inferred minus actual, in actual order
  std::size_t matched = 0;
};

// Order-preserving pairing of two sorted start lists that minimizes
// sum(e^2) + p^2 per unpaired job, allowing |e| <= p. Equivalent to a
// heaviest chain of candidate pairs, weight 2p^2 - e^2, found with a
// prefix-max Fenwick tree over inferred indices.
Pairing pair_starts(const std::vector<Tick>& actual, const std::vector<Tick>& guessed, Tick p) {
  struct Cell {
    std::size_t a, g;
    double score;
    long prev;
  };
  std::vector<Cell> cells;
  const std::size_t m = guessed.size();
  std::vector<std::pair<double, long>> tree(m + 1, {0.0, -1});
  auto query = [&](std::size_t j) {  // best over inferred indices < j
    std::pair<double, long> best{0.0, -1};
    for (; j > 0; j -= j & (~j + 1)) best = std::max(best, tree[j]);
    return best;
  };
  auto update = [&](std::size_t j, std::pair<double, long> v) {
    for (++j; j <= m; j += j & (~j + 1)) tree[j] = std::max(tree[j], v);
  };

  const double pp = static_cast<double>(p) * static_cast<double>(p);
  std::size_t lo = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    while (lo < m && guessed[lo] < actual[i] - p) ++lo;
    const std::size_t row = cells.size();
    for (std::size_t j = lo; j < m && guessed[j] <= actual[i] + p; ++j) {
      const double e = static_cast<double>(guessed[j] - actual[i]);
      const auto [base, prev] = query(j);
      cells.push_back({i, j, base + 2.0 * pp - e * e, prev});
    }
    for (std::size_t c = row; c < cells.size(); ++c) {
      update(cells[c].g, {cells[c].score, static_cast<long>(c)});
    }
  }

  Pairing out;
  long c = query(m).second;
  while (c >= 0) {
    out.errors.push_back(guessed[cells[c].g] - actual[cells[c].a]);
    c = cells[c].prev;
  }
  std::reverse(out.errors.begin(), out.errors.end());
  out.matched = out.errors.size();
  return out;
}

}  // namespace

PrecisionReport precision_ratio(const Trace& truth, const ReconstructedSchedule& inferred,
                                const TaskSet& taskset, std::span<const BusyInterval> intervals) {
  const std::size_t n = taskset.size();
  std::vector<std::vector<Tick>> actual(n), guessed(n);

  for (std::size_t i = 0; i < n && i < truth.jobs.size(); ++i) {
    for (const Job& job : truth.jobs[i]) {
      if (job.started() && interval_of(intervals, job.start) < intervals.size()) {
        actual[i].push_back(job.start);
      }
    }
  }
  for (const InferredJob& job : inferred.jobs) {
    const std::size_t k = interval_of(intervals, job.interval_start);
    if (k >= intervals.size() || intervals[k].start != job.interval_start) continue;
    guessed[taskset.index_of(job.task_id)].push_back(job.start);
  }

  PrecisionReport report;
  report.tasks.resize(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    TaskPrecision& tp = report.tasks[i];
    tp.task_id = taskset[i].id;
    tp.period = taskset[i].period;
    auto& a = actual[i];
    auto& g = guessed[i];
    std::sort(a.begin(), a.end());
    std::sort(g.begin(), g.end());
    Pairing pairing = pair_starts(a, g, tp.period);
    tp.matched = pairing.matched;
    tp.unmatched = a.size() + g.size() - 2 * pairing.matched;
    tp.errors = std::move(pairing.errors);
    double squares = 0.0;
    for (Tick e : tp.errors) squares += static_cast<double>(e) * static_cast<double>(e);
    const double p = static_cast<double>(tp.period);
    squares += static_cast<double>(tp.unmatched) * p * p;
    const std::size_t jobs = tp.matched + tp.unmatched;
    tp.sd = jobs == 0 ? 0.0 : std::sqrt(squares / static_cast<double>(jobs));
    tp.precision = 1.0 - tp.sd / p;
    total += tp.precision;
  }
  report.eta_prime = n == 0 ? 1.0 : total / static_cast<double>(n);
  return report;
}

PrecisionReport precision_ratio(const Trace& truth, const ReconstructedSchedule& inferred,
                                const TaskSet& taskset, const ObservationWindow& window) {
  const auto intervals = clip_observation(busy_intervals(truth), window);
  return precision_ratio(truth, inferred, taskset, intervals);
}

ReconstructedSchedule naive_baseline(const TaskSet& taskset,
                                     std::span<const BusyInterval> intervals,
                                     std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::optional<Tick>> committed;
  committed.reserve(taskset.size());
  for (const auto& task : taskset.tasks()) {
    std::uniform_int_distribution<Tick> dist(0, task.period - 1);
    committed.emplace_back(dist(rng));
  }
  return reconstruct_nominal(taskset, intervals, committed);
}

}  // namespace scheduleak
