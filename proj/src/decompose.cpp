#include "scheduleak/decompose.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <unordered_map>

namespace scheduleak {

CountCandidates job_count_candidates(const TaskSpec& task, Tick length) {
  if (length <= 0) throw Error(ErrorCode::configuration, "busy interval length must be positive");
  const Tick c = task.effective_exec();
  if (c <= 0) {
    throw Error(ErrorCode::tolerance_exceeds_execution,
                "tolerance exceeds execution time for task " + std::to_string(task.id));
  }
  const Tick p = task.period;

  // Exact-count ranges [(Np - c)+, Np + c) and two-count ranges
  // [Np + c, (N+1)p - c) tile the axis when 2c <= p; for 2c > p the exact
  // ranges of N and N + 1 overlap and both counts are kept.
  int lo = std::numeric_limits<int>::max();
  int hi = -1;
  const Tick base = length / p;
  for (Tick n = std::max<Tick>(0, base - 1); n <= base + 1; ++n) {
    if (std::max<Tick>(0, n * p - c) <= length && length < n * p + c) {
      lo = std::min(lo, static_cast<int>(n));
      hi = std::max(hi, static_cast<int>(n));
    }
    if (n * p + c <= length && length < (n + 1) * p - c) {
      lo = std::min(lo, static_cast<int>(n));
      hi = std::max(hi, static_cast<int>(n + 1));
    }
  }
  assert(hi >= lo && hi - lo <= 1);
  return CountCandidates{lo, hi > lo};
}

namespace {

struct Enumerator {
  std::span<const TaskSpec> tasks;
  std::vector<CountCandidates> cands;
  Tick length = 0;
  ToleranceMode mode = ToleranceMode::per_vector;
  Tick fixed_tolerance = 0;  // max_count mode
  std::vector<Tick> suffix_min;  // smallest reachable (sum - tol) contribution
  std::vector<Tick> suffix_max;  // largest reachable (sum + tol) contribution
  std::vector<int> counts;
  std::vector<JobCountVector> out;

  void prepare() {
    const std::size_t n = tasks.size();
    suffix_min.assign(n + 1, 0);
    suffix_max.assign(n + 1, 0);
    for (std::size_t i = n; i-- > 0;) {
      const TaskSpec& t = tasks[i];
      const Tick g = mode == ToleranceMode::per_vector ? t.gamma : 0;
      suffix_min[i] = suffix_min[i + 1] + (t.acet - g) * cands[i].low;
      suffix_max[i] = suffix_max[i + 1] + (t.acet + g) * cands[i].high();
    }
    if (mode == ToleranceMode::max_count) {
      for (std::size_t i = 0; i < n; ++i) fixed_tolerance += tasks[i].gamma * cands[i].high();
    }
    counts.assign(n, 0);
  }

  void run(std::size_t i, Tick sum, Tick tol) {
    const Tick total_tol = mode == ToleranceMode::per_vector ? tol : fixed_tolerance;
    const Tick lower = mode == ToleranceMode::per_vector ? sum - tol : sum - total_tol;
    const Tick upper = mode == ToleranceMode::per_vector ? sum + tol : sum + total_tol;
    if (lower + suffix_min[i] > length || upper + suffix_max[i] < length) return;
    if (i == tasks.size()) {
      const Tick residual = sum > length ? sum - length : length - sum;
      if (residual <= total_tol) out.push_back({counts, residual});
      return;
    }
    for (int n : cands[i].values()) {
      counts[i] = n;
      run(i + 1, sum + tasks[i].acet * n, tol + tasks[i].gamma * n);
    }
  }

  // Fallback: minimal residual over the whole product, ignoring tolerance.
  void best(std::size_t i, Tick sum, JobCountVector& best_vec) {
    if (i == tasks.size()) {
      const Tick residual = sum > length ? sum - length : length - sum;
      if (best_vec.counts.empty() || residual < best_vec.residual ||
          (residual == best_vec.residual && counts < best_vec.counts)) {
        best_vec = {counts, residual};
      }
      return;
    }
    for (int n : cands[i].values()) {
      counts[i] = n;
      best(i + 1, sum + tasks[i].acet * n, best_vec);
    }
  }
};

}  // namespace

MatchResult enumerate_matches(const TaskSet& taskset, const BusyInterval& interval,
                              ToleranceMode mode) {
  Enumerator e;
  e.tasks = taskset.tasks();
  e.length = interval.length;
  e.mode = mode;
  e.cands.reserve(taskset.size());
  for (const auto& t : taskset.tasks()) e.cands.push_back(job_count_candidates(t, interval.length));
  e.prepare();
  e.run(0, 0, 0);

  MatchResult result;
  if (e.out.empty()) {
    JobCountVector fallback;
    e.best(0, 0, fallback);
    result.vectors.push_back(std::move(fallback));
    result.forced = true;
    return result;
  }
  std::sort(e.out.begin(), e.out.end(), [](const JobCountVector& a, const JobCountVector& b) {
    if (a.residual != b.residual) return a.residual < b.residual;
    return a.counts < b.counts;
  });
  result.vectors = std::move(e.out);
  return result;
}

CountCandidates candidates_from_vectors(const std::vector<JobCountVector>& vectors,
                                        std::size_t task_index) {
  int lo = std::numeric_limits<int>::max();
  int hi = -1;
  for (const auto& v : vectors) {
    lo = std::min(lo, v.counts.at(task_index));
    hi = std::max(hi, v.counts.at(task_index));
  }
  if (hi < 0) return {};
  assert(hi - lo <= 1);
  return CountCandidates{lo, hi > lo};
}

std::optional<AmbiguityWitness> ambiguity_witness(const TaskSet& taskset) {
  const std::size_t n = taskset.size();
  if (n > 20) throw Error(ErrorCode::configuration, "ambiguity_witness supports at most 20 tasks");
  std::unordered_map<Tick, std::uint32_t> first_mask;
  const std::uint32_t limit = 1u << n;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    Tick sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) sum += taskset[i].acet;
    }
    auto [it, inserted] = first_mask.emplace(sum, mask);
    if (inserted) continue;
    // Distinct subsets with equal sums; dropping the shared part leaves two
    // disjoint non-empty groups with equal sums.
    const std::uint32_t a = it->second & ~mask;
    const std::uint32_t b = mask & ~it->second;
    AmbiguityWitness w;
    for (std::size_t i = 0; i < n; ++i) {
      if (a & (1u << i)) w.plus.push_back(taskset[i].id);
      if (b & (1u << i)) w.minus.push_back(taskset[i].id);
    }
    return w;
  }
  return std::nullopt;
}

}  // namespace scheduleak
