#include "scheduleak/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace scheduleak {

namespace {

Tick default_gamma(Tick wcet, Tick acet) {
  return std::max<Tick>(0, std::min(wcet - acet, acet - 1));
}

}  // namespace

Rng derive_rng(std::uint64_t master_seed, std::uint64_t a, std::uint64_t b,
               std::uint64_t c) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(master_seed), hi(master_seed), lo(a), hi(a),
                    lo(b),           hi(b),           lo(c), hi(c)};
  return Rng(seq);
}

std::string GenConfig::validate() const {
  if (n_tasks < 1) return "n_tasks must be at least 1";
  if (!(util_lo > 0.0 && util_lo < util_hi && util_hi <= 1.0)) {
    return "utilization range must satisfy 0 < lo < hi <= 1";
  }
  if (!(acet_fraction > 0.0 && acet_fraction <= 1.0)) {
    return "acet_fraction must lie in (0, 1]";
  }
  if (period_factors.empty()) return "period_factors is empty";
  for (Tick f : period_factors) {
    if (f < 2) return "period factors must be at least 2";
  }
  if (max_factors < 1) return "max_factors must be at least 1";
  if (retry_budget < 1) return "retry_budget must be at least 1";
  return {};
}

Tick draw_period(const std::vector<Tick>& factors, int count, bool allow_repetition,
                 Rng& rng) {
  Tick period = 1;
  if (allow_repetition) {
    std::uniform_int_distribution<std::size_t> pick(0, factors.size() - 1);
    for (int i = 0; i < count; ++i) period *= factors[pick(rng)];
    return period;
  }
  std::vector<Tick> pool = factors;
  count = std::min<int>(count, static_cast<int>(pool.size()));
  // partial Fisher-Yates
  for (int i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
    period *= pool[i];
  }
  return period;
}

std::vector<double> split_utilization(double total, int n, Rng& rng) {
  std::vector<double> out;
  out.reserve(n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double remaining = total;
  for (int i = 1; i < n; ++i) {
    double next = remaining * std::pow(unit(rng), 1.0 / static_cast<double>(n - i));
    out.push_back(remaining - next);
    remaining = next;
  }
  out.push_back(remaining);
  return out;
}

TaskSet rm_priorities(const TaskSet& taskset) {
  std::vector<TaskSpec> tasks(taskset.tasks().begin(), taskset.tasks().end());
  std::vector<std::size_t> order(tasks.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (tasks[a].period != tasks[b].period) return tasks[a].period < tasks[b].period;
    return tasks[a].id < tasks[b].id;
  });
  const int n = static_cast<int>(tasks.size());
  for (int rank = 0; rank < n; ++rank) tasks[order[rank]].priority = n - rank;
  return TaskSet(std::move(tasks));
}

Tick response_time(const TaskSet& taskset, std::size_t index) {
  const TaskSpec& self = taskset[index];
  Tick r = self.wcet;
  while (true) {
    Tick next = self.wcet;
    for (const auto& other : taskset.tasks()) {
      if (other.priority > self.priority) next += ceil_div(r, other.period) * other.wcet;
    }
    if (next > self.deadline()) return -1;
    if (next == r) return r;
    r = next;
  }
}

bool rta_schedulable(const TaskSet& taskset) {
  for (std::size_t i = 0; i < taskset.size(); ++i) {
    if (response_time(taskset, i) < 0) return false;
  }
  return true;
}

int harmonic_pairs(const TaskSet& taskset) {
  int pairs = 0;
  auto tasks = taskset.tasks();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    for (std::size_t j = i + 1; j < tasks.size(); ++j) {
      Tick a = tasks[i].period, b = tasks[j].period;
      if (a % b == 0 || b % a == 0) ++pairs;
    }
  }
  return pairs;
}

TaskSet with_acet_fraction(const TaskSet& taskset, double fraction) {
  std::vector<TaskSpec> tasks(taskset.tasks().begin(), taskset.tasks().end());
  for (auto& t : tasks) {
    t.acet = std::clamp<Tick>(std::llround(fraction * static_cast<double>(t.wcet)), 1,
                              t.wcet);
    t.gamma = default_gamma(t.wcet, t.acet);
  }
  return TaskSet(std::move(tasks));
}

TaskSet generate_taskset(const GenConfig& config) {
  Rng rng(config.rng_seed);
  return generate_taskset(config, rng);
}

TaskSet generate_taskset(const GenConfig& config, Rng& rng) {
  if (auto err = config.validate(); !err.empty()) {
    throw Error(ErrorCode::configuration, "invalid generator config: " + err);
  }
  const int factor_limit =
      config.allow_factor_repetition
          ? config.max_factors
          : std::min<int>(config.max_factors, static_cast<int>(config.period_factors.size()));
  std::uniform_real_distribution<double> total_dist(config.util_lo, config.util_hi);
  std::uniform_int_distribution<int> count_dist(1, factor_limit);

  for (int attempt = 0; attempt < config.retry_budget; ++attempt) {
    const double total = total_dist(rng);
    const auto shares = split_utilization(total, config.n_tasks, rng);
    std::vector<TaskSpec> tasks;
    tasks.reserve(config.n_tasks);
    bool ok = true;
    for (int i = 0; i < config.n_tasks; ++i) {
      TaskSpec t;
      t.id = i + 1;
      t.period = draw_period(config.period_factors, count_dist(rng),
                             config.allow_factor_repetition, rng);
      std::uniform_int_distribution<Tick> offset_dist(0, t.period - 1);
      t.offset = offset_dist(rng);
      t.wcet = std::max<Tick>(1, std::llround(shares[i] * static_cast<double>(t.period)));
      if (t.period > config.hyper_period_cap || t.wcet > t.period) {
        ok = false;
        continue;
      }
      t.acet = std::clamp<Tick>(
          std::llround(config.acet_fraction * static_cast<double>(t.wcet)), 1, t.wcet);
      t.gamma = default_gamma(t.wcet, t.acet);
      tasks.push_back(t);
    }
    if (!ok) continue;

    Tick h = 1;
    for (const auto& t : tasks) {
      h = lcm_checked(h, t.period);
      if (h > config.hyper_period_cap) break;
    }
    if (h > config.hyper_period_cap) continue;

    TaskSet ts = rm_priorities(TaskSet(std::move(tasks)));
    const double u = ts.utilization();
    if (u < config.util_lo || u > config.util_hi) continue;
    if (!rta_schedulable(ts)) continue;
    return ts;
  }
  std::ostringstream msg;
  msg << "generation infeasible: no valid task set within " << config.retry_budget
      << " draws (n=" << config.n_tasks << ", util=[" << config.util_lo << ", "
      << config.util_hi << "])";
  throw Error(ErrorCode::generation_infeasible, msg.str());
}

}  // namespace scheduleak
