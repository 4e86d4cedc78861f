#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "scheduleak/model.hpp"

namespace scheduleak {

using Rng = std::mt19937_64;

/// Deterministic, independent stream for one experiment of a sweep.
Rng derive_rng(std::uint64_t master_seed, std::uint64_t a, std::uint64_t b = 0,
               std::uint64_t c = 0);

struct GenConfig {
  int n_tasks = 10;
  double util_lo = 0.001;
  double util_hi = 0.1;
  std::vector<Tick> period_factors{2, 3, 5, 7, 11, 13};
  int max_factors = 6;
  bool allow_factor_repetition = false;
  double acet_fraction = 0.8;
  Tick hyper_period_cap = 30030;
  int retry_budget = 10000;
  std::uint64_t rng_seed = 0;

  /// Empty when valid, otherwise the first violated constraint.
  std::string validate() const;
};

/// Draws a random schedulable task set. Offsets are uniform in [0, p),
/// priorities are rate-monotonic, gamma defaults to the clamp range
/// wcet - acet (kept below acet) and theta to zero.
TaskSet generate_taskset(const GenConfig& config);
TaskSet generate_taskset(const GenConfig& config, Rng& rng);

/// Product of `count` factors drawn from `factors`.
Tick draw_period(const std::vector<Tick>& factors, int count, bool allow_repetition,
                 Rng& rng);

/// UUniFast: `n` positive shares summing to `total`, uniform over the simplex.
std::vector<double> split_utilization(double total, int n, Rng& rng);

/// Shorter period gets higher priority; equal periods go to the lower id.
TaskSet rm_priorities(const TaskSet& taskset);

/// Worst-case response time of task `index`, or -1 once the fixpoint
/// passes the deadline.
Tick response_time(const TaskSet& taskset, std::size_t index);

bool rta_schedulable(const TaskSet& taskset);

/// Number of task pairs whose periods divide one another.
int harmonic_pairs(const TaskSet& taskset);

/// Returns a copy with acet = max(1, round(fraction * wcet)) and gamma reset
/// to its default for the new acet.
TaskSet with_acet_fraction(const TaskSet& taskset, double fraction);

}  // namespace scheduleak
