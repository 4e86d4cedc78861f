#pragma once

#include <cstdint>
#include <vector>

#include "scheduleak/generator.hpp"
#include "scheduleak/model.hpp"

namespace scheduleak {

enum class VariationKind { none, truncated_normal };

struct VariationModel {
  VariationKind kind = VariationKind::none;
  double mean_fraction = 0.8;
  double upper_tail_prob = 1e-4;
  /// Arrival jitter is applied (bounded per task by TaskSpec::theta) only
  /// when this is positive.
  Tick arrival_jitter = 0;

  std::string validate() const;
};

struct ObservationWindow {
  Tick start = 0;
  Tick length = 1;

  Tick end() const noexcept { return start + length; }
};

/// Standard-normal quantile of 1 - upper_tail_prob (about 3.719 for 1e-4).
double tail_quantile(double upper_tail_prob);

/// One job's execution time. `none` returns acet; `truncated_normal` rounds
/// a N(acet, ((wcet - acet) / z)^2) draw half-up and clamps it into
/// [max(1, 2 acet - wcet), wcet].
Tick sample_exec_time(const TaskSpec& task, const VariationModel& variation, Rng& rng);

/// Fixed-priority preemptive schedule of `taskset` over [0, horizon).
Trace simulate(const TaskSet& taskset, Tick horizon, const VariationModel& variation,
               std::uint64_t seed);

/// Maximal runs of non-idle time, ordered by start.
std::vector<BusyInterval> busy_intervals(const Trace& trace);

/// Keeps only intervals lying entirely inside the window.
std::vector<BusyInterval> clip_observation(const std::vector<BusyInterval>& intervals,
                                           const ObservationWindow& window);

}  // namespace scheduleak
