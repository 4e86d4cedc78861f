#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scheduleak/metrics.hpp"
#include "scheduleak/refine.hpp"

namespace scheduleak {

/// Task set as the attacker models it: variation `none` drops gamma, a
/// truncated normal moves acet to mean_fraction * wcet.
TaskSet attack_view(const TaskSet& taskset, const VariationModel& variation);

struct AttackResult {
  InferenceState state;
  ReconstructedSchedule schedule;
};

/// decompose -> windows -> refine -> translate over observed intervals.
AttackResult run_attack(const TaskSet& taskset, const std::vector<BusyInterval>& intervals,
                        const RefineOptions& options = {});

struct PipelineOptions {
  VariationModel variation;
  double observe_fraction = 1.0;  // of one hyper-period
  /// First observed tick; negative means one hyper-period of warm-up so
  /// every observed job has a predecessor.
  Tick window_start = -1;
  RefineOptions refine;
  bool with_naive = true;
  bool record_timing = false;
};

struct Diagnostics {
  int iterations = 0;
  std::size_t forced = 0;
  std::size_t conflicts = 0;
  std::size_t dropped = 0;
  std::size_t overflows = 0;
  std::size_t observed_intervals = 0;
  std::size_t evaluated_intervals = 0;
  bool unconverged = false;
  bool missing_windows = false;
  bool no_observations = false;
  double wall_ms = 0.0;  // zero unless timing was requested
};

struct PipelineResult {
  TaskSet attack_set;
  Trace trace;
  ObservationWindow observation;
  ObservationWindow evaluation;  // one hyper-period from the window start
  std::vector<BusyInterval> observed;
  AttackResult attack;
  PrecisionReport report;           // over the evaluation hyper-period
  PrecisionReport observed_report;  // over observed intervals only
  std::optional<PrecisionReport> naive_report;
  Diagnostics diagnostics;
};

/// simulate -> busy intervals -> clip -> attack -> score. Evaluation
/// intervals left unobserved are filled by replaying the committed arrivals.
PipelineResult run_pipeline(const TaskSet& taskset, const PipelineOptions& options,
                            std::uint64_t seed);

enum class SweepKind { utilization, variation, task_count, observation };

struct SweepConfig {
  SweepKind kind = SweepKind::utilization;
  std::vector<std::pair<double, double>> bins;  // empty: ten bins of width 0.1
  /// Row labels and seed streams of the bins; empty means their positions.
  std::vector<int> bin_ids;
  int sets_per_bin = 20;
  std::vector<int> task_counts{10};
  std::vector<VariationModel> variations{VariationModel{}};
  std::vector<double> obs_fractions{1.0};
  std::uint64_t master_seed = 1;
  unsigned workers = 0;  // 0: hardware concurrency
  bool record_timing = false;
  bool with_naive = true;
  RefineOptions refine;

  /// Fills in the kind's defaults for unset axes.
  static SweepConfig defaults(SweepKind kind);
  std::string validate() const;
};

struct SweepRow {
  std::uint64_t seed = 0;
  int bin = 0;
  int set_index = 0;
  int n_tasks = 0;
  double utilization = 0.0;
  std::string variation;
  double obs_fraction = 1.0;
  double eta_prime = 0.0;
  double eta_prime_observed = 0.0;
  double eta_naive = 0.0;
  double mean_sd = 0.0;
  std::size_t forced = 0;
  std::size_t conflicts = 0;
  int harmonic_pairs = 0;
  int iterations = 0;
  double runtime_ms = 0.0;
  std::string status = "ok";
  bool ok() const noexcept { return status == "ok"; }
};

struct SweepAggregate {
  std::string metric;
  int bin = 0;
  int n_tasks = 0;
  std::string variation;
  double obs_fraction = 1.0;
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by bin, task count, set, variation, fraction
  std::vector<SweepAggregate> aggregates;
};

std::string variation_label(const VariationModel& variation);
std::vector<std::pair<double, double>> default_bins();

SweepResult run_sweep(const SweepConfig& config);

/// Aggregates over successful rows grouped by bin, task count, variation and
/// fraction.
std::vector<SweepAggregate> aggregate_rows(const std::vector<SweepRow>& rows);

void write_sweep_csv(std::ostream& out, const SweepResult& result);

}  // namespace scheduleak
