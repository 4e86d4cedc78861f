#include "scheduleak/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <thread>
#include <tuple>

#include "scheduleak/generator.hpp"

namespace scheduleak {

TaskSet attack_view(const TaskSet& taskset, const VariationModel& variation) {
  if (variation.kind == VariationKind::truncated_normal) {
    return with_acet_fraction(taskset, variation.mean_fraction);
  }
  std::vector<TaskSpec> tasks(taskset.tasks().begin(), taskset.tasks().end());
  for (auto& t : tasks) t.gamma = 0;
  return TaskSet(std::move(tasks));
}

AttackResult run_attack(const TaskSet& taskset, const std::vector<BusyInterval>& intervals,
                        const RefineOptions& options) {
  AttackResult out;
  out.state = refine_fixpoint(taskset, intervals, initial_state(taskset, intervals, options),
                              options);
  out.schedule = reconstruct(taskset, intervals, out.state);
  return out;
}

PipelineResult run_pipeline(const TaskSet& taskset, const PipelineOptions& options,
                            std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  PipelineResult res;
  res.attack_set = attack_view(taskset, options.variation);
  const TaskSet& ts = res.attack_set;
  const Tick h = ts.empty() ? 1 : ts.hyper_period();
  Tick max_period = 1;
  for (const auto& t : ts.tasks()) max_period = std::max(max_period, t.period);

  const Tick start = options.window_start < 0 ? h : options.window_start;
  const Tick observed_length =
      std::max<Tick>(1, std::llround(options.observe_fraction * static_cast<double>(h)));
  res.observation = {start, observed_length};
  res.evaluation = {start, h};
  const Tick horizon = start + std::max(observed_length, h) + 2 * max_period;

  res.trace = simulate(ts, horizon, options.variation, seed);
  const auto all = busy_intervals(res.trace);
  res.observed = clip_observation(all, res.observation);
  const auto evaluated = clip_observation(all, res.evaluation);

  res.attack = run_attack(ts, res.observed, options.refine);
  ReconstructedSchedule& sched = res.attack.schedule;

  // Evaluation intervals nobody observed are predicted from the committed
  // arrivals alone.
  std::vector<BusyInterval> unseen;
  for (const auto& bi : evaluated) {
    if (!std::binary_search(res.observed.begin(), res.observed.end(), bi,
                            [](const BusyInterval& a, const BusyInterval& b) {
                              return a.start < b.start;
                            })) {
      unseen.push_back(bi);
    }
  }
  ReconstructedSchedule scored = sched;
  if (!unseen.empty()) {
    const auto filled = reconstruct_nominal(ts, unseen, sched.committed);
    scored.jobs.insert(scored.jobs.end(), filled.jobs.begin(), filled.jobs.end());
  }

  res.report = precision_ratio(res.trace, scored, ts, evaluated);
  res.observed_report = precision_ratio(res.trace, sched, ts, res.observed);
  if (options.with_naive) {
    Rng rng = derive_rng(seed, 0x6e61697665ULL);
    const auto naive = naive_baseline(ts, evaluated, rng());
    res.naive_report = precision_ratio(res.trace, naive, ts, evaluated);
  }

  Diagnostics& d = res.diagnostics;
  d.iterations = res.attack.state.iterations;
  d.forced = sched.forced;
  d.conflicts = sched.conflicts;
  d.dropped = sched.dropped;
  d.overflows = sched.overflows;
  d.observed_intervals = res.observed.size();
  d.evaluated_intervals = evaluated.size();
  d.unconverged = sched.unconverged;
  d.missing_windows = sched.missing_windows;
  d.no_observations = res.observed.empty();
  if (options.record_timing) {
    d.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
  }
  return res;
}

std::vector<std::pair<double, double>> default_bins() {
  std::vector<std::pair<double, double>> bins;
  for (int b = 0; b < 10; ++b) bins.emplace_back(b / 10.0, (b + 1) / 10.0);
  return bins;
}

SweepConfig SweepConfig::defaults(SweepKind kind) {
  SweepConfig c;
  c.kind = kind;
  c.bins = default_bins();
  VariationModel normal{VariationKind::truncated_normal, 0.8};
  switch (kind) {
    case SweepKind::utilization:
      break;
    case SweepKind::variation:
      c.variations = {VariationModel{}, normal,
                      VariationModel{VariationKind::truncated_normal, 0.6}};
      break;
    case SweepKind::task_count:
      c.task_counts = {10, 11, 12, 13, 14, 15};
      c.variations = {normal};
      break;
    case SweepKind::observation:
      c.obs_fractions = {0.1, 0.25, 0.5, 1.0, 2.0};
      c.variations = {normal};
      break;
  }
  return c;
}

std::string SweepConfig::validate() const {
  if (sets_per_bin < 1) return "sets_per_bin must be at least 1";
  if (!bin_ids.empty() && bin_ids.size() != (bins.empty() ? default_bins() : bins).size()) {
    return "bin_ids must match the bin list";
  }
  if (task_counts.empty()) return "no task counts";
  for (int n : task_counts) {
    if (n < 1 || n > 15) return "task counts must lie in [1, 15]";
  }
  if (variations.empty()) return "no variation models";
  for (const auto& v : variations) {
    if (auto e = v.validate(); !e.empty()) return e;
  }
  if (obs_fractions.empty()) return "no observation fractions";
  for (double f : obs_fractions) {
    if (!(f > 0.0 && f <= 2.0)) return "observation fractions must lie in (0, 2]";
  }
  for (const auto& [lo, hi] : bins.empty() ? default_bins() : bins) {
    if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) return "bins must satisfy 0 <= lo < hi <= 1";
  }
  return {};
}

std::string variation_label(const VariationModel& variation) {
  if (variation.kind == VariationKind::none) return "none";
  char buf[32];
  std::snprintf(buf, sizeof buf, "normal:%.2f", variation.mean_fraction);
  return buf;
}

namespace {

struct Experiment {
  int bin = 0;  // index into the bin list
  int label = 0;
  int n_index = 0;
  int set = 0;
};

std::string status_of(const Error& e) {
  switch (e.code()) {
    case ErrorCode::generation_infeasible: return "generation_infeasible";
    case ErrorCode::tolerance_exceeds_execution: return "tolerance_exceeds_execution";
    case ErrorCode::degenerate_segment: return "degenerate_segment";
    case ErrorCode::no_arrival_evidence: return "no_arrival_evidence";
    case ErrorCode::io: return "io";
    case ErrorCode::configuration: return "configuration";
  }
  return "error";
}

std::vector<SweepRow> run_experiment(const SweepConfig& config,
                                     const std::vector<std::pair<double, double>>& bins,
                                     const Experiment& ex) {
  const int n = config.task_counts[ex.n_index];
  Rng rng = derive_rng(config.master_seed, ex.label, ex.n_index, ex.set);
  const std::uint64_t gen_seed = rng();
  const std::uint64_t sim_seed = rng();

  SweepRow base;
  base.seed = gen_seed;
  base.bin = ex.label;
  base.set_index = ex.set;
  base.n_tasks = n;

  std::vector<SweepRow> rows;
  auto emit_all = [&](const SweepRow& proto) {
    for (const auto& v : config.variations) {
      for (double f : config.obs_fractions) {
        SweepRow r = proto;
        r.variation = variation_label(v);
        r.obs_fraction = f;
        rows.push_back(r);
      }
    }
  };

  TaskSet ts;
  try {
    GenConfig gc;
    gc.n_tasks = n;
    gc.util_lo = std::max(bins[ex.bin].first, 0.001);
    gc.util_hi = bins[ex.bin].second;
    gc.rng_seed = gen_seed;
    ts = generate_taskset(gc);
  } catch (const Error& e) {
    base.status = status_of(e);
    emit_all(base);
    return rows;
  }
  base.utilization = ts.utilization();
  base.harmonic_pairs = harmonic_pairs(ts);

  for (const auto& v : config.variations) {
    for (double f : config.obs_fractions) {
      SweepRow r = base;
      r.variation = variation_label(v);
      r.obs_fraction = f;
      try {
        PipelineOptions po;
        po.variation = v;
        po.observe_fraction = f;
        po.refine = config.refine;
        po.with_naive = config.with_naive;
        po.record_timing = config.record_timing;
        const PipelineResult res = run_pipeline(ts, po, sim_seed);
        r.eta_prime = res.report.eta_prime;
        r.eta_prime_observed = res.observed_report.eta_prime;
        r.eta_naive = res.naive_report ? res.naive_report->eta_prime : 0.0;
        double sd = 0.0;
        for (const auto& tp : res.report.tasks) sd += tp.sd;
        r.mean_sd = res.report.tasks.empty() ? 0.0 : sd / res.report.tasks.size();
        r.forced = res.diagnostics.forced;
        r.conflicts = res.diagnostics.conflicts;
        r.iterations = res.diagnostics.iterations;
        r.runtime_ms = res.diagnostics.wall_ms;
      } catch (const Error& e) {
        r.status = status_of(e);
      }
      rows.push_back(r);
    }
  }
  return rows;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
  if (auto e = config.validate(); !e.empty()) throw Error(ErrorCode::configuration, e);
  const auto bins = config.bins.empty() ? default_bins() : config.bins;

  std::vector<Experiment> experiments;
  for (int b = 0; b < static_cast<int>(bins.size()); ++b) {
    for (int ni = 0; ni < static_cast<int>(config.task_counts.size()); ++ni) {
      const int label = config.bin_ids.empty() ? b : config.bin_ids[b];
      for (int s = 0; s < config.sets_per_bin; ++s) experiments.push_back({b, label, ni, s});
    }
  }

  std::vector<std::vector<SweepRow>> results(experiments.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < experiments.size(); i = next++) {
      results[i] = run_experiment(config, bins, experiments[i]);
    }
  };
  unsigned workers = config.workers ? config.workers : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(experiments.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepResult out;
  for (auto& r : results) out.rows.insert(out.rows.end(), r.begin(), r.end());
  out.aggregates = aggregate_rows(out.rows);
  return out;
}

std::vector<SweepAggregate> aggregate_rows(const std::vector<SweepRow>& rows) {
  using Key = std::tuple<int, int, std::string, double>;
  std::map<Key, std::vector<const SweepRow*>> groups;
  for (const auto& r : rows) {
    if (r.ok()) groups[{r.bin, r.n_tasks, r.variation, r.obs_fraction}].push_back(&r);
  }
  const std::pair<const char*, double SweepRow::*> metrics[] = {
      {"eta_prime", &SweepRow::eta_prime},
      {"eta_prime_observed", &SweepRow::eta_prime_observed},
      {"eta_naive", &SweepRow::eta_naive},
  };
  std::vector<SweepAggregate> out;
  for (const auto& [name, field] : metrics) {
    for (const auto& [key, members] : groups) {
      std::vector<double> v;
      for (const auto* r : members) v.push_back(r->*field);
      SweepAggregate a;
      a.metric = name;
      std::tie(a.bin, a.n_tasks, a.variation, a.obs_fraction) = key;
      a.count = v.size();
      double sum = 0.0;
      for (double x : v) sum += x;
      a.mean = sum / v.size();
      double sq = 0.0;
      for (double x : v) sq += (x - a.mean) * (x - a.mean);
      a.sd = v.size() > 1 ? std::sqrt(sq / (v.size() - 1)) : 0.0;
      a.min = *std::min_element(v.begin(), v.end());
      a.max = *std::max_element(v.begin(), v.end());
      a.median = median_of(v);
      out.push_back(a);
    }
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "seed,bin,n_tasks,utilization,variation,obs_fraction,eta_prime,mean_sd,forced,"
         "conflicts,runtime_ms,set,eta_prime_observed,eta_naive,harmonic_pairs,iterations,"
         "status\n";
  for (const auto& r : result.rows) {
    out << r.seed << ',' << r.bin << ',' << r.n_tasks << ',' << fmt(r.utilization) << ','
        << r.variation << ',' << fmt(r.obs_fraction) << ',' << fmt(r.eta_prime) << ','
        << fmt(r.mean_sd) << ',' << r.forced << ',' << r.conflicts << ',' << fmt(r.runtime_ms)
        << ',' << r.set_index << ',' << fmt(r.eta_prime_observed) << ',' << fmt(r.eta_naive)
        << ',' << r.harmonic_pairs << ',' << r.iterations << ',' << r.status << '\n';
  }
  out << "aggregate,metric,bin,n_tasks,variation,obs_fraction,count,mean,sd,min,median,max\n";
  for (const auto& a : result.aggregates) {
    out << "aggregate," << a.metric << ',' << a.bin << ',' << a.n_tasks << ',' << a.variation
        << ',' << fmt(a.obs_fraction) << ',' << a.count << ',' << fmt(a.mean) << ','
        << fmt(a.sd) << ',' << fmt(a.min) << ',' << fmt(a.median) << ',' << fmt(a.max) << '\n';
  }
}

}  // namespace scheduleak
