// Command-line front end: gen, sim, attack, eval, sweep.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "scheduleak/generator.hpp"
#include "scheduleak/harness.hpp"
#include "scheduleak/io.hpp"

namespace sl = scheduleak;

namespace {

constexpr int kUsage = 1;
constexpr int kInfeasible = 2;
constexpr int kIo = 3;

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  bool quiet = false;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
  } else {
    sl::write_file(g.out, text);
  }
}

void note(const Globals& g, const std::string& text) {
  if (!g.quiet) std::cerr << text << '\n';
}

sl::TaskSet load_taskset(const std::string& path) {
  std::istringstream in(sl::read_file(path));
  return sl::read_taskset(in);
}

sl::VariationModel make_variation(const std::string& kind, double mean_frac) {
  sl::VariationModel v;
  v.kind = kind == "normal" ? sl::VariationKind::truncated_normal : sl::VariationKind::none;
  v.mean_fraction = mean_frac;
  if (auto e = v.validate(); !e.empty()) throw sl::Error(sl::ErrorCode::configuration, e);
  return v;
}

std::string format_vector(const sl::JobCountVector& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.counts.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v.counts[i]);
  }
  return s + "}";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Busy-interval schedule reconstruction toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master RNG seed")->capture_default_str();
  app.add_option("--out", g.out, "Output path (default: stdout)");
  app.add_flag("--quiet", g.quiet, "Suppress progress messages");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random schedulable task set");
  sl::GenConfig gc;
  gen->add_option("--n-tasks", gc.n_tasks)->capture_default_str();
  gen->add_option("--util-lo", gc.util_lo)->capture_default_str();
  gen->add_option("--util-hi", gc.util_hi)->capture_default_str();
  gen->add_option("--acet-fraction", gc.acet_fraction)->capture_default_str();
  gen->add_option("--hyper-cap", gc.hyper_period_cap)->capture_default_str();
  gen->add_flag("--allow-repetition", gc.allow_factor_repetition);

  // sim
  auto* sim = app.add_subcommand("sim", "Simulate a task set and export its trace");
  std::string sim_ts, sim_var = "none", trace_out, bi_out;
  sl::Tick horizon = 0;
  double mean_frac = 0.8;
  sim->add_option("taskset", sim_ts, "Task-set file")->required();
  sim->add_option("--horizon", horizon, "Ticks to simulate (default: one hyper-period)");
  sim->add_option("--variation", sim_var)->check(CLI::IsMember({"none", "normal"}))
      ->capture_default_str();
  sim->add_option("--mean-frac", mean_frac)->capture_default_str();
  sim->add_option("--seed", g.seed, "RNG seed");
  sim->add_option("--trace-out", trace_out, "Trace CSV path");
  sim->add_option("--bi-out", bi_out, "Busy-interval CSV path");

  // attack
  auto* attack = app.add_subcommand("attack", "Reconstruct a schedule from busy intervals");
  std::string atk_ts, bi_in, atk_var = "none", hist_out, summary_out;
  bool from_sim = false, verbose = false, trace_refinement = false;
  double observe = 1.0;
  sl::RefineOptions ro;
  attack->add_option("taskset", atk_ts, "Task-set file")->required();
  auto* bi_opt = attack->add_option("--bi", bi_in, "Busy-interval CSV");
  auto* sim_opt = attack->add_flag("--from-sim", from_sim, "Simulate the task set first");
  bi_opt->excludes(sim_opt);
  attack->add_option("--observe", observe, "Observed fraction of a hyper-period")
      ->capture_default_str();
  attack->add_option("--max-iters", ro.max_iterations)->capture_default_str();
  attack->add_option("--variation", atk_var)->check(CLI::IsMember({"none", "normal"}))
      ->capture_default_str();
  attack->add_option("--mean-frac", mean_frac)->capture_default_str();
  attack->add_flag("--verbose", verbose, "Print per-interval candidate vectors");
  attack->add_option("--dump-histograms", hist_out, "Histogram CSV path");
  attack->add_flag("--trace-refinement", trace_refinement, "Log each refinement iteration");
  attack->add_option("--summary", summary_out, "Summary file path");

  // eval
  auto* eval = app.add_subcommand("eval", "Score a reconstruction against a trace");
  std::string ev_ts, ev_trace, ev_rec;
  eval->add_option("taskset", ev_ts, "Task-set file")->required();
  eval->add_option("--trace", ev_trace, "Ground-truth trace CSV")->required();
  eval->add_option("--reconstruction", ev_rec, "Reconstruction CSV")->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run an experiment sweep");
  std::string kind = "utilization";
  int sets = 20;
  unsigned workers = 0;
  bool timing = false, no_naive = false;
  std::vector<int> task_counts;
  std::vector<double> fractions;
  std::vector<int> only_bins;
  sweep->add_option("--kind", kind)
      ->check(CLI::IsMember({"utilization", "variation", "task_count", "observation"}))
      ->capture_default_str();
  sweep->add_option("--sets", sets, "Task sets per bin")->capture_default_str();
  sweep->add_option("--bins", only_bins, "Utilization bins to run (0-9)");
  sweep->add_option("--task-counts", task_counts);
  sweep->add_option("--fractions", fractions, "Observation fractions");
  sweep->add_option("--workers", workers, "Worker threads (0: all cores)");
  sweep->add_flag("--timing", timing, "Record wall time (breaks byte-identical output)");
  sweep->add_flag("--no-naive", no_naive, "Skip the random baseline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*gen) {
      gc.rng_seed = g.seed;
      if (auto e = gc.validate(); !e.empty()) throw sl::Error(sl::ErrorCode::configuration, e);
      std::ostringstream out;
      sl::write_taskset(out, sl::generate_taskset(gc));
      emit(g, out.str());
    } else if (*sim) {
      const auto ts = load_taskset(sim_ts);
      const auto v = make_variation(sim_var, mean_frac);
      const sl::Tick h = horizon > 0 ? horizon : ts.hyper_period();
      const auto trace = sl::simulate(ts, h, v, g.seed);
      const auto bis = sl::busy_intervals(trace);
      if (!trace_out.empty()) {
        std::ostringstream out;
        sl::write_trace_csv(out, trace);
        sl::write_file(trace_out, out.str());
      }
      std::ostringstream out;
      sl::write_busy_csv(out, bis);
      if (!bi_out.empty()) sl::write_file(bi_out, out.str());
      if (bi_out.empty() || !g.out.empty()) emit(g, out.str());
      note(g, std::to_string(bis.size()) + " busy intervals over " + std::to_string(h) + " ticks");
    } else if (*attack) {
      if (bi_in.empty() && !from_sim) {
        std::cerr << "attack: one of --bi or --from-sim is required\n";
        return kUsage;
      }
      const auto ts = load_taskset(atk_ts);
      sl::TaskSet used = ts;
      std::vector<sl::BusyInterval> intervals;
      sl::AttackResult res;
      std::optional<sl::PipelineResult> pipeline;
      if (from_sim) {
        sl::PipelineOptions po;
        po.variation = make_variation(atk_var, mean_frac);
        po.observe_fraction = observe;
        po.refine = ro;
        po.with_naive = false;
        pipeline = sl::run_pipeline(ts, po, g.seed);
        used = pipeline->attack_set;
        intervals = pipeline->observed;
        res = pipeline->attack;
      } else {
        std::istringstream in(sl::read_file(bi_in));
        intervals = sl::read_busy_csv(in);
        if (observe < 1.0 && !intervals.empty() && !ts.empty()) {
          const auto len = static_cast<sl::Tick>(observe * static_cast<double>(ts.hyper_period()));
          intervals = sl::clip_observation(intervals, {intervals.front().start, std::max<sl::Tick>(1, len)});
        }
        res = sl::run_attack(used, intervals, ro);
      }

      if (verbose) {
        for (std::size_t k = 0; k < intervals.size(); ++k) {
          std::cerr << "interval " << k << " [" << intervals[k].start << ','
                    << intervals[k].end() << "):";
          for (const auto& v : res.state.vectors[k]) std::cerr << ' ' << format_vector(v);
          std::cerr << '\n';
        }
        for (std::size_t i = 0; i < used.size(); ++i) {
          std::cerr << "task " << used[i].id << " windows:";
          for (const auto& w : res.state.windows[i]) std::cerr << " [" << w.begin << ',' << w.end << ']';
          std::cerr << '\n';
        }
      }
      if (trace_refinement) {
        for (const auto& e : res.state.log) {
          std::cerr << "iteration " << e.iteration << ": vectors=" << e.vectors
                    << " windows=" << e.windows << " unique_tasks=" << e.unique_tasks
                    << " changed=" << (e.changed ? 1 : 0) << '\n';
        }
      }
      if (!hist_out.empty()) {
        std::ostringstream out;
        sl::write_histogram_csv(out, res.state.histograms);
        sl::write_file(hist_out, out.str());
      }
      std::ostringstream out;
      sl::write_reconstruction_csv(out, res.schedule);
      emit(g, out.str());

      std::ostringstream summary;
      summary << "intervals=" << intervals.size() << " jobs=" << res.schedule.jobs.size()
              << " iterations=" << res.state.iterations << " forced=" << res.schedule.forced
              << " conflicts=" << res.schedule.conflicts << " dropped=" << res.schedule.dropped
              << " overflows=" << res.schedule.overflows
              << " unconverged=" << res.schedule.unconverged
              << " missing_windows=" << res.schedule.missing_windows;
      if (pipeline) summary << " eta_prime=" << pipeline->report.eta_prime;
      summary << " committed=";
      for (std::size_t i = 0; i < res.schedule.committed.size(); ++i) {
        if (i) summary << ';';
        const auto& c = res.schedule.committed[i];
        summary << used[i].id << ':' << (c ? std::to_string(*c) : std::string("none"));
      }
      summary << '\n';
      if (!summary_out.empty()) sl::write_file(summary_out, summary.str());
      note(g, summary.str());
    } else if (*eval) {
      const auto ts = load_taskset(ev_ts);
      std::istringstream tin(sl::read_file(ev_trace));
      const auto trace = sl::trace_from_slices(ts, sl::read_trace_csv(tin));
      std::istringstream rin(sl::read_file(ev_rec));
      const auto rec = sl::read_reconstruction_csv(rin);
      // Score the busy intervals the reconstruction covers.
      std::vector<sl::BusyInterval> scored;
      for (const auto& bi : sl::busy_intervals(trace)) {
        for (const auto& j : rec.jobs) {
          if (j.interval_start == bi.start) {
            scored.push_back(bi);
            break;
          }
        }
      }
      std::ostringstream out;
      sl::write_report_csv(out, sl::precision_ratio(trace, rec, ts, scored));
      emit(g, out.str());
    } else if (*sweep) {
      const sl::SweepKind k = kind == "variation"    ? sl::SweepKind::variation
                              : kind == "task_count" ? sl::SweepKind::task_count
                              : kind == "observation" ? sl::SweepKind::observation
                                                      : sl::SweepKind::utilization;
      auto cfg = sl::SweepConfig::defaults(k);
      cfg.sets_per_bin = sets;
      cfg.master_seed = g.seed;
      cfg.workers = workers;
      cfg.record_timing = timing;
      cfg.with_naive = !no_naive;
      if (!task_counts.empty()) cfg.task_counts = task_counts;
      if (!fractions.empty()) cfg.obs_fractions = fractions;
      if (!only_bins.empty()) {
        const auto all = sl::default_bins();
        cfg.bins.clear();
        for (int b : only_bins) {
          if (b < 0 || b >= static_cast<int>(all.size())) {
            std::cerr << "sweep: bin out of range\n";
            return kUsage;
          }
          cfg.bins.push_back(all[b]);
          cfg.bin_ids.push_back(b);
        }
      }
      const auto result = sl::run_sweep(cfg);
      std::ostringstream out;
      sl::write_sweep_csv(out, result);
      emit(g, out.str());
      note(g, std::to_string(result.rows.size()) + " rows");
    }
  } catch (const sl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case sl::ErrorCode::generation_infeasible: return kInfeasible;
      case sl::ErrorCode::io: return kIo;
      default: return kUsage;
    }
  }
  return 0;
}
