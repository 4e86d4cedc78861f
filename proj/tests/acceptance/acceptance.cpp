// Prints one PASS/FAIL line per acceptance criterion. Exit status is
// non-zero when a criterion fails that is not listed in --known-failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "scheduleak/harness.hpp"
#include "scheduleak/io.hpp"

using namespace scheduleak;

namespace {

struct Outcome {
  std::string id;
  bool pass = false;
  std::string detail;
};

std::vector<Outcome> g_outcomes;

void report(const std::string& id, bool pass, const std::string& detail) {
  g_outcomes.push_back({id, pass, detail});
  std::printf("%s %s %s\n", id.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Rows of the given variation label, optionally restricted to one bin,
// task count or observation fraction.
struct Filter {
  std::string variation;
  int bin = -1;
  int n_tasks = -1;
  double fraction = -1;
};

std::vector<const SweepRow*> select(const SweepResult& r, const Filter& f) {
  std::vector<const SweepRow*> out;
  for (const auto& row : r.rows) {
    if (!row.ok() || row.variation != f.variation) continue;
    if (f.bin >= 0 && row.bin != f.bin) continue;
    if (f.n_tasks >= 0 && row.n_tasks != f.n_tasks) continue;
    if (f.fraction >= 0 && std::abs(row.obs_fraction - f.fraction) > 1e-9) continue;
    out.push_back(&row);
  }
  return out;
}

double mean_of(const std::vector<const SweepRow*>& rows, double SweepRow::*field) {
  std::vector<double> v;
  for (const auto* r : rows) v.push_back(r->*field);
  return mean(v);
}

bool near_one(double x) { return x >= 1.0 - 1e-12; }

void check_example1() {
  const TaskSet ts({{1, 5, 1, 1, 0, 3, 0, 0}, {2, 6, 2, 2, 0, 2, 0, 0}, {3, 10, 2, 2, 0, 1, 0, 0}});
  PipelineOptions opt;
  opt.window_start = 0;
  opt.with_naive = false;
  const PipelineResult r = run_pipeline(ts, opt, 0);
  const std::vector<BusyInterval> expected_bis{{0, 8}, {10, 6}, {18, 5}, {24, 3}};
  const InferenceState init = initial_state(r.attack_set, r.observed);

  bool ok = r.observed == expected_bis;
  std::string why = ok ? "" : " busy-intervals";
  std::vector<std::vector<int>> omega4;
  if (init.vectors.size() == 4) {
    for (const auto& v : init.vectors[3]) omega4.push_back(v.counts);
  }
  if (omega4 != std::vector<std::vector<int>>{{1, 0, 1}, {1, 1, 0}}) {
    ok = false;
    why += " omega4-initial";
  }
  const std::vector<ArrivalWindow> tau3_initial{{0, 1, 10}, {4, 4, 10}};
  const auto& h3 = init.histograms.at(2).counts;
  if (init.windows.at(2) != tau3_initial || *std::max_element(h3.begin(), h3.end()) != 3) {
    ok = false;
    why += " tau3-windows";
  }
  const InferenceState& fin = r.attack.state;
  if (fin.vectors.size() != 4 || fin.vectors[3].size() != 1 ||
      fin.vectors[3][0].counts != std::vector<int>{1, 1, 0}) {
    ok = false;
    why += " omega4-refined";
  }
  if (fin.windows.at(2) != std::vector<ArrivalWindow>{{0, 1, 10}}) {
    ok = false;
    why += " tau3-refined";
  }
  const auto& c = r.attack.schedule.committed;
  if (c != std::vector<std::optional<Tick>>{0, 0, 0}) {
    ok = false;
    why += " committed";
  }
  if (r.report.eta_prime != 1.0) {
    ok = false;
    why += " eta";
  }
  report("A1", ok, fmt("eta_prime=%.6f", r.report.eta_prime) + why);
}

void check_appendix() {
  const TaskSet ts({{1, 5, 1, 1, 0, 3, 0, 0}, {2, 17, 6, 6, 0, 2, 0, 0}, {3, 24, 7, 7, 0, 1, 0, 0}});
  const MatchResult m = enumerate_matches(ts, {0, 16});
  const bool ok = m.vectors.size() == 1 && m.vectors[0].counts == std::vector<int>{3, 1, 1};
  report("A2", ok, "vectors=" + std::to_string(m.vectors.size()));
}

void check_sweeps(unsigned workers) {
  SweepConfig var = SweepConfig::defaults(SweepKind::variation);
  var.workers = workers;
  const SweepResult vr = run_sweep(var);
  const std::string none = "none", n08 = "normal:0.80", n06 = "normal:0.60";

  // A3
  const auto base = select(vr, {none});
  const double m_none = mean_of(base, &SweepRow::eta_prime);
  std::size_t perfect = 0;
  for (const auto* r : base) perfect += near_one(r->eta_prime) ? 1 : 0;
  const double frac = base.empty() ? 0.0 : static_cast<double>(perfect) / static_cast<double>(base.size());
  report("A3", m_none >= 0.93 && frac >= 0.35 && frac <= 0.65,
         fmt("mean=%.4f perfect_fraction=%.4f sets=%.0f", m_none, frac, static_cast<double>(base.size())));

  // A4
  const double m08 = mean_of(select(vr, {n08}), &SweepRow::eta_prime);
  const double m06 = mean_of(select(vr, {n06}), &SweepRow::eta_prime);
  report("A4", m08 >= 0.90 && m08 <= 0.99 && m06 < m08, fmt("mean_0.8=%.4f mean_0.6=%.4f", m08, m06));

  // A5
  const double low = mean_of(select(vr, {n08, 0}), &SweepRow::eta_prime);
  const double high = mean_of(select(vr, {n08, 7}), &SweepRow::eta_prime);
  report("A5", high - low >= 0.02, fmt("bin0=%.4f bin7=%.4f gap=%.4f", low, high, high - low));

  // A7
  double worst_naive = 0;
  for (int b = 0; b < static_cast<int>(var.bins.size()); ++b) {
    worst_naive = std::max(worst_naive, mean_of(select(vr, {n08, b}), &SweepRow::eta_naive));
  }
  const auto rows08 = select(vr, {n08});
  const double naive = mean_of(rows08, &SweepRow::eta_naive);
  report("A7", worst_naive <= 0.6 && m08 - naive >= 0.3,
         fmt("max_bin_naive=%.4f naive=%.4f scheduleak=%.4f", worst_naive, naive, m08));

  // A6
  SweepConfig tc = SweepConfig::defaults(SweepKind::task_count);
  tc.task_counts = {10, 15};
  tc.with_naive = false;
  tc.workers = workers;
  const SweepResult tr = run_sweep(tc);
  const double m10 = mean_of(select(tr, {n08, -1, 10}), &SweepRow::eta_prime);
  const double m15 = mean_of(select(tr, {n08, -1, 15}), &SweepRow::eta_prime);
  report("A6", m15 <= m10, fmt("mean_10=%.4f mean_15=%.4f", m10, m15));

  // A8
  SweepConfig ob = SweepConfig::defaults(SweepKind::observation);
  ob.with_naive = false;
  ob.workers = workers;
  const SweepResult orr = run_sweep(ob);
  std::vector<double> means;
  for (double f : ob.obs_fractions) means.push_back(mean_of(select(orr, {n08, -1, -1, f}), &SweepRow::eta_prime));
  bool monotone = true;
  for (std::size_t i = 1; i < means.size(); ++i) monotone &= means[i] + 0.03 >= means[i - 1];
  std::ostringstream d;
  for (std::size_t i = 0; i < means.size(); ++i) d << (i ? " " : "") << "f" << ob.obs_fractions[i] << "=" << fmt("%.4f", means[i]);
  report("A8", means[0] >= 0.45 && means[0] <= 0.70 && monotone, d.str());
}

// Busy intervals after one hyper-period of warm-up, with the true arrivals
// of every task inside each.
struct Instance {
  TaskSet truth;
  Trace trace;
  std::vector<BusyInterval> intervals;
};

Instance make_instance(std::uint64_t seed, const VariationModel& variation) {
  Rng rng = derive_rng(0xa9, seed);
  GenConfig c;
  c.n_tasks = 2 + static_cast<int>(rng() % 9);
  const double lo = static_cast<double>(rng() % 9) / 10.0;
  c.util_lo = std::max(0.01, lo);
  c.util_hi = lo + 0.1;
  c.rng_seed = rng();
  Instance in;
  in.truth = generate_taskset(c);
  const Tick h = in.truth.hyper_period();
  in.trace = simulate(in.truth, 2 * h + 1, variation, rng());
  in.intervals = clip_observation(busy_intervals(in.trace), {h, h});
  return in;
}

void check_soundness() {
  std::size_t violations = 0, instances = 0;
  const VariationModel models[] = {VariationModel{}, {VariationKind::truncated_normal, 0.8}};
  for (const auto& vm : models) {
    for (std::uint64_t s = 0; s < 1000; ++s) {
      const Instance in = make_instance(s + (vm.kind == VariationKind::none ? 0 : 100000), vm);
      if (in.intervals.empty()) continue;
      const TaskSet view = attack_view(in.truth, vm);
      const BusyInterval& bi = in.intervals[s % in.intervals.size()];
      ++instances;
      for (std::size_t i = 0; i < view.size(); ++i) {
        std::vector<Tick> arrivals;
        for (const auto& j : in.trace.jobs[i]) {
          if (bi.contains(j.arrival)) arrivals.push_back(j.arrival);
        }
        const CountCandidates cands = job_count_candidates(view[i], bi.length);
        if (!cands.contains(static_cast<int>(arrivals.size()))) ++violations;
        const auto segs = classify_segments(view[i], bi, cands);
        for (Tick a : arrivals) {
          bool covered = false;
          for (const auto& sg : segs) covered |= a >= sg.begin && a <= sg.end;
          if (!covered) ++violations;
        }
        for (const auto& sg : segs) {
          if (sg.kind != SegmentKind::one) continue;
          const auto n = std::count_if(arrivals.begin(), arrivals.end(),
                                       [&](Tick a) { return a >= sg.begin && a <= sg.end; });
          if (n != 1) ++violations;
        }
      }
    }
  }
  report("A9", violations == 0,
         fmt("instances=%.0f violations=%.0f", static_cast<double>(instances), static_cast<double>(violations)));
}

void check_translator() {
  std::size_t mismatches = 0, jobs = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Instance in = make_instance(500000 + s, VariationModel{});
    for (const auto& bi : in.intervals) {
      std::vector<ArrivalEvent> events;
      std::vector<Tick> starts;
      for (std::size_t i = 0; i < in.truth.size(); ++i) {
        for (const auto& j : in.trace.jobs[i]) {
          if (!bi.contains(j.arrival)) continue;
          events.push_back({i, j.arrival});
          starts.push_back(j.start);
        }
      }
      const Translation tr = compact_translate(in.truth, bi, events);
      for (std::size_t k = 0; k < events.size(); ++k) {
        ++jobs;
        if (tr.jobs[k].start != starts[k] || tr.jobs[k].arrival != events[k].arrival) ++mismatches;
      }
    }
  }
  report("A10", mismatches == 0,
         fmt("jobs=%.0f mismatches=%.0f", static_cast<double>(jobs), static_cast<double>(mismatches)));
}

void check_determinism() {
  SweepConfig cfg = SweepConfig::defaults(SweepKind::variation);
  cfg.sets_per_bin = 3;
  std::string outputs[3];
  const unsigned workers[3] = {1, 4, 1};
  for (int k = 0; k < 3; ++k) {
    cfg.workers = workers[k];
    std::ostringstream o;
    write_sweep_csv(o, run_sweep(cfg));
    outputs[k] = o.str();
  }
  const bool ok = outputs[0] == outputs[1] && outputs[0] == outputs[2];
  report("A11", ok, fmt("bytes=%.0f", static_cast<double>(outputs[0].size())));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> known;
  unsigned workers = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--known-failures" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string id;
      while (std::getline(ss, id, ',')) known.insert(id);
    } else if (arg == "--workers" && i + 1 < argc) {
      workers = static_cast<unsigned>(std::stoul(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--known-failures A3,A5] [--workers N]\n", argv[0]);
      return 1;
    }
  }
  const auto t0 = std::chrono::steady_clock::now();
  check_example1();
  check_appendix();
  check_sweeps(workers);
  check_soundness();
  check_translator();
  check_determinism();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  int unexpected = 0, failed = 0;
  for (const auto& o : g_outcomes) {
    if (o.pass) continue;
    ++failed;
    if (!known.count(o.id)) ++unexpected;
  }
  std::printf("summary: %zu criteria, %d failed, %d unexpected, %.1f s\n", g_outcomes.size(), failed,
              unexpected, secs);
  return unexpected == 0 ? 0 : 2;
}
