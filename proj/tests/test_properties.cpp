#include <gtest/gtest.h>

#include "scheduleak/harness.hpp"

using namespace scheduleak;

namespace {

struct Case {
  TaskSet truth;
  Trace trace;
  std::vector<BusyInterval> intervals;
};

Case make_case(std::uint64_t seed, const VariationModel& variation) {
  Rng rng = derive_rng(0x70, seed);
  GenConfig c;
  c.n_tasks = 2 + static_cast<int>(rng() % 9);
  const double lo = static_cast<double>(rng() % 9) / 10.0;
  c.util_lo = std::max(0.01, lo);
  c.util_hi = lo + 0.1;
  c.rng_seed = rng();
  Case out;
  out.truth = generate_taskset(c);
  const Tick h = out.truth.hyper_period();
  out.trace = simulate(out.truth, 2 * h + 1, variation, rng());
  out.intervals = clip_observation(busy_intervals(out.trace), {h, h});
  return out;
}

class Soundness : public ::testing::TestWithParam<bool> {};

}  // namespace

TEST_P(Soundness, CountsAndSegmentsHoldTrueArrivals) {
  const VariationModel vm =
      GetParam() ? VariationModel{VariationKind::truncated_normal, 0.8} : VariationModel{};
  for (std::uint64_t s = 0; s < 150; ++s) {
    const Case c = make_case(s, vm);
    const TaskSet view = attack_view(c.truth, vm);
    for (const auto& bi : c.intervals) {
      for (std::size_t i = 0; i < view.size(); ++i) {
        std::vector<Tick> arrivals;
        for (const auto& j : c.trace.jobs[i]) {
          if (bi.contains(j.arrival)) arrivals.push_back(j.arrival);
        }
        const CountCandidates cands = job_count_candidates(view[i], bi.length);
        ASSERT_TRUE(cands.contains(static_cast<int>(arrivals.size())))
            << "seed " << s << " task " << view[i].id;
        const auto segs = classify_segments(view[i], bi, cands);
        for (Tick a : arrivals) {
          bool covered = false;
          for (const auto& sg : segs) covered |= a >= sg.begin && a <= sg.end;
          ASSERT_TRUE(covered) << "seed " << s << " arrival " << a;
        }
        for (const auto& sg : segs) {
          if (sg.kind != SegmentKind::one) continue;
          const auto n = std::count_if(arrivals.begin(), arrivals.end(),
                                       [&](Tick a) { return a >= sg.begin && a <= sg.end; });
          ASSERT_EQ(n, 1) << "seed " << s;
        }
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Variation, Soundness, ::testing::Bool());

TEST(Properties, TranslatorReproducesSimulator) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Case c = make_case(1000 + s, VariationModel{});
    for (const auto& bi : c.intervals) {
      std::vector<ArrivalEvent> events;
      std::vector<Tick> starts;
      for (std::size_t i = 0; i < c.truth.size(); ++i) {
        for (const auto& j : c.trace.jobs[i]) {
          if (!bi.contains(j.arrival)) continue;
          events.push_back({i, j.arrival});
          starts.push_back(j.start);
        }
      }
      const Translation tr = compact_translate(c.truth, bi, events);
      EXPECT_EQ(tr.finish, bi.end());
      for (std::size_t k = 0; k < events.size(); ++k) ASSERT_EQ(tr.jobs[k].start, starts[k]);
    }
  }
}

TEST(Properties, HistogramCountsEveryIntervalAtTruePhase) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const Case c = make_case(2000 + s, VariationModel{});
    if (c.intervals.empty()) continue;
    const TaskSet view = attack_view(c.truth, VariationModel{});
    const InferenceState st = initial_state(view, c.intervals);
    for (std::size_t i = 0; i < view.size(); ++i) {
      const Tick p = view[i].period;
      int holding = 0;
      for (const auto& bi : c.intervals) {
        bool any = false;
        for (const auto& j : c.trace.jobs[i]) any |= bi.contains(j.arrival);
        holding += any ? 1 : 0;
      }
      const Tick phase = floor_mod(c.truth[i].offset, p);
      EXPECT_GE(st.histograms[i].counts[phase], holding) << "seed " << s << " task " << view[i].id;
    }
  }
}
