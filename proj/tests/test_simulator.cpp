#include <gtest/gtest.h>

#include <algorithm>

#include "scheduleak/simulator.hpp"
#include "support.hpp"

using namespace scheduleak;

namespace {

std::vector<ExecSlice> slices_of(const Trace& trace, TaskId id) {
  std::vector<ExecSlice> out;
  for (const auto& s : trace.slices) {
    if (s.task_id == id) out.push_back(s);
  }
  return out;
}

}  // namespace

TEST(Simulator, Example1Slices) {
  const Trace trace = simulate(fixtures::example1(), 30, VariationModel{}, 0);
  const std::vector<ExecSlice> expected{{3, 3, 5}, {3, 11, 12}, {3, 14, 15}, {3, 21, 23}};
  EXPECT_EQ(slices_of(trace, 3), expected);
}

TEST(Simulator, Example1BusyIntervals) {
  const Trace trace = simulate(fixtures::example1(), 30, VariationModel{}, 0);
  const std::vector<BusyInterval> expected{{0, 8}, {10, 6}, {18, 5}, {24, 3}};
  EXPECT_EQ(busy_intervals(trace), expected);
}

TEST(Simulator, EmptySetIsIdle) {
  const Trace trace = simulate(TaskSet{}, 20, VariationModel{}, 0);
  EXPECT_TRUE(trace.slices.empty());
  ASSERT_EQ(trace.idle.size(), 1u);
  EXPECT_EQ(trace.idle[0], (IdleInterval{0, 20}));
  EXPECT_TRUE(busy_intervals(trace).empty());
}

TEST(Simulator, SingleTaskNoContention) {
  const TaskSet ts({{1, 10, 2, 2, 3, 1, 0, 0}});
  const Trace trace = simulate(ts, 20, VariationModel{}, 0);
  const std::vector<ExecSlice> expected{{1, 3, 5}, {1, 13, 15}};
  EXPECT_EQ(trace.slices, expected);
}

TEST(Simulator, BackToBackJobsMergeIntoOneInterval) {
  const TaskSet ts({{1, 4, 2, 2, 0, 2, 0, 0}, {2, 8, 2, 2, 2, 1, 0, 0}});
  const auto bis = busy_intervals(simulate(ts, 8, VariationModel{}, 0));
  ASSERT_EQ(bis.size(), 1u);
  EXPECT_EQ(bis[0], (BusyInterval{0, 6}));
}

TEST(Simulator, MatchesTickReferenceWithoutVariation) {
  const TaskSet ts({{1, 6, 1, 1, 2, 4, 0, 0},
                    {2, 10, 3, 3, 5, 3, 0, 0},
                    {3, 15, 2, 2, 0, 2, 0, 0},
                    {4, 30, 4, 4, 7, 1, 0, 0}});
  const Trace trace = simulate(ts, 90, VariationModel{}, 0);
  const auto ref = fixtures::tick_schedule(ts, 90);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    ASSERT_GE(trace.jobs[i].size(), ref[i].size() - 1);
    for (std::size_t j = 0; j < ref[i].size() && j < trace.jobs[i].size(); ++j) {
      EXPECT_EQ(trace.jobs[i][j].arrival, ref[i][j].arrival);
      EXPECT_EQ(trace.jobs[i][j].start, ref[i][j].start);
    }
  }
}

TEST(Simulator, PeriodicWithoutVariation) {
  const TaskSet ts = fixtures::example1();
  const Trace trace = simulate(ts, 60, VariationModel{}, 0);
  std::vector<ExecSlice> first, second;
  for (const auto& s : trace.slices) {
    if (s.end <= 30) first.push_back(s);
    if (s.begin >= 30) second.push_back({s.task_id, s.begin - 30, s.end - 30});
  }
  EXPECT_EQ(first, second);
}

TEST(Simulator, WorkConservingAndPriorityCorrect) {
  GenConfig c;
  c.util_lo = 0.6;
  c.util_hi = 0.7;
  c.rng_seed = 8;
  const TaskSet ts = generate_taskset(c);
  const Trace trace = simulate(ts, ts.hyper_period(), {VariationKind::truncated_normal, 0.8}, 4);

  std::vector<int> running(ts.hyper_period(), -1);
  for (const auto& s : trace.slices) {
    for (Tick t = s.begin; t < s.end; ++t) running[t] = static_cast<int>(ts.index_of(s.task_id));
  }
  for (Tick t = 0; t < ts.hyper_period(); ++t) {
    int best = -1;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      for (const auto& j : trace.jobs[i]) {
        const bool ready = j.arrival <= t && (j.completion < 0 || j.completion > t);
        if (ready && (best < 0 || ts[i].priority > ts[best].priority)) best = static_cast<int>(i);
      }
    }
    EXPECT_EQ(running[t], best) << "tick " << t;
  }
}

TEST(Simulator, BusyLengthsEqualExecutedWork) {
  GenConfig c;
  c.util_lo = 0.5;
  c.util_hi = 0.6;
  c.rng_seed = 12;
  const TaskSet ts = generate_taskset(c);
  const Trace trace = simulate(ts, ts.hyper_period(), {VariationKind::truncated_normal, 0.8}, 2);
  Tick busy = 0, work = 0;
  for (const auto& bi : busy_intervals(trace)) busy += bi.length;
  for (const auto& s : trace.slices) work += s.end - s.begin;
  EXPECT_EQ(busy, work);
}

TEST(Simulator, SampleExecTimeNoneIsAcet) {
  Rng rng(1);
  const TaskSpec t{1, 100, 10, 8, 0, 1, 2, 0};
  EXPECT_EQ(sample_exec_time(t, VariationModel{}, rng), 8);
}

TEST(Simulator, SampleExecTimeTruncatedNormal) {
  Rng rng(2024);
  const TaskSpec t{1, 100, 10, 8, 0, 1, 2, 0};
  const VariationModel v{VariationKind::truncated_normal, 0.8};
  const int draws = 100000;
  int near = 0;
  double sum = 0;
  for (int i = 0; i < draws; ++i) {
    const Tick x = sample_exec_time(t, v, rng);
    ASSERT_GE(x, 6);
    ASSERT_LE(x, 10);
    if (x >= 7 && x <= 9) ++near;
    sum += static_cast<double>(x);
  }
  EXPECT_GE(near, draws * 95 / 100);
  EXPECT_NEAR(sum / draws, 8.0, 0.05);
}

TEST(Simulator, TailQuantile) { EXPECT_NEAR(tail_quantile(1e-4), 3.719, 1e-3); }

TEST(Simulator, ClipObservationKeepsWholeIntervals) {
  const std::vector<BusyInterval> bis{{0, 8}, {10, 6}};
  EXPECT_EQ(clip_observation(bis, {0, 12}), (std::vector<BusyInterval>{{0, 8}}));
  EXPECT_EQ(clip_observation(bis, {0, 100}), bis);
  EXPECT_TRUE(clip_observation(bis, {9, 1}).empty());
}

TEST(Simulator, VariationModelValidation) {
  EXPECT_EQ(VariationModel{}.validate(), "");
  EXPECT_NE((VariationModel{VariationKind::truncated_normal, 0.0}).validate(), "");
  VariationModel v;
  v.upper_tail_prob = 0.5;
  EXPECT_NE(v.validate(), "");
}
