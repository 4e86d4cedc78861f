#include "scheduleak/windows.hpp"

#include <algorithm>
#include <numeric>

namespace scheduleak {

std::vector<ClassifiedSegment> classify_segments(const TaskSpec& task,
                                                 const BusyInterval& interval,
                                                 const CountCandidates& cands,
                                                 int interval_index) {
  const Tick p = task.period;
  const Tick c = task.effective_exec();
  const Tick alpha = interval.start;
  const Tick beta = interval.end();
  const Tick n = cands.low;

  std::vector<ClassifiedSegment> out;
  auto emit = [&](SegmentKind kind, Tick begin, Tick end, Tick slot) {
    if (begin > end) {
      throw Error(ErrorCode::degenerate_segment,
                  "degenerate segment for task " + std::to_string(task.id) + " in interval " +
                      std::to_string(interval_index));
    }
    out.push_back({kind, begin, end, interval_index, static_cast<int>(slot)});
  };

  if (!cands.ambiguous) {
    if (n == 0) return out;
    if (n == ceil_div(interval.length, p)) {
      for (Tick h = 1; h <= n; ++h) {
        emit(SegmentKind::one, alpha + (h - 1) * p, beta - (n - h) * p - c, h);
      }
    } else {
      for (Tick h = 1; h <= n; ++h) {
        emit(SegmentKind::one, beta - (n + 1 - h) * p, alpha + h * p - c, h);
      }
    }
    return out;
  }

  for (Tick h = 1; h <= n; ++h) {
    emit(SegmentKind::one, alpha + (h - 1) * p, alpha + h * p - c, h);
  }
  emit(SegmentKind::zero_or_one, alpha + n * p, beta - c, n + 1);
  return out;
}

ArrivalHistogram accumulate_histogram(const TaskSpec& task,
                                      std::span<const ClassifiedSegment> segments) {
  const Tick p = task.period;
  ArrivalHistogram hist{task.id, std::vector<int>(static_cast<std::size_t>(p), 0)};

  std::vector<const ClassifiedSegment*> order;
  order.reserve(segments.size());
  for (const auto& s : segments) {
    if (s.kind != SegmentKind::zero) order.push_back(&s);
  }
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    return a->interval_index < b->interval_index;
  });

  // stamp[pos] remembers the last interval that counted pos
  std::vector<int> stamp(static_cast<std::size_t>(p), -1);
  int current = -1;
  int group = -1;
  for (const auto* s : order) {
    if (s->interval_index != current || group < 0) {
      current = s->interval_index;
      ++group;
    }
    const Tick span = std::min<Tick>(s->end - s->begin + 1, p);
    Tick pos = floor_mod(s->begin, p);
    for (Tick k = 0; k < span; ++k) {
      if (stamp[pos] != group) {
        stamp[pos] = group;
        ++hist.counts[pos];
      }
      if (++pos == p) pos = 0;
    }
  }
  return hist;
}

std::vector<ArrivalWindow> candidate_arrival_windows(const ArrivalHistogram& hist) {
  const Tick p = static_cast<Tick>(hist.counts.size());
  const int peak = p > 0 ? *std::max_element(hist.counts.begin(), hist.counts.end()) : 0;
  if (peak <= 0) {
    throw Error(ErrorCode::no_arrival_evidence,
                "no arrival evidence for task " + std::to_string(hist.task_id));
  }
  auto at_peak = [&](Tick pos) { return hist.counts[static_cast<std::size_t>(pos)] == peak; };

  Tick anchor = -1;  // any position below the peak
  for (Tick pos = 0; pos < p; ++pos) {
    if (!at_peak(pos)) {
      anchor = pos;
      break;
    }
  }
  if (anchor < 0) return {ArrivalWindow{0, p - 1, p}};

  std::vector<ArrivalWindow> out;
  Tick run_begin = -1;
  for (Tick k = 1; k <= p; ++k) {
    const Tick pos = (anchor + k) % p;
    if (at_peak(pos)) {
      if (run_begin < 0) run_begin = pos;
    } else if (run_begin >= 0) {
      out.push_back({run_begin, (pos + p - 1) % p, p});
      run_begin = -1;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const ArrivalWindow& a, const ArrivalWindow& b) { return a.begin < b.begin; });
  return out;
}

}  // namespace scheduleak
