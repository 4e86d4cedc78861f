#pragma once

#include <span>
#include <vector>

#include "scheduleak/decompose.hpp"
#include "scheduleak/model.hpp"

namespace scheduleak {

enum class SegmentKind { zero, one, zero_or_one };

/// Closed tick range [begin, end] of a busy interval that holds exactly one
/// (`one`) or at most one (`zero_or_one`) arrival of a task.
struct ClassifiedSegment {
  SegmentKind kind = SegmentKind::one;
  Tick begin = 0;
  Tick end = 0;
  int interval_index = 0;
  int slot = 1;  // h, 1-based

  friend bool operator==(const ClassifiedSegment&, const ClassifiedSegment&) = default;
};

/// Arrival segments of `task` inside `interval`. An exact count of zero
/// yields an empty list (the whole interval is a 0-interval). Throws
/// ErrorCode::degenerate_segment if a computed segment is empty.
std::vector<ClassifiedSegment> classify_segments(const TaskSpec& task,
                                                 const BusyInterval& interval,
                                                 const CountCandidates& cands,
                                                 int interval_index = 0);

struct ArrivalHistogram {
  TaskId task_id = 0;
  std::vector<int> counts;  // size = period
};

/// Folds segments modulo the period. Each busy interval adds at most one to a
/// position, however many of its segments cover it.
ArrivalHistogram accumulate_histogram(const TaskSpec& task,
                                      std::span<const ClassifiedSegment> segments);

/// Cyclic closed window of positions in [0, period). `end < begin` means the
/// window wraps past period - 1.
struct ArrivalWindow {
  Tick begin = 0;
  Tick end = 0;
  Tick period = 1;

  bool wraps() const noexcept { return end < begin; }
  Tick width() const noexcept { return wraps() ? end + period - begin + 1 : end - begin + 1; }
  bool contains(Tick position) const noexcept {
    return wraps() ? (position >= begin || position <= end)
                   : (position >= begin && position <= end);
  }

  friend bool operator==(const ArrivalWindow&, const ArrivalWindow&) = default;
};

/// Maximal runs of positions at the peak count, merged across the
/// period boundary, ordered by begin. Throws ErrorCode::no_arrival_evidence
/// for an all-zero histogram.
std::vector<ArrivalWindow> candidate_arrival_windows(const ArrivalHistogram& hist);

}  // namespace scheduleak
