#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "scheduleak/model.hpp"

namespace scheduleak {

/// Possible job counts of one task inside one busy interval: {low} or
/// {low, low + 1}.
struct CountCandidates {
  int low = 0;
  bool ambiguous = false;

  int high() const noexcept { return ambiguous ? low + 1 : low; }
  bool contains(int n) const noexcept { return n == low || (ambiguous && n == low + 1); }
  std::vector<int> values() const {
    return ambiguous ? std::vector<int>{low, low + 1} : std::vector<int>{low};
  }

  friend bool operator==(const CountCandidates&, const CountCandidates&) = default;
};

/// Candidate job counts for a busy interval of length `length`, using the
/// reduced execution time acet - 2 theta - gamma. Throws
/// ErrorCode::tolerance_exceeds_execution if that value is not positive.
CountCandidates job_count_candidates(const TaskSpec& task, Tick length);

struct JobCountVector {
  std::vector<int> counts;  // indexed like TaskSet::tasks()
  Tick residual = 0;        // |sum(counts * acet) - length|

  friend bool operator==(const JobCountVector&, const JobCountVector&) = default;
};

enum class ToleranceMode {
  per_vector,  // sum(gamma_i * counts_i) of the vector itself
  max_count,   // sum(gamma_i * max candidate_i)
};

struct MatchResult {
  std::vector<JobCountVector> vectors;
  bool forced = false;  // nothing met the tolerance; best residual kept
};

/// All count vectors from the per-task candidate product whose total
/// execution matches the interval length within tolerance, ordered by
/// residual then counts.
MatchResult enumerate_matches(const TaskSet& taskset, const BusyInterval& interval,
                              ToleranceMode mode = ToleranceMode::per_vector);

/// Per-task candidate sets implied by the surviving vectors of an interval.
CountCandidates candidates_from_vectors(const std::vector<JobCountVector>& vectors,
                                        std::size_t task_index);

struct AmbiguityWitness {
  std::vector<TaskId> plus;
  std::vector<TaskId> minus;
};

/// Two disjoint non-empty task groups with equal summed acet, if any exist.
/// Exhaustive over 3^n assignments; requires n <= 20.
std::optional<AmbiguityWitness> ambiguity_witness(const TaskSet& taskset);

}  // namespace scheduleak
