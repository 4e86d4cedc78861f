#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "scheduleak/metrics.hpp"
#include "scheduleak/refine.hpp"

namespace scheduleak {

// Text formats. Readers throw ErrorCode::io on unreadable or malformed input.

inline constexpr const char* kTaskSetHeader = "# scheduleak-taskset v1";

void write_taskset(std::ostream& out, const TaskSet& taskset);
TaskSet read_taskset(std::istream& in);

/// `begin,end,task_id`, one row per execution slice.
void write_trace_csv(std::ostream& out, const Trace& trace);
std::vector<ExecSlice> read_trace_csv(std::istream& in);

/// Rebuilds per-job start times from slices. Relies on every job finishing
/// before its successor arrives, so a slice belongs to the job whose
/// arrival most recently precedes it.
Trace trace_from_slices(const TaskSet& taskset, const std::vector<ExecSlice>& slices);

/// `start,length`.
void write_busy_csv(std::ostream& out, const std::vector<BusyInterval>& intervals);
std::vector<BusyInterval> read_busy_csv(std::istream& in);

/// `interval_start,task_id,arrival,start`.
void write_reconstruction_csv(std::ostream& out, const ReconstructedSchedule& schedule);
ReconstructedSchedule read_reconstruction_csv(std::istream& in);

/// `task_id,position,count`, non-zero positions only.
void write_histogram_csv(std::ostream& out, const std::vector<ArrivalHistogram>& histograms);

/// `task_id,sd,precision,u,unmatched` then `eta_prime,<value>`.
void write_report_csv(std::ostream& out, const PrecisionReport& report);

/// File helpers that map open failures to ErrorCode::io.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace scheduleak
