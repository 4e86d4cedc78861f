#include "scheduleak/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace scheduleak {

namespace {

[[noreturn]] void malformed(const std::string& what, std::size_t line) {
  throw Error(ErrorCode::io, what + " (line " + std::to_string(line) + ")");
}

std::vector<Tick> parse_row(const std::string& text, std::size_t fields, std::size_t line) {
  std::vector<Tick> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(cell, &used);
      if (cell.find_first_not_of(" \t\r", used) != std::string::npos) malformed("bad number", line);
      out.push_back(v);
    } catch (const std::logic_error&) {
      malformed("bad number '" + cell + "'", line);
    }
  }
  if (out.size() != fields) malformed("expected " + std::to_string(fields) + " fields", line);
  return out;
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

// Reads a CSV with the given header and fixed integer columns.
std::vector<std::vector<Tick>> read_table(std::istream& in, const std::string& header,
                                          std::size_t fields) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != header) {
    throw Error(ErrorCode::io, "expected header '" + header + "'");
  }
  std::vector<std::vector<Tick>> rows;
  std::size_t no = 1;
  while (std::getline(in, line)) {
    ++no;
    line = trim(line);
    if (line.empty()) continue;
    rows.push_back(parse_row(line, fields, no));
  }
  return rows;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

void write_taskset(std::ostream& out, const TaskSet& taskset) {
  out << kTaskSetHeader << '\n';
  for (const auto& t : taskset.tasks()) {
    out << t.id << ',' << t.period << ',' << t.wcet << ',' << t.acet << ',' << t.offset << ','
        << t.priority << ',' << t.gamma << ',' << t.theta << '\n';
  }
}

TaskSet read_taskset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kTaskSetHeader) {
    throw Error(ErrorCode::io, "missing task-set header");
  }
  std::vector<TaskSpec> tasks;
  std::size_t no = 1;
  while (std::getline(in, line)) {
    ++no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto v = parse_row(line, 8, no);
    tasks.push_back({static_cast<TaskId>(v[0]), v[1], v[2], v[3], v[4], static_cast<int>(v[5]),
                     v[6], v[7]});
  }
  TaskSet ts(std::move(tasks));
  if (auto e = ts.validate(); !e.empty()) throw Error(ErrorCode::io, "invalid task set: " + e);
  return ts;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "begin,end,task_id\n";
  for (const auto& s : trace.slices) out << s.begin << ',' << s.end << ',' << s.task_id << '\n';
}

std::vector<ExecSlice> read_trace_csv(std::istream& in) {
  std::vector<ExecSlice> out;
  for (const auto& r : read_table(in, "begin,end,task_id", 3)) {
    out.push_back({static_cast<TaskId>(r[2]), r[0], r[1]});
  }
  return out;
}

Trace trace_from_slices(const TaskSet& taskset, const std::vector<ExecSlice>& slices) {
  Trace trace;
  trace.slices = slices;
  trace.jobs.resize(taskset.size());
  for (const auto& s : slices) {
    trace.horizon = std::max(trace.horizon, s.end);
    const std::size_t i = taskset.index_of(s.task_id);
    const TaskSpec& t = taskset[i];
    const int ordinal = static_cast<int>(floor_div(s.begin - t.offset, t.period));
    auto& jobs = trace.jobs[i];
    if (jobs.empty() || jobs.back().ordinal != ordinal) {
      Job j;
      j.task_id = t.id;
      j.ordinal = ordinal;
      j.arrival = t.offset + ordinal * t.period;
      j.start = s.begin;
      jobs.push_back(j);
    }
    jobs.back().exec += s.end - s.begin;
    jobs.back().completion = s.end;
  }
  return trace;
}

void write_busy_csv(std::ostream& out, const std::vector<BusyInterval>& intervals) {
  out << "start,length\n";
  for (const auto& bi : intervals) out << bi.start << ',' << bi.length << '\n';
}

std::vector<BusyInterval> read_busy_csv(std::istream& in) {
  std::vector<BusyInterval> out;
  for (const auto& r : read_table(in, "start,length", 2)) {
    if (r[1] <= 0) throw Error(ErrorCode::io, "busy interval with non-positive length");
    out.push_back({r[0], r[1]});
  }
  std::sort(out.begin(), out.end(),
            [](const BusyInterval& a, const BusyInterval& b) { return a.start < b.start; });
  return out;
}

void write_reconstruction_csv(std::ostream& out, const ReconstructedSchedule& schedule) {
  out << "interval_start,task_id,arrival,start\n";
  for (const auto& j : schedule.jobs) {
    out << j.interval_start << ',' << j.task_id << ',' << j.arrival << ',' << j.start << '\n';
  }
}

ReconstructedSchedule read_reconstruction_csv(std::istream& in) {
  ReconstructedSchedule out;
  for (const auto& r : read_table(in, "interval_start,task_id,arrival,start", 4)) {
    out.jobs.push_back({static_cast<TaskId>(r[1]), r[0], r[2], r[3]});
  }
  return out;
}

void write_histogram_csv(std::ostream& out, const std::vector<ArrivalHistogram>& histograms) {
  out << "task_id,position,count\n";
  for (const auto& h : histograms) {
    for (std::size_t pos = 0; pos < h.counts.size(); ++pos) {
      if (h.counts[pos] != 0) out << h.task_id << ',' << pos << ',' << h.counts[pos] << '\n';
    }
  }
}

void write_report_csv(std::ostream& out, const PrecisionReport& report) {
  out << "task_id,sd,precision,u,unmatched\n";
  for (const auto& t : report.tasks) {
    out << t.task_id << ',' << fmt(t.sd) << ',' << fmt(t.precision) << ','
        << t.matched + t.unmatched << ',' << t.unmatched << '\n';
  }
  out << "eta_prime," << fmt(report.eta_prime) << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io, "cannot write " + path);
  f << contents;
  if (!f) throw Error(ErrorCode::io, "write failed for " + path);
}

}  // namespace scheduleak
