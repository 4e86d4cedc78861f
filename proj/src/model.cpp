#include "scheduleak/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace scheduleak {

Tick lcm_checked(Tick a, Tick b) {
  if (a <= 0 || b <= 0) {
    throw Error(ErrorCode::configuration, "lcm of non-positive period");
  }
  Tick g = std::gcd(a, b);
  Tick out = 0;
  if (__builtin_mul_overflow(a / g, b, &out)) {
    throw Error(ErrorCode::configuration, "hyper-period overflows the tick type");
  }
  return out;
}

Tick hyper_period(std::span<const TaskSpec> tasks) {
  if (tasks.empty()) {
    throw Error(ErrorCode::configuration, "hyper-period of an empty task set");
  }
  Tick h = 1;
  for (const auto& t : tasks) h = lcm_checked(h, t.period);
  return h;
}

TaskSet::TaskSet(std::vector<TaskSpec> tasks) : tasks_(std::move(tasks)) {
  if (!tasks_.empty()) hyper_period_ = scheduleak::hyper_period(tasks_);
}

std::size_t TaskSet::index_of(TaskId id) const {
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    if (tasks_[i].id == id) return i;
  }
  throw Error(ErrorCode::configuration, "unknown task id " + std::to_string(id));
}

double TaskSet::utilization() const noexcept {
  double u = 0.0;
  for (const auto& t : tasks_) u += t.utilization();
  return u;
}

std::string TaskSet::validate() const {
  std::ostringstream err;
  std::set<TaskId> ids;
  std::set<int> priorities;
  for (const auto& t : tasks_) {
    if (!ids.insert(t.id).second) {
      err << "duplicate task id " << t.id;
      return err.str();
    }
    if (!priorities.insert(t.priority).second) {
      err << "duplicate priority " << t.priority << " (task " << t.id << ")";
      return err.str();
    }
    if (t.period <= 0 || t.acet <= 0 || t.acet > t.wcet || t.wcet > t.period) {
      err << "task " << t.id << ": need 0 < acet <= wcet <= period";
      return err.str();
    }
    if (t.offset < 0 || t.offset >= t.period) {
      err << "task " << t.id << ": offset outside [0, period)";
      return err.str();
    }
    if (t.gamma < 0 || t.theta < 0) {
      err << "task " << t.id << ": negative tolerance";
      return err.str();
    }
    if (t.gamma >= t.acet && t.gamma > 0) {
      err << "task " << t.id << ": gamma must be smaller than acet";
      return err.str();
    }
  }
  // Integer form of sum(wcet/p) <= 1 would need the hyper-period; the float
  // sum is accurate enough at the tick scales used here.
  if (utilization() > 1.0 + 1e-12) {
    err << "total utilization " << utilization() << " exceeds 1";
    return err.str();
  }
  return {};
}

}  // namespace scheduleak
