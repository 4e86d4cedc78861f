#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "scheduleak/harness.hpp"
#include "scheduleak/io.hpp"

namespace py = pybind11;
using namespace scheduleak;

namespace {

VariationModel make_variation(const std::string& kind, double mean_fraction) {
  if (kind == "none") return VariationModel{};
  if (kind == "normal") return {VariationKind::truncated_normal, mean_fraction};
  throw py::value_error("variation must be 'none' or 'normal'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Busy-interval schedule inference for fixed-priority task sets";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<TaskSpec>(m, "TaskSpec")
      .def(py::init<>())
      .def(py::init([](TaskId id, Tick period, Tick wcet, Tick acet, Tick offset, int priority,
                       Tick gamma, Tick theta) {
             return TaskSpec{id, period, wcet, acet, offset, priority, gamma, theta};
           }),
           py::arg("id"), py::arg("period"), py::arg("wcet"), py::arg("acet"), py::arg("offset") = 0,
           py::arg("priority") = 0, py::arg("gamma") = 0, py::arg("theta") = 0)
      .def_readwrite("id", &TaskSpec::id)
      .def_readwrite("period", &TaskSpec::period)
      .def_readwrite("wcet", &TaskSpec::wcet)
      .def_readwrite("acet", &TaskSpec::acet)
      .def_readwrite("offset", &TaskSpec::offset)
      .def_readwrite("priority", &TaskSpec::priority)
      .def_readwrite("gamma", &TaskSpec::gamma)
      .def_readwrite("theta", &TaskSpec::theta)
      .def("__repr__", [](const TaskSpec& t) {
        std::ostringstream o;
        o << "TaskSpec(id=" << t.id << ", period=" << t.period << ", acet=" << t.acet
          << ", offset=" << t.offset << ")";
        return o.str();
      });

  py::class_<TaskSet>(m, "TaskSet")
      .def(py::init<std::vector<TaskSpec>>())
      .def_property_readonly("tasks", [](const TaskSet& ts) {
        return std::vector<TaskSpec>(ts.tasks().begin(), ts.tasks().end());
      })
      .def_property_readonly("hyper_period", &TaskSet::hyper_period)
      .def_property_readonly("utilization", &TaskSet::utilization)
      .def("validate", &TaskSet::validate)
      .def("__len__", &TaskSet::size)
      .def("to_text", [](const TaskSet& ts) {
        std::ostringstream o;
        write_taskset(o, ts);
        return o.str();
      })
      .def_static("from_text", [](const std::string& text) {
        std::istringstream in(text);
        return read_taskset(in);
      });

  py::class_<BusyInterval>(m, "BusyInterval")
      .def(py::init([](Tick start, Tick length) { return BusyInterval{start, length}; }),
           py::arg("start"), py::arg("length"))
      .def_readwrite("start", &BusyInterval::start)
      .def_readwrite("length", &BusyInterval::length)
      .def("__eq__", [](const BusyInterval& a, const BusyInterval& b) { return a == b; })
      .def("__repr__", [](const BusyInterval& b) {
        return "BusyInterval(" + std::to_string(b.start) + ", " + std::to_string(b.length) + ")";
      });

  py::class_<CountCandidates>(m, "CountCandidates")
      .def_readonly("low", &CountCandidates::low)
      .def_readonly("ambiguous", &CountCandidates::ambiguous)
      .def("values", &CountCandidates::values);

  py::class_<JobCountVector>(m, "JobCountVector")
      .def_readonly("counts", &JobCountVector::counts)
      .def_readonly("residual", &JobCountVector::residual);

  py::class_<Job>(m, "Job")
      .def_readonly("task_id", &Job::task_id)
      .def_readonly("arrival", &Job::arrival)
      .def_readonly("start", &Job::start)
      .def_readonly("completion", &Job::completion);

  py::class_<Trace>(m, "Trace")
      .def_readonly("horizon", &Trace::horizon)
      .def_readonly("jobs", &Trace::jobs);

  py::class_<InferredJob>(m, "InferredJob")
      .def_readonly("task_id", &InferredJob::task_id)
      .def_readonly("interval_start", &InferredJob::interval_start)
      .def_readonly("arrival", &InferredJob::arrival)
      .def_readonly("start", &InferredJob::start);

  py::class_<TaskPrecision>(m, "TaskPrecision")
      .def_readonly("task_id", &TaskPrecision::task_id)
      .def_readonly("sd", &TaskPrecision::sd)
      .def_readonly("precision", &TaskPrecision::precision)
      .def_readonly("matched", &TaskPrecision::matched)
      .def_readonly("unmatched", &TaskPrecision::unmatched);

  py::class_<PipelineResult>(m, "PipelineResult")
      .def_property_readonly("eta_prime", [](const PipelineResult& r) { return r.report.eta_prime; })
      .def_property_readonly("eta_prime_observed",
                             [](const PipelineResult& r) { return r.observed_report.eta_prime; })
      .def_property_readonly("eta_naive", [](const PipelineResult& r) -> py::object {
        if (!r.naive_report) return py::none();
        return py::float_(r.naive_report->eta_prime);
      })
      .def_property_readonly("tasks", [](const PipelineResult& r) { return r.report.tasks; })
      .def_property_readonly("observed", [](const PipelineResult& r) { return r.observed; })
      .def_property_readonly("committed",
                             [](const PipelineResult& r) { return r.attack.schedule.committed; })
      .def_property_readonly("jobs", [](const PipelineResult& r) { return r.attack.schedule.jobs; })
      .def_property_readonly("iterations",
                             [](const PipelineResult& r) { return r.diagnostics.iterations; });

  m.def(
      "generate_taskset",
      [](int n_tasks, double util_lo, double util_hi, std::uint64_t seed, double acet_fraction,
         Tick hyper_period_cap) {
        GenConfig c;
        c.n_tasks = n_tasks;
        c.util_lo = util_lo;
        c.util_hi = util_hi;
        c.rng_seed = seed;
        c.acet_fraction = acet_fraction;
        c.hyper_period_cap = hyper_period_cap;
        return generate_taskset(c);
      },
      py::arg("n_tasks") = 10, py::arg("util_lo") = 0.001, py::arg("util_hi") = 0.1,
      py::arg("seed") = 0, py::arg("acet_fraction") = 0.8, py::arg("hyper_period_cap") = 30030);

  m.def(
      "simulate",
      [](const TaskSet& ts, Tick horizon, const std::string& variation, double mean_fraction,
         std::uint64_t seed) {
        return simulate(ts, horizon, make_variation(variation, mean_fraction), seed);
      },
      py::arg("taskset"), py::arg("horizon"), py::arg("variation") = "none",
      py::arg("mean_fraction") = 0.8, py::arg("seed") = 0);

  m.def("busy_intervals", &busy_intervals, py::arg("trace"));

  m.def("job_count_candidates", &job_count_candidates, py::arg("task"), py::arg("length"));

  m.def(
      "enumerate_matches",
      [](const TaskSet& ts, const BusyInterval& bi) { return enumerate_matches(ts, bi).vectors; },
      py::arg("taskset"), py::arg("interval"));

  m.def(
      "run_pipeline",
      [](const TaskSet& ts, const std::string& variation, double mean_fraction,
         double observe_fraction, Tick window_start, std::uint64_t seed, bool with_naive) {
        PipelineOptions opt;
        opt.variation = make_variation(variation, mean_fraction);
        opt.observe_fraction = observe_fraction;
        opt.window_start = window_start;
        opt.with_naive = with_naive;
        return run_pipeline(ts, opt, seed);
      },
      py::arg("taskset"), py::arg("variation") = "none", py::arg("mean_fraction") = 0.8,
      py::arg("observe_fraction") = 1.0, py::arg("window_start") = -1, py::arg("seed") = 0,
      py::arg("with_naive") = true, py::call_guard<py::gil_scoped_release>());

  m.def(
      "sweep_csv",
      [](const std::string& kind, int sets_per_bin, std::uint64_t seed, unsigned workers) {
        SweepKind k;
        if (kind == "utilization") k = SweepKind::utilization;
        else if (kind == "variation") k = SweepKind::variation;
        else if (kind == "task_count") k = SweepKind::task_count;
        else if (kind == "observation") k = SweepKind::observation;
        else throw py::value_error("unknown sweep kind: " + kind);
        SweepConfig c = SweepConfig::defaults(k);
        c.sets_per_bin = sets_per_bin;
        c.master_seed = seed;
        c.workers = workers;
        std::ostringstream o;
        {
          py::gil_scoped_release release;
          write_sweep_csv(o, run_sweep(c));
        }
        return o.str();
      },
      py::arg("kind") = "utilization", py::arg("sets_per_bin") = 20, py::arg("seed") = 1,
      py::arg("workers") = 0);
}
