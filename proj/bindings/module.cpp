#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "snapcheck/alpha.hpp"
#include "snapcheck/hunt.hpp"
#include "snapcheck/linearize.hpp"
#include "snapcheck/oracle.hpp"
#include "snapcheck/simulate.hpp"
#include "snapcheck/trace.hpp"

namespace py = pybind11;

namespace {

snapcheck::Execution load_trace(const std::string& text) {
  snapcheck::Execution exec = snapcheck::parse_trace(text);
  snapcheck::ValidationReport report = snapcheck::validate(exec);
  if (!report.findings.empty()) throw std::invalid_argument(report.findings.front().message);
  return exec;
}

const snapcheck::AlgorithmModel& load_model(const std::string& name) {
  if (const snapcheck::AlgorithmModel* model = snapcheck::find_model(name)) return *model;
  throw std::invalid_argument("unknown model '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(snapcheck, m) {
  m.doc() = "verification toolkit for snapshot-object implementations";

  m.def("models", [] {
    std::vector<std::string> names;
    for (const auto* model : snapcheck::builtin_models()) names.emplace_back(model->name());
    return names;
  });

  m.def(
      "check",
      [](const std::string& trace) {
        snapcheck::Execution exec = load_trace(trace);
        std::ostringstream report;
        auto alpha = snapcheck::search_alpha(exec);
        if (!alpha) {
          report << "NOT_LINEARIZABLE\n";
          return py::make_tuple(false, report.str());
        }
        report << snapcheck::serialize_alpha(exec, *alpha);
        report << snapcheck::serialize_order(exec, snapcheck::build_linearization(exec, *alpha));
        report << "LINEARIZABLE\n";
        return py::make_tuple(true, report.str());
      },
      py::arg("trace"),
      "Decide linearizability of a trace; returns (verdict, report text).");

  m.def(
      "oracle",
      [](const std::string& trace, std::size_t max_events) {
        snapcheck::Execution exec = load_trace(trace);
        return snapcheck::oracle_linearizable(exec, {.max_events = max_events}).has_value();
      },
      py::arg("trace"), py::arg("max_events") = snapcheck::OracleOptions{}.max_events,
      "Decide linearizability by brute-force enumeration.");

  m.def(
      "properties",
      [](const std::string& trace, const std::string& alpha) {
        snapcheck::Execution exec = load_trace(trace);
        snapcheck::AlphaAssignment assignment = snapcheck::parse_alpha(exec, alpha);
        std::vector<std::string> lines;
        for (const auto& violation : snapcheck::check_properties(exec, assignment))
          lines.push_back(snapcheck::format_violation(exec, violation));
        return lines;
      },
      py::arg("trace"), py::arg("alpha"),
      "Check the six properties of a scan assignment; returns violation lines.");

  m.def(
      "simulate",
      [](const std::string& run, const std::string& model) {
        snapcheck::RunSpec spec = snapcheck::parse_run_file(run);
        snapcheck::RunOutcome outcome = snapcheck::run(load_model(model), spec.schedule,
                                                       spec.scripts, spec.n, spec.initial_value);
        return snapcheck::serialize_trace(outcome.execution);
      },
      py::arg("run"), py::arg("model") = "SingleCollect",
      "Run a scripted schedule under a model; returns the trace text.");

  m.def(
      "hunt",
      [](const std::string& model, int processes, int max_steps, int max_ops, bool paranoid,
         int jobs) {
        snapcheck::HuntReport report =
            snapcheck::hunt(load_model(model), {.n = processes, .max_steps = max_steps,
                                                .max_ops = max_ops},
                            {.paranoid = paranoid, .jobs = jobs});
        return snapcheck::serialize_hunt_report(report);
      },
      py::arg("model"), py::arg("processes") = 2, py::arg("max_steps") = 12,
      py::arg("max_ops") = 2, py::arg("paranoid") = false, py::arg("jobs") = 1,
      "Search the simple executions of a model for a counterexample.");

  m.def(
      "reduction",
      [](const std::string& model, const std::vector<snapcheck::Value>& domain, int processes,
         int max_steps, int max_ops, bool paranoid, int jobs) {
        snapcheck::ReductionReport report = snapcheck::check_reduction(
            load_model(model), domain,
            {.n = processes, .max_steps = max_steps, .max_ops = max_ops},
            {.paranoid = paranoid, .jobs = jobs});
        return snapcheck::serialize_reduction_report(report);
      },
      py::arg("model"), py::arg("domain"), py::arg("processes") = 3, py::arg("max_steps") = 8,
      py::arg("max_ops") = 1, py::arg("paranoid") = false, py::arg("jobs") = 1,
      "Compare general and simple counterexample sweeps.");
}
