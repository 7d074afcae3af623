#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "snapcheck/alpha.hpp"
#include "snapcheck/hunt.hpp"
#include "snapcheck/linearize.hpp"
#include "snapcheck/oracle.hpp"
#include "snapcheck/simulate.hpp"
#include "snapcheck/trace.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void emit(const std::string& text, const std::string& out_path) {
  std::cout << text;
  if (out_path.empty()) return;
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << text;
}

snapcheck::Execution load_trace(const std::string& path) {
  snapcheck::Execution exec = snapcheck::parse_trace(slurp(path));
  snapcheck::ValidationReport report = snapcheck::validate(exec);
  if (!report.findings.empty()) {
    for (const auto& finding : report.findings)
      std::cerr << path << ": " << finding.message << '\n';
    throw std::runtime_error("trace failed validation");
  }
  return exec;
}

snapcheck::OracleOptions oracle_options_from_env() {
  snapcheck::OracleOptions options;
  if (const char* bound = std::getenv("SNAPCHECK_ORACLE_BOUND")) {
    std::size_t parsed = 0;
    try {
      parsed = std::stoull(bound);
    } catch (const std::exception&) {
      throw std::runtime_error("SNAPCHECK_ORACLE_BOUND is not a number");
    }
    options.max_events = parsed;
  }
  return options;
}

const snapcheck::AlgorithmModel& load_model(const std::string& name) {
  if (const snapcheck::AlgorithmModel* model = snapcheck::find_model(name)) return *model;
  std::string known;
  for (const auto* m : snapcheck::builtin_models()) {
    if (!known.empty()) known += ", ";
    known += m->name();
  }
  throw std::runtime_error("unknown model '" + name + "' (known: " + known + ")");
}

int run_check(const std::string& trace_path, const std::string& out_path) {
  snapcheck::Execution exec = load_trace(trace_path);
  std::ostringstream report;
  auto alpha = snapcheck::search_alpha(exec);
  if (!alpha) {
    report << "NOT_LINEARIZABLE\n";
    emit(report.str(), out_path);
    return 1;
  }
  report << snapcheck::serialize_alpha(exec, *alpha);
  report << snapcheck::serialize_order(exec, snapcheck::build_linearization(exec, *alpha));
  report << "LINEARIZABLE\n";
  emit(report.str(), out_path);
  return 0;
}

int run_oracle(const std::string& trace_path, const std::string& out_path) {
  snapcheck::Execution exec = load_trace(trace_path);
  std::ostringstream report;
  auto witness = snapcheck::oracle_linearizable(exec, oracle_options_from_env());
  if (!witness) {
    report << "NOT_LINEARIZABLE\n";
    emit(report.str(), out_path);
    return 1;
  }
  report << snapcheck::serialize_order(exec, witness->order);
  report << "LINEARIZABLE\n";
  emit(report.str(), out_path);
  return 0;
}

int run_props(const std::string& trace_path, const std::string& alpha_path,
              const std::string& out_path) {
  snapcheck::Execution exec = load_trace(trace_path);
  snapcheck::AlphaAssignment alpha = snapcheck::parse_alpha(exec, slurp(alpha_path));
  auto violations = snapcheck::check_properties(exec, alpha);
  std::ostringstream report;
  for (const auto& violation : violations)
    report << snapcheck::format_violation(exec, violation) << '\n';
  if (violations.empty()) report << "OK\n";
  emit(report.str(), out_path);
  return violations.empty() ? 0 : 1;
}

int run_simulate(const std::string& run_path, const std::string& model_name,
                 const std::string& out_path) {
  snapcheck::RunSpec spec = snapcheck::parse_run_file(slurp(run_path));
  const auto& model = load_model(model_name);
  snapcheck::RunOutcome outcome =
      snapcheck::run(model, spec.schedule, spec.scripts, spec.n, spec.initial_value);
  std::size_t noops = 0;
  for (auto flag : outcome.noop) noops += flag;
  std::ostringstream report;
  report << "# model=" << model.name() << '\n';
  report << "# steps=" << outcome.noop.size() << " noops=" << noops << '\n';
  report << snapcheck::serialize_trace(outcome.execution);
  emit(report.str(), out_path);
  return 0;
}

int run_hunt(const std::string& model_name, const snapcheck::HuntBounds& bounds,
             const snapcheck::HuntOptions& options, const std::string& out_path) {
  snapcheck::HuntReport report = snapcheck::hunt(load_model(model_name), bounds, options);
  emit(snapcheck::serialize_hunt_report(report), out_path);
  return report.clean() ? 0 : 1;
}

int run_reduction(const std::string& model_name, const std::vector<snapcheck::Value>& domain,
                  const snapcheck::HuntBounds& bounds, const snapcheck::HuntOptions& options,
                  const std::string& out_path) {
  snapcheck::ReductionReport report =
      snapcheck::check_reduction(load_model(model_name), domain, bounds, options);
  emit(snapcheck::serialize_reduction_report(report), out_path);
  return report.breach() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification toolkit for snapshot-object implementations"};
  app.require_subcommand(1);

  std::string trace_path;
  std::string alpha_path;
  std::string run_path;
  std::string out_path;
  std::string model_name = "SingleCollect";
  snapcheck::HuntBounds bounds;
  snapcheck::HuntOptions options;
  std::vector<snapcheck::Value> domain = {0, 1};

  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "also write the report to this file");
  };
  auto add_bounds = [&](CLI::App* cmd) {
    cmd->add_option("--processes", bounds.n, "number of processes")->capture_default_str();
    cmd->add_option("--bound-steps", bounds.max_steps, "maximum schedule length")
        ->capture_default_str();
    cmd->add_option("--bound-ops", bounds.max_ops, "maximum operations per process")
        ->capture_default_str();
    cmd->add_flag("--paranoid", options.paranoid, "cross-check every verdict with the oracle");
    cmd->add_option("--jobs", options.jobs, "worker threads")->capture_default_str();
  };

  CLI::App* check = app.add_subcommand("check", "decide linearizability of a trace file");
  check->add_option("trace", trace_path, "trace file")->required();
  add_out(check);

  CLI::App* oracle =
      app.add_subcommand("oracle", "decide linearizability by brute-force enumeration");
  oracle->add_option("trace", trace_path, "trace file")->required();
  add_out(oracle);

  CLI::App* props = app.add_subcommand("props", "check the six properties of a scan assignment");
  props->add_option("trace", trace_path, "trace file")->required();
  props->add_option("alpha", alpha_path, "assignment file (alpha <i> <scan-id> <update-id>)")
      ->required();
  add_out(props);

  CLI::App* simulate = app.add_subcommand("simulate", "run a scripted schedule under a model");
  simulate->add_option("run", run_path, "run file (n=, steps=, script lines)")->required();
  simulate->add_option("--model", model_name, "algorithm model")->capture_default_str();
  add_out(simulate);

  CLI::App* hunt = app.add_subcommand("hunt", "search simple executions for a counterexample");
  hunt->add_option("--model", model_name, "algorithm model")->capture_default_str();
  add_bounds(hunt);
  add_out(hunt);

  CLI::App* reduction =
      app.add_subcommand("reduction", "compare general and simple counterexample sweeps");
  reduction->add_option("--model", model_name, "algorithm model")->capture_default_str();
  reduction->add_option("--domain", domain, "update argument domain")
      ->delimiter(',')
      ->capture_default_str();
  add_bounds(reduction);
  add_out(reduction);

  try {
    app.parse(argc, argv);
    options.oracle = oracle_options_from_env();
    if (app.got_subcommand(check)) return run_check(trace_path, out_path);
    if (app.got_subcommand(oracle)) return run_oracle(trace_path, out_path);
    if (app.got_subcommand(props)) return run_props(trace_path, alpha_path, out_path);
    if (app.got_subcommand(simulate)) return run_simulate(run_path, model_name, out_path);
    if (app.got_subcommand(hunt)) return run_hunt(model_name, bounds, options, out_path);
    if (app.got_subcommand(reduction))
      return run_reduction(model_name, domain, bounds, options, out_path);
    return 2;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const snapcheck::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
