#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "snapcheck/oracle.hpp"
#include "snapcheck/simulate.hpp"
#include "snapcheck/trace.hpp"

namespace snapcheck {

struct HuntBounds {
  int n = 2;
  int max_steps = 12;
  int max_ops = 2;
};

/// An (i, j)-simple value assignment: process i writes 0 for its first r_i
/// updates and 1 afterwards, likewise j with r_j; everyone else writes 0.
struct SimpleParams {
  int i = 0;
  int j = 1;
  int r_i = 0;
  int r_j = 0;
};

struct HuntOptions {
  bool paranoid = false;  // cross-check every verdict against the oracle
  int jobs = 1;
  OracleOptions oracle;
};

struct SimpleCounterexample {
  OpScript scripts;
  Schedule schedule;
  SimpleParams params;
  Execution execution;
};

struct HuntReport {
  std::string model;
  HuntBounds bounds;
  std::uint64_t checked = 0;
  std::optional<SimpleCounterexample> counterexample;
  bool clean() const { return !counterexample.has_value(); }
};

/// All operation-kind scripts for one process, up to max_ops operations,
/// shortest first, scans before updates at equal length.
std::vector<ProcessScript> enumerate_kind_scripts(int max_ops);

/// Every schedule over n processes of length <= max_steps, in preorder
/// (prefix before its extensions). The visitor returns false to stop.
void enumerate_schedules(int n, int max_steps, const std::function<bool(const Schedule&)>& visit);

/// The (i, j)-simple parameter range for the given scripts: r ranges over
/// 0..#updates inclusive for each of i and j.
std::vector<SimpleParams> enumerate_simple_assignments(const OpScript& kinds, int i, int j);

OpScript apply_simple_params(const OpScript& kinds, const SimpleParams& params);

struct SimpleInstance {
  const OpScript& scripts;
  const SimpleParams& params;
  const Schedule& schedule;
  const Execution& execution;
};

/// Sweeps every simple execution of the model inside the bounds: op-kind
/// scripts x ordered pairs (i, j) x simple assignments x schedules. Schedules
/// are enumerated without no-op steps, so every node is a distinct run. The
/// visitor returns false to stop; the return value is false when a visitor
/// stopped the sweep.
bool for_each_simple_execution(const AlgorithmModel& model, const HuntBounds& bounds,
                               const std::function<bool(const SimpleInstance&)>& visit);

/// Searches the simple executions of the model for one that fails the
/// correct-function search; deterministic (first counterexample in sweep
/// order, regardless of jobs).
HuntReport hunt(const AlgorithmModel& model, const HuntBounds& bounds,
                const HuntOptions& options = {});

std::string serialize_hunt_report(const HuntReport& report);

struct GeneralCounterexample {
  OpScript scripts;
  Schedule schedule;
  Execution execution;
};

struct ReductionReport {
  std::string model;
  HuntBounds bounds;
  std::vector<Value> domain;
  std::uint64_t general_checked = 0;
  std::uint64_t general_violations = 0;
  std::optional<GeneralCounterexample> general;  // first in sweep order
  HuntReport simple;
  /// A general counterexample exists inside the bounds but no simple one
  /// does: the simple-execution reduction missed it.
  bool breach() const { return general_violations > 0 && simple.clean(); }
};

/// Sweeps every execution of the model whose update arguments range over the
/// given domain (same structural bounds as the simple sweep), then hunts the
/// simple executions, and compares the two outcomes.
ReductionReport check_reduction(const AlgorithmModel& model, const std::vector<Value>& domain,
                                const HuntBounds& bounds, const HuntOptions& options = {});

std::string serialize_reduction_report(const ReductionReport& report);

}  // namespace snapcheck
