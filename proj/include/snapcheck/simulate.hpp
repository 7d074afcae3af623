#pragma once

#include <cassert>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snapcheck/trace.hpp"

namespace snapcheck {

struct OpRequest {
  EventKind kind = EventKind::Update;
  Value arg = 0;  // updates only
};

using ProcessScript = std::vector<OpRequest>;
using OpScript = std::vector<ProcessScript>;  // indexed by pid

struct Schedule {
  std::vector<int> steps;
};

/// One register cell per process; updates stamp a per-process sequence
/// number so retry-based scans can detect intervening writes.
struct RegisterCell {
  std::uint64_t seq = 0;
  Value value = 0;
  friend bool operator==(const RegisterCell&, const RegisterCell&) = default;
};

/// Scratch state of one in-flight operation.
struct OpProgress {
  OpRequest op;
  std::size_t phase = 0;
  std::vector<RegisterCell> collected;
  std::vector<RegisterCell> previous;
  bool have_previous = false;
};

/// What a model may do in one atomic action: read any cell, write its own.
class StepContext {
 public:
  StepContext(std::vector<RegisterCell>& cells, int pid) : cells_(cells), pid_(pid) {}
  const RegisterCell& read(std::size_t idx) const { return cells_[idx]; }
  std::size_t cell_count() const { return cells_.size(); }
  void write(Value v) {
    assert(pid_ >= 0 && static_cast<std::size_t>(pid_) < cells_.size());
    auto& cell = cells_[static_cast<std::size_t>(pid_)];
    ++cell.seq;
    cell.value = v;
  }

 private:
  std::vector<RegisterCell>& cells_;
  int pid_;
};

struct StepResult {
  bool done = false;
  std::vector<Value> ret;  // completed scans only
};

/// A deterministic snapshot-object implementation, described one atomic
/// action at a time.
class AlgorithmModel {
 public:
  virtual ~AlgorithmModel() = default;
  virtual std::string_view name() const = 0;
  virtual std::string_view description() const = 0;
  virtual StepResult step(OpProgress& op, StepContext ctx, int pid) const = 0;
};

/// The registered models: AtomicMock, SingleCollect, DoubleCollectSeq,
/// ParityQuirk.
const std::vector<const AlgorithmModel*>& builtin_models();
const AlgorithmModel* find_model(std::string_view name);

/// Replays a script under a model one scheduled action at a time. Copyable,
/// so enumerations can fork mid-run.
class SimEngine {
 public:
  SimEngine(const AlgorithmModel& model, OpScript scripts, int n, Value initial_value = 0);

  int n() const { return n_; }
  /// False when the process has nothing to do (script exhausted, no active
  /// op): stepping it would be a no-op.
  bool can_step(int pid) const;
  void step(int pid);
  /// All scripted work finished.
  bool done() const;
  std::size_t actions() const { return actions_; }
  /// The execution so far; operations still in flight become pending events.
  Execution finalize() const;

 private:
  struct ProcessState {
    std::size_t next_op = 0;
    std::optional<OpProgress> active;
    std::size_t first_action = 0;
  };

  const AlgorithmModel* model_;
  OpScript scripts_;
  int n_;
  Value initial_value_;
  std::vector<RegisterCell> cells_;
  std::vector<ProcessState> procs_;
  std::vector<HighLevelEvent> events_;
  std::size_t actions_ = 0;
};

struct RunOutcome {
  Execution execution;
  std::vector<std::uint8_t> noop;  // per schedule step: 1 = skipped
  bool trailing_noop() const { return !noop.empty() && noop.back(); }
};

/// Runs the whole schedule; a scheduled process with no work is recorded as
/// a no-op. Throws std::invalid_argument on malformed input (pid out of
/// range, script length mismatch).
RunOutcome run(const AlgorithmModel& model, const Schedule& schedule, const OpScript& scripts,
               int n, Value initial_value = 0);

/// A similar execution: same schedule and op kinds, update arguments
/// replaced.
struct SimilarityVariant {
  OpScript scripts;
};

/// Falsifier for the schedule-based property: runs the base and every
/// variant, and checks (1) identical event skeletons and (2) the existence of
/// per-(scan, index) source updates, identified by skeleton position, whose
/// argument matches the scan's return entry in every run. True = no
/// counterexample among these variants.
bool probe_schedule_based(const AlgorithmModel& model, const Schedule& schedule,
                          const OpScript& scripts, const std::vector<SimilarityVariant>& variants,
                          int n, Value initial_value = 0);

struct RunSpec {
  int n = 0;
  Value initial_value = 0;
  Schedule schedule;
  OpScript scripts;
};

/// Run file format:
///   n=<int> [init=<int>]
///   steps=<pid> <pid> ...
///   script <pid> {scan | update(<int>)} ...
/// '#' comments allowed. Throws ParseError.
RunSpec parse_run_file(std::string_view text);

std::string format_script(const ProcessScript& script);

}  // namespace snapcheck
