#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace snapcheck {

using Value = std::uint64_t;
using EventIdx = std::size_t;

enum class EventKind { Scan, Update };

/// Timestamp used for the `end` of an operation that never returned.
inline constexpr std::int64_t kPendingEnd = std::numeric_limits<std::int64_t>::max();

/// One high-level operation of a snapshot object: an update(v) or a scan.
/// Timestamps are global integers standing for low-level action boundaries;
/// synthetic initial updates carry negative timestamps so that they precede
/// every real event.
struct HighLevelEvent {
  std::string id;        // canonical, derived from (pid, kind, rank)
  int pid = 0;
  EventKind kind = EventKind::Update;
  std::int64_t start = 0;
  std::int64_t end = kPendingEnd;
  std::optional<Value> arg;               // updates only
  std::optional<std::vector<Value>> ret;  // complete scans only
  bool initial = false;

  bool pending() const { return end == kPendingEnd; }
  bool complete() const { return !pending(); }
};

/// Real-time precedence: E1 happened entirely before E2. A pending event
/// precedes nothing.
inline bool precedes(const HighLevelEvent& a, const HighLevelEvent& b) {
  return a.complete() && a.end < b.start;
}

/// Equal-or-precedes, the order used on same-process updates.
inline bool equals_or_precedes(EventIdx a, EventIdx b,
                               const HighLevelEvent& ea, const HighLevelEvent& eb) {
  return a == b || precedes(ea, eb);
}

struct ValidationFinding {
  std::string code;     // stable identifier, e.g. "overlap", "arity"
  std::string message;  // human-readable, names the offending events
};

struct ValidationReport {
  std::vector<ValidationFinding> findings;
  bool ok() const { return findings.empty(); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A finite trace of one snapshot object shared by n processes. Events are
/// stored with the n synthetic initial updates first (one per process, value
/// `initial_value`, timestamps (-2n+2i, -2n+2i+1)), followed by the real
/// events sorted by start timestamp.
class Execution {
 public:
  Execution() = default;

  /// Builds an execution from real (non-initial) events; synthesizes the
  /// initial updates and assigns canonical ids. Does not validate.
  static Execution build(int n, std::vector<HighLevelEvent> ops, Value initial_value = 0);

  int n() const { return n_; }
  Value initial_value() const { return initial_value_; }

  const std::vector<HighLevelEvent>& events() const { return events_; }
  const HighLevelEvent& event(EventIdx e) const { return events_[e]; }
  std::size_t size() const { return events_.size(); }

  /// Index of process i's initial update.
  EventIdx initial_of(int pid) const { return static_cast<EventIdx>(pid); }

  /// All complete events, in storage order.
  std::vector<EventIdx> complete_events() const;

  /// Complete scans ordered by (start, pid).
  const std::vector<EventIdx>& complete_scans() const { return complete_scans_; }

  /// Process i's updates in time order, the initial one first. Includes
  /// pending updates.
  const std::vector<EventIdx>& updates_of(int pid) const { return updates_by_pid_[pid]; }

  std::optional<EventIdx> find(std::string_view id) const;

  bool precedes_idx(EventIdx a, EventIdx b) const {
    return precedes(events_[a], events_[b]);
  }

 private:
  int n_ = 0;
  Value initial_value_ = 0;
  std::vector<HighLevelEvent> events_;
  std::vector<EventIdx> complete_scans_;
  std::vector<std::vector<EventIdx>> updates_by_pid_;
};

/// Structural checks: per-process totality, pending-last, initials, scan
/// arity, boundary distinctness, non-negative real timestamps.
ValidationReport validate(const Execution& exec);

/// Parses the trace file format:
///   n=<int> [init=<int>]
///   <pid> <kind> <start> <end|pending> [arg=<int>] [ret=<int,...,int>]
/// '#' starts a comment. Throws ParseError on syntactic problems; semantic
/// problems are left to validate().
Execution parse_trace(std::string_view text);

/// Inverse of parse_trace: header plus real events sorted by start. Round-trips
/// bit-exactly through parse_trace for validated executions.
std::string serialize_trace(const Execution& exec);

bool same_events(const Execution& a, const Execution& b);

}  // namespace snapcheck
