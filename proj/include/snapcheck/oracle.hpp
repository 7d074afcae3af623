#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "snapcheck/linearize.hpp"
#include "snapcheck/trace.hpp"

namespace snapcheck {

class BoundExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleOptions {
  /// Cap on non-initial events before the enumeration is refused.
  std::size_t max_events = 12;
};

struct LinearizationCandidate {
  std::vector<EventIdx> chosen;  // the linearized event set, ascending
  TotalOrder order;
};

/// Ground-truth linearizability by enumeration: every subset of pending
/// events may take effect, and for each choice the linear extensions of
/// real-time precedence are searched for one satisfying the sequential
/// specification. Scans prune eagerly (a scan's view is fixed the moment it
/// is placed), and exhausted placement sets are memoized per subset; neither
/// cuts any viable extension. Returns the first witness found, or nullopt.
/// Throws BoundExceededError when the trace has more than max_events
/// non-initial events.
std::optional<LinearizationCandidate> oracle_linearizable(const Execution& exec,
                                                          OracleOptions opts = {});

}  // namespace snapcheck
