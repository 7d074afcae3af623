#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "snapcheck/trace.hpp"

namespace snapcheck {

/// Candidate assignment α_i: complete scans -> process-i updates, for every
/// i < n. Partial assignments are allowed while a search is in flight;
/// checking requires totality.
class AlphaAssignment {
 public:
  AlphaAssignment() = default;
  explicit AlphaAssignment(int n) : n_(n) {}

  int n() const { return n_; }
  void set(EventIdx scan, int i, EventIdx update);
  void unset(EventIdx scan, int i);
  std::optional<EventIdx> get(EventIdx scan, int i) const;
  EventIdx at(EventIdx scan, int i) const;

  /// True when every (complete scan, index) pair is assigned.
  bool total_on(const Execution& exec) const;

  /// Scans that carry at least one assignment, ascending.
  std::vector<EventIdx> scans() const;

 private:
  int n_ = 0;
  std::map<EventIdx, std::vector<std::optional<EventIdx>>> map_;
};

/// One failed property instance. `property` is 1..6; the optional fields are
/// filled as the property's witness shape requires. The witnesses alone
/// re-trigger the failure via recheck_violation.
struct PropertyViolation {
  int property = 0;
  EventIdx scan = 0;
  std::optional<EventIdx> scan2;
  int i = 0;
  std::optional<int> j;
  std::optional<EventIdx> update;
};

/// Evaluates all six correctness properties of alpha on exec and returns
/// every violation, ordered by (property, scan start, second scan start,
/// i, j, update start). Empty result == alpha is correct. Throws
/// std::invalid_argument when alpha is not total or references events that
/// are not process-i updates of exec.
std::vector<PropertyViolation> check_properties(const Execution& exec,
                                                const AlphaAssignment& alpha);

/// S1 <_α S2: some α_i(S1) strictly precedes α_i(S2).
bool alpha_less(const Execution& exec, const AlphaAssignment& alpha, EventIdx s1, EventIdx s2);

/// Re-evaluates a single reported violation from its witnesses; true when the
/// property still fails on them.
bool recheck_violation(const Execution& exec, const AlphaAssignment& alpha,
                       const PropertyViolation& v);

struct SearchOptions {
  /// Stop after this many complete assignments in enumerate_alphas.
  std::size_t max_results = 0;  // 0 = unlimited
};

/// Backtracking search for a correct assignment. Candidates for (scan, i) are
/// the process-i updates whose value matches the scan's i-th return entry
/// (property 1), tried in increasing start order; scans are processed by
/// (start, pid). Returns the first assignment passing all six properties, or
/// nullopt when none exists.
std::optional<AlphaAssignment> search_alpha(const Execution& exec);

/// Full-enumeration mode of the same search: every correct assignment, in
/// search order.
std::vector<AlphaAssignment> enumerate_alphas(const Execution& exec, SearchOptions opts = {});

/// "P<k> scan=<id> [scan2=<id>] i=<idx> [j=<idx>] [update=<id>]"
std::string format_violation(const Execution& exec, const PropertyViolation& v);

/// "alpha <i> <scan-id> <update-id>" per assigned pair, scans by (start, pid).
std::string serialize_alpha(const Execution& exec, const AlphaAssignment& alpha);

/// Parses the serialize_alpha format; '#' comments and blank lines allowed.
/// Throws ParseError on syntax errors or unknown event ids.
AlphaAssignment parse_alpha(const Execution& exec, std::string_view text);

}  // namespace snapcheck
