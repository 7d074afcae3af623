#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "snapcheck/alpha.hpp"
#include "snapcheck/trace.hpp"

namespace snapcheck {

/// Orientation of every update/scan pair over the linearization domain
/// (complete events plus all updates, pending ones included): an update is
/// placed before a scan exactly when it equals-or-precedes the scan's source
/// for the update's process; otherwise the scan comes first.
struct TriangleRelation {
  std::vector<EventIdx> domain;                      // ascending event indices
  std::vector<std::pair<EventIdx, EventIdx>> edges;  // (a, b) meaning a before b
};

struct Cycle {
  std::vector<EventIdx> events;  // e0 -> e1 -> ... -> back to e0
};

struct TotalOrder {
  std::vector<EventIdx> sequence;
};

class CycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The linearization domain: complete events plus pending updates.
std::vector<EventIdx> linearization_domain(const Execution& exec);

/// Builds the relation for a correct alpha; throws std::invalid_argument when
/// check_properties reports violations.
TriangleRelation build_triangle(const Execution& exec, const AlphaAssignment& alpha);

/// Same construction without the correctness gate, for inspecting how an
/// incorrect alpha orients the pairs.
TriangleRelation build_triangle_unchecked(const Execution& exec, const AlphaAssignment& alpha);

/// Detects a cycle in the union of real-time precedence and the relation's
/// edges over its domain; returns a minimal-length witness among the cycles
/// found, or nullopt.
std::optional<Cycle> has_cycle(const Execution& exec, const TriangleRelation& tri);

/// Topological order of the union relation (transitive closure computed
/// explicitly), deterministic tie-break by (start, pid). Callers pass an
/// alpha that passed check_properties; throws CycleError if a cycle remains.
TotalOrder build_linearization(const Execution& exec, const AlphaAssignment& alpha);

/// True when `order` is a duplicate-free arrangement of a legal domain
/// (every complete event present, only real events of exec), starts with the
/// initial updates, extends real-time precedence, and every complete scan in
/// it returns exactly the values of the latest preceding update per process.
bool check_sequential_spec(const Execution& exec, const TotalOrder& order);

/// Random linear extensions of the union relation (uniform choice among the
/// ready events at every step), seeded for reproducibility.
std::vector<TotalOrder> sample_extensions(const Execution& exec, const TriangleRelation& tri,
                                          std::size_t count, std::uint64_t seed);

/// "LIN <id>" per event, in order.
std::string serialize_order(const Execution& exec, const TotalOrder& order);

}  // namespace snapcheck
