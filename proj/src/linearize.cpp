#include "snapcheck/linearize.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <random>
#include <sstream>

namespace snapcheck {

std::vector<EventIdx> linearization_domain(const Execution& exec) {
  std::vector<EventIdx> domain;
  for (EventIdx e = 0; e < exec.size(); ++e) {
    const auto& ev = exec.event(e);
    if (ev.complete() || ev.kind == EventKind::Update) domain.push_back(e);
  }
  return domain;
}

TriangleRelation build_triangle_unchecked(const Execution& exec, const AlphaAssignment& alpha) {
  TriangleRelation tri;
  tri.domain = linearization_domain(exec);
  for (EventIdx s : exec.complete_scans()) {
    for (int i = 0; i < exec.n(); ++i) {
      EventIdx a = alpha.at(s, i);
      for (EventIdx u : exec.updates_of(i)) {
        if (equals_or_precedes(u, a, exec.event(u), exec.event(a)))
          tri.edges.emplace_back(u, s);
        else
          tri.edges.emplace_back(s, u);
      }
    }
  }
  return tri;
}

TriangleRelation build_triangle(const Execution& exec, const AlphaAssignment& alpha) {
  auto violations = check_properties(exec, alpha);
  if (!violations.empty())
    throw std::invalid_argument("alpha fails " + format_violation(exec, violations.front()));
  return build_triangle_unchecked(exec, alpha);
}

namespace {

/// Dense adjacency of precedence plus relation edges, on positions within
/// the domain.
struct UnionGraph {
  std::vector<EventIdx> domain;
  std::vector<std::size_t> pos_of;  // event index -> position, or npos
  std::vector<std::vector<std::uint8_t>> adj;

  UnionGraph(const Execution& exec, const TriangleRelation& tri) : domain(tri.domain) {
    pos_of.assign(exec.size(), static_cast<std::size_t>(-1));
    for (std::size_t p = 0; p < domain.size(); ++p) pos_of[domain[p]] = p;
    adj.assign(domain.size(), std::vector<std::uint8_t>(domain.size(), 0));
    for (std::size_t a = 0; a < domain.size(); ++a)
      for (std::size_t b = 0; b < domain.size(); ++b)
        if (a != b && exec.precedes_idx(domain[a], domain[b])) adj[a][b] = 1;
    for (const auto& [from, to] : tri.edges) {
      std::size_t a = from < pos_of.size() ? pos_of[from] : static_cast<std::size_t>(-1);
      std::size_t b = to < pos_of.size() ? pos_of[to] : static_cast<std::size_t>(-1);
      if (a != static_cast<std::size_t>(-1) && b != static_cast<std::size_t>(-1) && a != b)
        adj[a][b] = 1;
    }
  }

  void close() {
    const std::size_t m = adj.size();
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t a = 0; a < m; ++a)
        if (adj[a][k])
          for (std::size_t b = 0; b < m; ++b)
            if (adj[k][b]) adj[a][b] = 1;
  }
};

}  // namespace

std::optional<Cycle> has_cycle(const Execution& exec, const TriangleRelation& tri) {
  UnionGraph g(exec, tri);
  const std::size_t m = g.domain.size();
  std::optional<Cycle> best;
  std::vector<std::size_t> dist(m), parent(m);
  for (std::size_t src = 0; src < m; ++src) {
    std::fill(dist.begin(), dist.end(), static_cast<std::size_t>(-1));
    std::deque<std::size_t> queue;
    // BFS over successors; the first return to src closes a shortest cycle
    // through it.
    dist[src] = 0;
    queue.push_back(src);
    std::size_t found = static_cast<std::size_t>(-1);
    while (!queue.empty() && found == static_cast<std::size_t>(-1)) {
      std::size_t at = queue.front();
      queue.pop_front();
      for (std::size_t next = 0; next < m; ++next) {
        if (!g.adj[at][next]) continue;
        if (next == src) {
          found = at;
          break;
        }
        if (dist[next] != static_cast<std::size_t>(-1)) continue;
        dist[next] = dist[at] + 1;
        parent[next] = at;
        queue.push_back(next);
      }
    }
    if (found == static_cast<std::size_t>(-1)) continue;
    std::vector<std::size_t> path;
    for (std::size_t at = found; at != src; at = parent[at]) path.push_back(at);
    path.push_back(src);
    std::reverse(path.begin(), path.end());
    if (!best || path.size() < best->events.size()) {
      Cycle cycle;
      for (std::size_t p : path) cycle.events.push_back(g.domain[p]);
      best = std::move(cycle);
    }
  }
  return best;
}

namespace {

TotalOrder kahn_order(const Execution& exec, UnionGraph& g, std::mt19937_64* rng) {
  g.close();
  const std::size_t m = g.domain.size();
  std::vector<std::size_t> indegree(m, 0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (g.adj[a][b]) ++indegree[b];

  auto order_key = [&](std::size_t p) {
    const auto& ev = exec.event(g.domain[p]);
    return std::pair(ev.start, ev.pid);
  };
  std::vector<std::size_t> ready;
  for (std::size_t p = 0; p < m; ++p)
    if (indegree[p] == 0) ready.push_back(p);

  TotalOrder order;
  while (!ready.empty()) {
    std::size_t pick;
    if (rng) {
      std::uniform_int_distribution<std::size_t> dist(0, ready.size() - 1);
      pick = dist(*rng);
    } else {
      pick = 0;
      for (std::size_t r = 1; r < ready.size(); ++r)
        if (order_key(ready[r]) < order_key(ready[pick])) pick = r;
    }
    std::size_t at = ready[pick];
    ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(pick));
    order.sequence.push_back(g.domain[at]);
    for (std::size_t b = 0; b < m; ++b)
      if (g.adj[at][b] && --indegree[b] == 0) ready.push_back(b);
  }
  if (order.sequence.size() != m) throw CycleError("relation admits no linear extension");
  return order;
}

}  // namespace

TotalOrder build_linearization(const Execution& exec, const AlphaAssignment& alpha) {
  TriangleRelation tri = build_triangle_unchecked(exec, alpha);
  UnionGraph g(exec, tri);
  return kahn_order(exec, g, nullptr);
}

std::vector<TotalOrder> sample_extensions(const Execution& exec, const TriangleRelation& tri,
                                          std::size_t count, std::uint64_t seed) {
  std::vector<TotalOrder> out;
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < count; ++k) {
    UnionGraph g(exec, tri);
    out.push_back(kahn_order(exec, g, &rng));
  }
  return out;
}

bool check_sequential_spec(const Execution& exec, const TotalOrder& order) {
  const std::size_t n = static_cast<std::size_t>(exec.n());
  std::vector<std::uint8_t> seen(exec.size(), 0);
  for (EventIdx e : order.sequence) {
    if (e >= exec.size() || seen[e]) return false;
    seen[e] = 1;
  }
  for (EventIdx e = 0; e < exec.size(); ++e)
    if (exec.event(e).complete() && !seen[e]) return false;
  if (order.sequence.size() < n) return false;
  for (std::size_t p = 0; p < n; ++p)
    if (!exec.event(order.sequence[p]).initial) return false;

  for (std::size_t q = 0; q < order.sequence.size(); ++q)
    for (std::size_t p = 0; p < q; ++p)
      if (exec.precedes_idx(order.sequence[q], order.sequence[p])) return false;

  std::vector<Value> regs(n, 0);
  for (EventIdx e : order.sequence) {
    const auto& ev = exec.event(e);
    if (ev.kind == EventKind::Update) {
      regs[static_cast<std::size_t>(ev.pid)] = ev.arg.value_or(0);
    } else if (ev.ret) {
      for (std::size_t i = 0; i < n; ++i)
        if ((*ev.ret)[i] != regs[i]) return false;
    }
  }
  return true;
}

std::string serialize_order(const Execution& exec, const TotalOrder& order) {
  std::ostringstream out;
  for (EventIdx e : order.sequence) out << "LIN " << exec.event(e).id << '\n';
  return out.str();
}

}  // namespace snapcheck
