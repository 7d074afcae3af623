#include "snapcheck/alpha.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace snapcheck {

void AlphaAssignment::set(EventIdx scan, int i, EventIdx update) {
  auto& row = map_[scan];
  row.resize(static_cast<std::size_t>(n_));
  row[static_cast<std::size_t>(i)] = update;
}

void AlphaAssignment::unset(EventIdx scan, int i) {
  auto it = map_.find(scan);
  if (it == map_.end()) return;
  it->second[static_cast<std::size_t>(i)] = std::nullopt;
}

std::optional<EventIdx> AlphaAssignment::get(EventIdx scan, int i) const {
  auto it = map_.find(scan);
  if (it == map_.end() || static_cast<std::size_t>(i) >= it->second.size()) return std::nullopt;
  return it->second[static_cast<std::size_t>(i)];
}

EventIdx AlphaAssignment::at(EventIdx scan, int i) const {
  auto u = get(scan, i);
  if (!u) throw std::invalid_argument("alpha assignment is missing scan index " + std::to_string(i));
  return *u;
}

bool AlphaAssignment::total_on(const Execution& exec) const {
  for (EventIdx s : exec.complete_scans())
    for (int i = 0; i < exec.n(); ++i)
      if (!get(s, i)) return false;
  return true;
}

std::vector<EventIdx> AlphaAssignment::scans() const {
  std::vector<EventIdx> out;
  out.reserve(map_.size());
  for (const auto& [scan, row] : map_) {
    bool any = false;
    for (const auto& u : row) any = any || u.has_value();
    if (any) out.push_back(scan);
  }
  return out;
}

namespace {

Value update_value(const HighLevelEvent& e) { return e.arg.value_or(0); }

void require_valid_alpha(const Execution& exec, const AlphaAssignment& alpha) {
  if (alpha.n() != exec.n())
    throw std::invalid_argument("alpha assignment built for a different process count");
  for (EventIdx s : alpha.scans()) {
    if (s >= exec.size())
      throw std::invalid_argument("alpha references an event outside the execution");
    const auto& ev = exec.event(s);
    if (ev.kind != EventKind::Scan || ev.pending())
      throw std::invalid_argument("alpha assigns sources to " + ev.id + ", which is not a complete scan");
  }
  for (EventIdx s : exec.complete_scans()) {
    for (int i = 0; i < exec.n(); ++i) {
      auto u = alpha.get(s, i);
      if (!u)
        throw std::invalid_argument("alpha is not total: scan " + exec.event(s).id +
                                    " has no source for index " + std::to_string(i));
      if (*u >= exec.size())
        throw std::invalid_argument("alpha references an event outside the execution");
      const auto& uev = exec.event(*u);
      if (uev.kind != EventKind::Update || uev.pid != i)
        throw std::invalid_argument("alpha maps scan " + exec.event(s).id + " index " +
                                    std::to_string(i) + " to " + uev.id +
                                    ", which is not a process-" + std::to_string(i) + " update");
    }
  }
}

}  // namespace

bool alpha_less(const Execution& exec, const AlphaAssignment& alpha, EventIdx s1, EventIdx s2) {
  for (int i = 0; i < exec.n(); ++i) {
    auto a = alpha.get(s1, i);
    auto b = alpha.get(s2, i);
    if (a && b && exec.precedes_idx(*a, *b)) return true;
  }
  return false;
}

std::vector<PropertyViolation> check_properties(const Execution& exec,
                                                const AlphaAssignment& alpha) {
  require_valid_alpha(exec, alpha);
  std::vector<PropertyViolation> out;
  const auto& scans = exec.complete_scans();
  const int n = exec.n();

  for (EventIdx s : scans) {
    const auto& sev = exec.event(s);
    for (int i = 0; i < n; ++i) {
      EventIdx a = alpha.at(s, i);
      const auto& aev = exec.event(a);
      if (!sev.ret || (*sev.ret)[static_cast<std::size_t>(i)] != update_value(aev))
        out.push_back({1, s, std::nullopt, i, std::nullopt, a});
      if (precedes(sev, aev)) out.push_back({2, s, std::nullopt, i, std::nullopt, a});
      for (EventIdx u : exec.updates_of(i))
        if (exec.precedes_idx(a, u) && exec.precedes_idx(u, s))
          out.push_back({3, s, std::nullopt, i, std::nullopt, u});
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        EventIdx b = alpha.at(s, j);
        for (EventIdx u : exec.updates_of(i))
          if (exec.precedes_idx(a, u) && exec.precedes_idx(u, b))
            out.push_back({5, s, std::nullopt, i, j, u});
      }
    }
  }

  for (std::size_t k1 = 0; k1 < scans.size(); ++k1) {
    for (std::size_t k2 = 0; k2 < scans.size(); ++k2) {
      if (k1 == k2) continue;
      EventIdx s1 = scans[k1];
      EventIdx s2 = scans[k2];
      if (exec.precedes_idx(s1, s2))
        for (int i = 0; i < n; ++i) {
          EventIdx a = alpha.at(s1, i);
          EventIdx b = alpha.at(s2, i);
          if (!equals_or_precedes(a, b, exec.event(a), exec.event(b)))
            out.push_back({4, s1, s2, i, std::nullopt, std::nullopt});
        }
      if (k1 < k2 && alpha_less(exec, alpha, s1, s2) && alpha_less(exec, alpha, s2, s1)) {
        int wi = 0, wj = 0;
        for (int i = 0; i < n; ++i)
          if (exec.precedes_idx(alpha.at(s1, i), alpha.at(s2, i))) {
            wi = i;
            break;
          }
        for (int j = 0; j < n; ++j)
          if (exec.precedes_idx(alpha.at(s2, j), alpha.at(s1, j))) {
            wj = j;
            break;
          }
        out.push_back({6, s1, s2, wi, wj, std::nullopt});
      }
    }
  }

  auto key = [&](const PropertyViolation& v) {
    return std::tuple(v.property, exec.event(v.scan).start,
                      v.scan2 ? exec.event(*v.scan2).start : std::numeric_limits<std::int64_t>::min(),
                      v.i, v.j.value_or(-1),
                      v.update ? exec.event(*v.update).start : std::numeric_limits<std::int64_t>::min());
  };
  std::stable_sort(out.begin(), out.end(),
                   [&](const auto& a, const auto& b) { return key(a) < key(b); });
  return out;
}

bool recheck_violation(const Execution& exec, const AlphaAssignment& alpha,
                       const PropertyViolation& v) {
  auto source = [&](EventIdx scan, int i) { return v.update && v.property <= 2 ? *v.update : alpha.at(scan, i); };
  switch (v.property) {
    case 1: {
      const auto& sev = exec.event(v.scan);
      return !sev.ret ||
             (*sev.ret)[static_cast<std::size_t>(v.i)] != update_value(exec.event(source(v.scan, v.i)));
    }
    case 2:
      return precedes(exec.event(v.scan), exec.event(source(v.scan, v.i)));
    case 3:
      return exec.precedes_idx(alpha.at(v.scan, v.i), *v.update) &&
             exec.precedes_idx(*v.update, v.scan);
    case 4: {
      EventIdx a = alpha.at(v.scan, v.i);
      EventIdx b = alpha.at(*v.scan2, v.i);
      return exec.precedes_idx(v.scan, *v.scan2) &&
             !equals_or_precedes(a, b, exec.event(a), exec.event(b));
    }
    case 5:
      return exec.precedes_idx(alpha.at(v.scan, v.i), *v.update) &&
             exec.precedes_idx(*v.update, alpha.at(v.scan, *v.j));
    case 6:
      return exec.precedes_idx(alpha.at(v.scan, v.i), alpha.at(*v.scan2, v.i)) &&
             exec.precedes_idx(alpha.at(*v.scan2, *v.j), alpha.at(v.scan, *v.j));
    default:
      return false;
  }
}

namespace {

/// Shared backtracking core. Variables are (scan, index) pairs in
/// (start, pid, index) order; property 1 prunes the candidate lists up front,
/// properties 2 and 3 are static per candidate, and properties 4, 5, 6 are
/// enforced incrementally against the partial assignment.
class AlphaSearch {
 public:
  explicit AlphaSearch(const Execution& exec) : exec_(exec), scans_(exec.complete_scans()) {}

  void run(const std::function<bool(const AlphaAssignment&)>& emit) {
    const int n = exec_.n();
    const std::size_t vars = scans_.size() * static_cast<std::size_t>(n);
    candidates_.assign(vars, {});
    for (std::size_t k = 0; k < scans_.size(); ++k) {
      const auto& sev = exec_.event(scans_[k]);
      for (int i = 0; i < n; ++i) {
        if (!sev.ret) return;  // nothing can match an absent return
        Value want = (*sev.ret)[static_cast<std::size_t>(i)];
        auto& list = candidates_[k * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
        for (EventIdx u : exec_.updates_of(i)) {
          const auto& uev = exec_.event(u);
          if (update_value(uev) != want) continue;
          if (precedes(sev, uev)) continue;  // property 2
          bool shadowed = false;             // property 3
          for (EventIdx w : exec_.updates_of(i))
            if (exec_.precedes_idx(u, w) && exec_.precedes_idx(w, scans_[k])) {
              shadowed = true;
              break;
            }
          if (!shadowed) list.push_back(u);
        }
        if (list.empty()) return;  // fail fast: this pair can never be assigned
      }
    }
    chosen_.assign(vars, 0);
    less_.assign(scans_.size() * scans_.size(), 0);
    emit_ = &emit;
    stop_ = false;
    descend(0);
  }

 private:
  bool compatible(std::size_t k, int i, EventIdx u) const {
    const int n = exec_.n();
    // Property 4 against earlier scans (scan order is start-ascending, so
    // only the earlier-precedes-later direction can arise).
    for (std::size_t k2 = 0; k2 < k; ++k2)
      if (exec_.precedes_idx(scans_[k2], scans_[k])) {
        EventIdx prev = chosen_[k2 * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
        if (!equals_or_precedes(prev, u, exec_.event(prev), exec_.event(u))) return false;
      }
    // Property 5 against indices already assigned on this scan, in both roles.
    for (int j = 0; j < i; ++j) {
      EventIdx other = chosen_[k * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
      for (EventIdx w : exec_.updates_of(j))
        if (exec_.precedes_idx(other, w) && exec_.precedes_idx(w, u)) return false;
      for (EventIdx w : exec_.updates_of(i))
        if (exec_.precedes_idx(u, w) && exec_.precedes_idx(w, other)) return false;
    }
    // Property 6: adding an alpha-order edge must not close a 2-cycle.
    for (std::size_t k2 = 0; k2 < k; ++k2) {
      EventIdx prev = chosen_[k2 * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
      if (exec_.precedes_idx(prev, u) && less_[k * scans_.size() + k2] > 0) return false;
      if (exec_.precedes_idx(u, prev) && less_[k2 * scans_.size() + k] > 0) return false;
    }
    return true;
  }

  void descend(std::size_t v) {
    if (stop_) return;
    const int n = exec_.n();
    if (v == candidates_.size()) {
      AlphaAssignment alpha(n);
      for (std::size_t k = 0; k < scans_.size(); ++k)
        for (int i = 0; i < n; ++i)
          alpha.set(scans_[k], i, chosen_[k * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)]);
      if (!(*emit_)(alpha)) stop_ = true;
      return;
    }
    std::size_t k = v / static_cast<std::size_t>(n);
    int i = static_cast<int>(v % static_cast<std::size_t>(n));
    for (EventIdx u : candidates_[v]) {
      if (!compatible(k, i, u)) continue;
      chosen_[v] = u;
      for (std::size_t k2 = 0; k2 < k; ++k2) {
        EventIdx prev = chosen_[k2 * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
        if (exec_.precedes_idx(prev, u)) ++less_[k2 * scans_.size() + k];
        if (exec_.precedes_idx(u, prev)) ++less_[k * scans_.size() + k2];
      }
      descend(v + 1);
      for (std::size_t k2 = 0; k2 < k; ++k2) {
        EventIdx prev = chosen_[k2 * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
        if (exec_.precedes_idx(prev, u)) --less_[k2 * scans_.size() + k];
        if (exec_.precedes_idx(u, prev)) --less_[k * scans_.size() + k2];
      }
      if (stop_) return;
    }
  }

  const Execution& exec_;
  std::vector<EventIdx> scans_;
  std::vector<std::vector<EventIdx>> candidates_;
  std::vector<EventIdx> chosen_;
  std::vector<int> less_;  // count of indices witnessing scans_[a] <_alpha scans_[b]
  const std::function<bool(const AlphaAssignment&)>* emit_ = nullptr;
  bool stop_ = false;
};

}  // namespace

std::optional<AlphaAssignment> search_alpha(const Execution& exec) {
  std::optional<AlphaAssignment> found;
  AlphaSearch search(exec);
  search.run([&](const AlphaAssignment& alpha) {
    found = alpha;
    return false;
  });
  return found;
}

std::vector<AlphaAssignment> enumerate_alphas(const Execution& exec, SearchOptions opts) {
  std::vector<AlphaAssignment> out;
  AlphaSearch search(exec);
  search.run([&](const AlphaAssignment& alpha) {
    out.push_back(alpha);
    return opts.max_results == 0 || out.size() < opts.max_results;
  });
  return out;
}

std::string format_violation(const Execution& exec, const PropertyViolation& v) {
  std::ostringstream out;
  out << 'P' << v.property << " scan=" << exec.event(v.scan).id;
  if (v.scan2) out << " scan2=" << exec.event(*v.scan2).id;
  out << " i=" << v.i;
  if (v.j) out << " j=" << *v.j;
  if (v.update) out << " update=" << exec.event(*v.update).id;
  return out.str();
}

std::string serialize_alpha(const Execution& exec, const AlphaAssignment& alpha) {
  std::ostringstream out;
  for (EventIdx s : exec.complete_scans())
    for (int i = 0; i < exec.n(); ++i)
      if (auto u = alpha.get(s, i))
        out << "alpha " << i << ' ' << exec.event(s).id << ' ' << exec.event(*u).id << '\n';
  return out.str();
}

AlphaAssignment parse_alpha(const Execution& exec, std::string_view text) {
  AlphaAssignment alpha(exec.n());
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line(text.substr(pos, eol == std::string_view::npos ? eol : eol - pos));
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream in(line);
    std::string tag, scan_id, update_id;
    int i = 0;
    if (!(in >> tag)) continue;
    if (tag != "alpha" || !(in >> i >> scan_id >> update_id))
      throw ParseError(line_no, "expected 'alpha <i> <scan-id> <update-id>'");
    if (i < 0 || i >= exec.n()) throw ParseError(line_no, "index out of range");
    auto scan = exec.find(scan_id);
    if (!scan) throw ParseError(line_no, "unknown event '" + scan_id + "'");
    auto update = exec.find(update_id);
    if (!update) throw ParseError(line_no, "unknown event '" + update_id + "'");
    alpha.set(*scan, i, *update);
  }
  return alpha;
}

}  // namespace snapcheck
