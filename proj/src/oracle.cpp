#include "snapcheck/oracle.hpp"

#include <algorithm>
#include <unordered_set>

namespace snapcheck {

namespace {

class ExtensionSearch {
 public:
  ExtensionSearch(const Execution& exec, std::vector<EventIdx> domain)
      : exec_(exec), domain_(std::move(domain)) {
    std::sort(domain_.begin(), domain_.end(), [&](EventIdx a, EventIdx b) {
      const auto& ea = exec_.event(a);
      const auto& eb = exec_.event(b);
      return std::pair(ea.start, ea.pid) < std::pair(eb.start, eb.pid);
    });
    preds_.resize(domain_.size());
    for (std::size_t p = 0; p < domain_.size(); ++p)
      for (std::size_t q = 0; q < domain_.size(); ++q)
        if (exec_.precedes_idx(domain_[q], domain_[p])) preds_[p].push_back(q);
    placed_.assign(domain_.size(), 0);
    regs_.assign(static_cast<std::size_t>(exec_.n()), 0);
  }

  std::optional<TotalOrder> run() {
    order_.clear();
    dead_.clear();
    placed_mask_ = 0;
    return descend() ? std::make_optional(TotalOrder{order_}) : std::nullopt;
  }

 private:
  bool descend() {
    if (order_.size() == domain_.size()) return true;
    if (dead_.contains(placed_mask_)) return false;
    for (std::size_t p = 0; p < domain_.size(); ++p) {
      if (placed_[p]) continue;
      bool ready = true;
      for (std::size_t q : preds_[p])
        if (!placed_[q]) {
          ready = false;
          break;
        }
      if (!ready) continue;
      const auto& ev = exec_.event(domain_[p]);
      if (ev.kind == EventKind::Scan && ev.ret) {
        bool match = true;
        for (std::size_t i = 0; i < regs_.size(); ++i)
          if ((*ev.ret)[i] != regs_[i]) {
            match = false;
            break;
          }
        if (!match) continue;  // this scan can never be placed at this view
      }
      Value saved = 0;
      std::size_t wrote = static_cast<std::size_t>(-1);
      if (ev.kind == EventKind::Update) {
        wrote = static_cast<std::size_t>(ev.pid);
        saved = regs_[wrote];
        regs_[wrote] = ev.arg.value_or(0);
      }
      placed_[p] = 1;
      placed_mask_ |= std::uint64_t{1} << p;
      order_.push_back(domain_[p]);
      if (descend()) return true;
      order_.pop_back();
      placed_mask_ &= ~(std::uint64_t{1} << p);
      placed_[p] = 0;
      if (wrote != static_cast<std::size_t>(-1)) regs_[wrote] = saved;
    }
    dead_.insert(placed_mask_);
    return false;
  }

  const Execution& exec_;
  std::vector<EventIdx> domain_;
  std::vector<std::vector<std::size_t>> preds_;
  std::vector<std::uint8_t> placed_;
  std::vector<Value> regs_;
  std::vector<EventIdx> order_;
  std::uint64_t placed_mask_ = 0;
  std::unordered_set<std::uint64_t> dead_;  // placement sets with no completion
};

}  // namespace

std::optional<LinearizationCandidate> oracle_linearizable(const Execution& exec,
                                                          OracleOptions opts) {
  std::size_t real = 0;
  for (const auto& ev : exec.events())
    if (!ev.initial) ++real;
  if (real > opts.max_events)
    throw BoundExceededError("trace has " + std::to_string(real) +
                             " events, oracle bound is " + std::to_string(opts.max_events));

  std::vector<EventIdx> fixed, pending;
  for (EventIdx e = 0; e < exec.size(); ++e) {
    if (exec.event(e).complete())
      fixed.push_back(e);
    else
      pending.push_back(e);
  }

  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pending.size()); ++mask) {
    std::vector<EventIdx> domain = fixed;
    for (std::size_t b = 0; b < pending.size(); ++b)
      if (mask & (std::uint64_t{1} << b)) domain.push_back(pending[b]);
    ExtensionSearch search(exec, domain);
    if (auto order = search.run()) {
      std::sort(domain.begin(), domain.end());
      return LinearizationCandidate{std::move(domain), std::move(*order)};
    }
  }
  return std::nullopt;
}

}  // namespace snapcheck
