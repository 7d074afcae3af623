#include "snapcheck/hunt.hpp"

#include <algorithm>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "snapcheck/alpha.hpp"

namespace snapcheck {

std::vector<ProcessScript> enumerate_kind_scripts(int max_ops) {
  std::vector<ProcessScript> out;
  for (int len = 0; len <= max_ops; ++len) {
    std::vector<std::size_t> shape(static_cast<std::size_t>(len), 0);
    while (true) {
      ProcessScript script;
      script.reserve(shape.size());
      for (std::size_t bit : shape)
        script.push_back({.kind = bit == 0 ? EventKind::Scan : EventKind::Update});
      out.push_back(std::move(script));
      std::size_t k = shape.size();
      while (k > 0 && shape[k - 1] == 1) shape[--k] = 0;
      if (k == 0) break;
      shape[k - 1] = 1;
    }
  }
  return out;
}

namespace {

bool descend_schedules(int n, int max_steps, Schedule& schedule,
                       const std::function<bool(const Schedule&)>& visit) {
  if (!visit(schedule)) return false;
  if (static_cast<int>(schedule.steps.size()) >= max_steps) return true;
  for (int pid = 0; pid < n; ++pid) {
    schedule.steps.push_back(pid);
    if (!descend_schedules(n, max_steps, schedule, visit)) return false;
    schedule.steps.pop_back();
  }
  return true;
}

}  // namespace

void enumerate_schedules(int n, int max_steps, const std::function<bool(const Schedule&)>& visit) {
  if (n <= 0) throw std::invalid_argument("process count must be positive");
  Schedule schedule;
  descend_schedules(n, max_steps, schedule, visit);
}

std::vector<SimpleParams> enumerate_simple_assignments(const OpScript& kinds, int i, int j) {
  auto update_count = [&](int pid) {
    int count = 0;
    for (const OpRequest& op : kinds[static_cast<std::size_t>(pid)])
      if (op.kind == EventKind::Update) ++count;
    return count;
  };
  if (i == j || i < 0 || j < 0 || static_cast<std::size_t>(i) >= kinds.size() ||
      static_cast<std::size_t>(j) >= kinds.size())
    throw std::invalid_argument("simple assignment needs two distinct processes");
  std::vector<SimpleParams> out;
  int ui = update_count(i);
  int uj = update_count(j);
  for (int ri = 0; ri <= ui; ++ri)
    for (int rj = 0; rj <= uj; ++rj)
      out.push_back({.i = i, .j = j, .r_i = ri, .r_j = rj});
  return out;
}

OpScript apply_simple_params(const OpScript& kinds, const SimpleParams& params) {
  OpScript scripts = kinds;
  for (std::size_t pid = 0; pid < scripts.size(); ++pid) {
    int t = 0;
    for (OpRequest& op : scripts[pid]) {
      if (op.kind != EventKind::Update) continue;
      if (static_cast<int>(pid) == params.i)
        op.arg = t < params.r_i ? 0 : 1;
      else if (static_cast<int>(pid) == params.j)
        op.arg = t < params.r_j ? 0 : 1;
      else
        op.arg = 0;
      ++t;
    }
  }
  return scripts;
}

namespace {

using RunVisitor = std::function<bool(const Schedule&, const Execution&)>;

bool descend_runs(const SimEngine& engine, Schedule& schedule, int max_steps,
                  const RunVisitor& visit) {
  if (!visit(schedule, engine.finalize())) return false;
  if (static_cast<int>(schedule.steps.size()) >= max_steps) return true;
  for (int pid = 0; pid < engine.n(); ++pid) {
    if (!engine.can_step(pid)) continue;
    SimEngine next = engine;
    next.step(pid);
    schedule.steps.push_back(pid);
    bool go = descend_runs(next, schedule, max_steps, visit);
    schedule.steps.pop_back();
    if (!go) return false;
  }
  return true;
}

/// Every no-op-free run of the scripts, preorder over schedules.
bool for_each_run(const AlgorithmModel& model, const OpScript& scripts, int n, int max_steps,
                  const RunVisitor& visit) {
  SimEngine engine(model, scripts, n, 0);
  Schedule schedule;
  return descend_runs(engine, schedule, max_steps, visit);
}

bool sweep_combo_simple(const AlgorithmModel& model, const OpScript& kinds,
                        const HuntBounds& bounds,
                        const std::function<bool(const SimpleInstance&)>& visit) {
  for (int i = 0; i < bounds.n; ++i) {
    for (int j = 0; j < bounds.n; ++j) {
      if (j == i) continue;
      for (const SimpleParams& params : enumerate_simple_assignments(kinds, i, j)) {
        OpScript scripts = apply_simple_params(kinds, params);
        bool go = for_each_run(model, scripts, bounds.n, bounds.max_steps,
                               [&](const Schedule& schedule, const Execution& exec) {
                                 return visit({scripts, params, schedule, exec});
                               });
        if (!go) return false;
      }
    }
  }
  return true;
}

std::vector<OpScript> all_kind_combos(int n, int max_ops) {
  std::vector<ProcessScript> per_process = enumerate_kind_scripts(max_ops);
  std::vector<OpScript> out;
  std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
  while (true) {
    OpScript combo;
    combo.reserve(pick.size());
    for (std::size_t idx : pick) combo.push_back(per_process[idx]);
    out.push_back(std::move(combo));
    std::size_t k = pick.size();
    while (k > 0 && pick[k - 1] + 1 == per_process.size()) pick[--k] = 0;
    if (k == 0) break;
    ++pick[k - 1];
  }
  return out;
}

void paranoid_check(const Execution& exec, bool alpha_verdict, const OracleOptions& oracle) {
  if (oracle_linearizable(exec, oracle).has_value() == alpha_verdict) return;
  throw std::logic_error("verdict cross-check failed, checker and oracle disagree on:\n" +
                         serialize_trace(exec));
}

struct ComboOutcome {
  std::uint64_t checked = 0;
  std::optional<SimpleCounterexample> counterexample;
};

ComboOutcome hunt_combo(const AlgorithmModel& model, const OpScript& kinds,
                        const HuntBounds& bounds, const HuntOptions& options) {
  ComboOutcome outcome;
  sweep_combo_simple(model, kinds, bounds, [&](const SimpleInstance& instance) {
    ++outcome.checked;
    bool linearizable = search_alpha(instance.execution).has_value();
    if (options.paranoid) paranoid_check(instance.execution, linearizable, options.oracle);
    if (linearizable) return true;
    outcome.counterexample = {instance.scripts, instance.schedule, instance.params,
                              instance.execution};
    return false;
  });
  return outcome;
}

/// Runs one job per combo stripe; each stripe stops at its own first find, so
/// the merged result (first counterexample in combo order, and the number of
/// runs a sequential sweep would have checked before stopping there) is
/// independent of the job count.
template <typename Work>
std::vector<ComboOutcome> sweep_combos(std::size_t combos, int jobs, const Work& work,
                                       bool stop_at_find) {
  std::vector<ComboOutcome> results(combos);
  int threads = std::max(1, jobs);
  threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads),
                                                   std::max<std::size_t>(combos, 1)));
  if (threads <= 1) {
    for (std::size_t c = 0; c < combos; ++c) {
      results[c] = work(c);
      if (stop_at_find && results[c].counterexample) break;
    }
    return results;
  }
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t c = static_cast<std::size_t>(t); c < combos;
             c += static_cast<std::size_t>(threads)) {
          results[c] = work(c);
          if (stop_at_find && results[c].counterexample) break;
        }
      } catch (...) {
        failures[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& failure : failures)
    if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace

bool for_each_simple_execution(const AlgorithmModel& model, const HuntBounds& bounds,
                               const std::function<bool(const SimpleInstance&)>& visit) {
  for (const OpScript& kinds : all_kind_combos(bounds.n, bounds.max_ops))
    if (!sweep_combo_simple(model, kinds, bounds, visit)) return false;
  return true;
}

HuntReport hunt(const AlgorithmModel& model, const HuntBounds& bounds,
                const HuntOptions& options) {
  HuntReport report;
  report.model = std::string(model.name());
  report.bounds = bounds;
  auto combos = all_kind_combos(bounds.n, bounds.max_ops);
  auto results = sweep_combos(
      combos.size(), options.jobs,
      [&](std::size_t c) { return hunt_combo(model, combos[c], bounds, options); }, true);
  for (std::size_t c = 0; c < results.size(); ++c) {
    report.checked += results[c].checked;
    if (results[c].counterexample) {
      report.counterexample = std::move(results[c].counterexample);
      break;
    }
  }
  return report;
}

namespace {

void append_annotated_counterexample(std::ostringstream& out, const std::string& model,
                                     const OpScript& scripts, const Schedule& schedule,
                                     const SimpleParams* params, const Execution& exec) {
  out << "COUNTEREXAMPLE\n";
  out << "# model=" << model << '\n';
  out << "# schedule=";
  for (std::size_t s = 0; s < schedule.steps.size(); ++s) {
    if (s > 0) out << ',';
    out << schedule.steps[s];
  }
  out << '\n';
  for (std::size_t pid = 0; pid < scripts.size(); ++pid)
    out << "# script " << pid << ": " << format_script(scripts[pid]) << '\n';
  if (params)
    out << "# simple i=" << params->i << " j=" << params->j << " r_i=" << params->r_i
        << " r_j=" << params->r_j << '\n';
  out << serialize_trace(exec);
  out << "NOT_LINEARIZABLE\n";
}

}  // namespace

std::string serialize_hunt_report(const HuntReport& report) {
  std::ostringstream out;
  if (report.clean()) {
    out << "CLEAN count=" << report.checked << '\n';
    return out.str();
  }
  const SimpleCounterexample& cex = *report.counterexample;
  append_annotated_counterexample(out, report.model, cex.scripts, cex.schedule, &cex.params,
                                  cex.execution);
  return out.str();
}

namespace {

struct GeneralComboOutcome {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::optional<GeneralCounterexample> first;
};

GeneralComboOutcome general_combo(const AlgorithmModel& model, const OpScript& kinds,
                                  const std::vector<Value>& domain, const HuntBounds& bounds,
                                  const HuntOptions& options) {
  std::vector<std::pair<std::size_t, std::size_t>> slots;  // (pid, op index)
  for (std::size_t pid = 0; pid < kinds.size(); ++pid)
    for (std::size_t k = 0; k < kinds[pid].size(); ++k)
      if (kinds[pid][k].kind == EventKind::Update) slots.push_back({pid, k});

  GeneralComboOutcome outcome;
  std::vector<std::size_t> pick(slots.size(), 0);
  while (true) {
    OpScript scripts = kinds;
    for (std::size_t s = 0; s < slots.size(); ++s)
      scripts[slots[s].first][slots[s].second].arg = domain[pick[s]];
    for_each_run(model, scripts, bounds.n, bounds.max_steps,
                 [&](const Schedule& schedule, const Execution& exec) {
                   ++outcome.checked;
                   bool linearizable = search_alpha(exec).has_value();
                   if (options.paranoid) paranoid_check(exec, linearizable, options.oracle);
                   if (!linearizable) {
                     ++outcome.violations;
                     if (!outcome.first) outcome.first = {scripts, schedule, exec};
                   }
                   return true;
                 });
    std::size_t k = pick.size();
    while (k > 0 && pick[k - 1] + 1 == domain.size()) pick[--k] = 0;
    if (k == 0) break;
    ++pick[k - 1];
  }
  return outcome;
}

}  // namespace

ReductionReport check_reduction(const AlgorithmModel& model, const std::vector<Value>& domain,
                                const HuntBounds& bounds, const HuntOptions& options) {
  if (domain.empty()) throw std::invalid_argument("value domain must not be empty");
  ReductionReport report;
  report.model = std::string(model.name());
  report.bounds = bounds;
  report.domain = domain;
  auto combos = all_kind_combos(bounds.n, bounds.max_ops);

  std::vector<GeneralComboOutcome> results(combos.size());
  sweep_combos(
      combos.size(), options.jobs,
      [&](std::size_t c) {
        results[c] = general_combo(model, combos[c], domain, bounds, options);
        return ComboOutcome{};
      },
      false);
  for (auto& outcome : results) {
    report.general_checked += outcome.checked;
    report.general_violations += outcome.violations;
    if (!report.general && outcome.first) report.general = std::move(outcome.first);
  }

  report.simple = hunt(model, bounds, options);
  return report;
}

std::string serialize_reduction_report(const ReductionReport& report) {
  std::ostringstream out;
  out << "general count=" << report.general_checked
      << " violations=" << report.general_violations << '\n';
  if (report.general)
    append_annotated_counterexample(out, report.model, report.general->scripts,
                                    report.general->schedule, nullptr, report.general->execution);
  if (report.simple.clean())
    out << "simple CLEAN count=" << report.simple.checked << '\n';
  else
    out << "simple " << serialize_hunt_report(report.simple);
  out << (report.breach() ? "REDUCTION_BREACH" : "REDUCTION_OK") << '\n';
  return out.str();
}

}  // namespace snapcheck
