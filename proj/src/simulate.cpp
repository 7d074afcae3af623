#include "snapcheck/simulate.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace snapcheck {

namespace {

std::vector<Value> values_of(const std::vector<RegisterCell>& cells) {
  std::vector<Value> out;
  out.reserve(cells.size());
  for (const auto& c : cells) out.push_back(c.value);
  return out;
}

StepResult step_two_phase_update(OpProgress& op, StepContext ctx) {
  if (op.phase == 0) {
    ++op.phase;
    return {};
  }
  ctx.write(op.op.arg);
  StepResult result;
  result.done = true;
  return result;
}

class AtomicMockModel final : public AlgorithmModel {
 public:
  std::string_view name() const override { return "AtomicMock"; }
  std::string_view description() const override {
    return "scan reads every segment in one atomic action";
  }
  StepResult step(OpProgress& op, StepContext ctx, int) const override {
    if (op.op.kind == EventKind::Update) return step_two_phase_update(op, ctx);
    for (std::size_t k = 0; k < ctx.cell_count(); ++k) op.collected[k] = ctx.read(k);
    return {.done = true, .ret = values_of(op.collected)};
  }
};

class SingleCollectModel final : public AlgorithmModel {
 public:
  std::string_view name() const override { return "SingleCollect"; }
  std::string_view description() const override {
    return "scan reads the segments one at a time, once each";
  }
  StepResult step(OpProgress& op, StepContext ctx, int) const override {
    if (op.op.kind == EventKind::Update) return step_two_phase_update(op, ctx);
    std::size_t k = op.phase++;
    op.collected[k] = ctx.read(k);
    if (k + 1 < ctx.cell_count()) return {};
    return {.done = true, .ret = values_of(op.collected)};
  }
};

class DoubleCollectSeqModel final : public AlgorithmModel {
 public:
  std::string_view name() const override { return "DoubleCollectSeq"; }
  std::string_view description() const override {
    return "scan collects repeatedly until two consecutive collects agree";
  }
  StepResult step(OpProgress& op, StepContext ctx, int) const override {
    if (op.op.kind == EventKind::Update) return step_two_phase_update(op, ctx);
    std::size_t k = op.phase++ % ctx.cell_count();
    op.collected[k] = ctx.read(k);
    if (k + 1 < ctx.cell_count()) return {};
    if (op.have_previous && op.previous == op.collected)
      return {.done = true, .ret = values_of(op.collected)};
    op.previous = op.collected;
    op.have_previous = true;
    return {};
  }
};

class ParityQuirkModel final : public AlgorithmModel {
 public:
  std::string_view name() const override { return "ParityQuirk"; }
  std::string_view description() const override {
    return "single collect that garbles its result on even nonzero segment 0";
  }
  StepResult step(OpProgress& op, StepContext ctx, int) const override {
    if (op.op.kind == EventKind::Update) return step_two_phase_update(op, ctx);
    std::size_t k = op.phase++;
    op.collected[k] = ctx.read(k);
    if (k + 1 < ctx.cell_count()) return {};
    std::vector<Value> ret = values_of(op.collected);
    Value head = ret[0];
    if (head != 0 && head % 2 == 0) std::fill(ret.begin(), ret.end(), head);
    return {.done = true, .ret = std::move(ret)};
  }
};

}  // namespace

const std::vector<const AlgorithmModel*>& builtin_models() {
  static const AtomicMockModel atomic_mock;
  static const SingleCollectModel single_collect;
  static const DoubleCollectSeqModel double_collect;
  static const ParityQuirkModel parity_quirk;
  static const std::vector<const AlgorithmModel*> models = {&atomic_mock, &single_collect,
                                                            &double_collect, &parity_quirk};
  return models;
}

const AlgorithmModel* find_model(std::string_view name) {
  for (const AlgorithmModel* m : builtin_models())
    if (m->name() == name) return m;
  return nullptr;
}

SimEngine::SimEngine(const AlgorithmModel& model, OpScript scripts, int n, Value initial_value)
    : model_(&model), scripts_(std::move(scripts)), n_(n), initial_value_(initial_value) {
  if (n_ <= 0) throw std::invalid_argument("process count must be positive");
  if (scripts_.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("script count does not match process count");
  cells_.assign(static_cast<std::size_t>(n_), RegisterCell{.seq = 0, .value = initial_value_});
  procs_.resize(static_cast<std::size_t>(n_));
}

bool SimEngine::can_step(int pid) const {
  if (pid < 0 || pid >= n_) return false;
  const auto& ps = procs_[static_cast<std::size_t>(pid)];
  return ps.active.has_value() || ps.next_op < scripts_[static_cast<std::size_t>(pid)].size();
}

void SimEngine::step(int pid) {
  assert(can_step(pid));
  auto& ps = procs_[static_cast<std::size_t>(pid)];
  if (!ps.active) {
    ps.active.emplace();
    ps.active->op = scripts_[static_cast<std::size_t>(pid)][ps.next_op];
    ps.active->collected.assign(static_cast<std::size_t>(n_), RegisterCell{});
    ps.first_action = actions_;
  }
  StepResult result = model_->step(*ps.active, StepContext(cells_, pid), pid);
  std::size_t current = actions_++;
  if (!result.done) return;
  HighLevelEvent ev;
  ev.pid = pid;
  ev.kind = ps.active->op.kind;
  ev.start = 2 * static_cast<std::int64_t>(ps.first_action);
  ev.end = 2 * static_cast<std::int64_t>(current) + 1;
  if (ev.kind == EventKind::Update)
    ev.arg = ps.active->op.arg;
  else
    ev.ret = std::move(result.ret);
  events_.push_back(std::move(ev));
  ps.active.reset();
  ++ps.next_op;
}

bool SimEngine::done() const {
  for (int pid = 0; pid < n_; ++pid)
    if (can_step(pid)) return false;
  return true;
}

Execution SimEngine::finalize() const {
  std::vector<HighLevelEvent> ops = events_;
  for (int pid = 0; pid < n_; ++pid) {
    const auto& ps = procs_[static_cast<std::size_t>(pid)];
    if (!ps.active) continue;
    HighLevelEvent ev;
    ev.pid = pid;
    ev.kind = ps.active->op.kind;
    ev.start = 2 * static_cast<std::int64_t>(ps.first_action);
    ev.end = kPendingEnd;
    if (ev.kind == EventKind::Update) ev.arg = ps.active->op.arg;
    ops.push_back(std::move(ev));
  }
  return Execution::build(n_, std::move(ops), initial_value_);
}

RunOutcome run(const AlgorithmModel& model, const Schedule& schedule, const OpScript& scripts,
               int n, Value initial_value) {
  for (int pid : schedule.steps)
    if (pid < 0 || pid >= n) throw std::invalid_argument("schedule names an unknown process");
  SimEngine engine(model, scripts, n, initial_value);
  RunOutcome outcome;
  outcome.noop.reserve(schedule.steps.size());
  for (int pid : schedule.steps) {
    if (engine.can_step(pid)) {
      engine.step(pid);
      outcome.noop.push_back(0);
    } else {
      outcome.noop.push_back(1);
    }
  }
  outcome.execution = engine.finalize();
  return outcome;
}

namespace {

bool same_skeleton(const Execution& a, const Execution& b) {
  if (a.n() != b.n() || a.size() != b.size()) return false;
  for (EventIdx e = 0; e < a.size(); ++e) {
    const auto& x = a.event(e);
    const auto& y = b.event(e);
    if (x.pid != y.pid || x.kind != y.kind || x.start != y.start || x.end != y.end) return false;
  }
  return true;
}

void require_similar_scripts(const OpScript& base, const OpScript& variant) {
  if (variant.size() != base.size())
    throw std::invalid_argument("variant has a different process count");
  for (std::size_t pid = 0; pid < base.size(); ++pid) {
    if (variant[pid].size() != base[pid].size())
      throw std::invalid_argument("variant has a different script length");
    for (std::size_t k = 0; k < base[pid].size(); ++k)
      if (variant[pid][k].kind != base[pid][k].kind)
        throw std::invalid_argument("variant changes an operation kind");
  }
}

}  // namespace

bool probe_schedule_based(const AlgorithmModel& model, const Schedule& schedule,
                          const OpScript& scripts, const std::vector<SimilarityVariant>& variants,
                          int n, Value initial_value) {
  std::vector<Execution> runs;
  runs.push_back(run(model, schedule, scripts, n, initial_value).execution);
  for (const auto& variant : variants) {
    require_similar_scripts(scripts, variant.scripts);
    runs.push_back(run(model, schedule, variant.scripts, n, initial_value).execution);
  }
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (!same_skeleton(runs[0], runs[r])) return false;

  const Execution& base = runs[0];
  for (EventIdx scan : base.complete_scans()) {
    for (int i = 0; i < n; ++i) {
      std::size_t sources = base.updates_of(i).size();
      bool found = false;
      for (std::size_t u = 0; u < sources && !found; ++u) {
        bool matches_everywhere = true;
        for (const Execution& exec : runs) {
          Value written = exec.event(exec.updates_of(i)[u]).arg.value_or(0);
          if (exec.event(scan).ret->at(static_cast<std::size_t>(i)) != written) {
            matches_everywhere = false;
            break;
          }
        }
        found = matches_everywhere;
      }
      if (!found) return false;
    }
  }
  return true;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    std::size_t begin = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
    if (pos > begin) out.push_back(line.substr(begin, pos - begin));
  }
  return out;
}

template <typename T>
T parse_num(std::string_view text, int line, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ParseError(line, std::string("bad ") + what + ": '" + std::string(text) + "'");
  return value;
}

OpRequest parse_op(std::string_view token, int line) {
  if (token == "scan") return {.kind = EventKind::Scan};
  constexpr std::string_view prefix = "update(";
  if (token.substr(0, prefix.size()) == prefix && token.back() == ')') {
    std::string_view inner = token.substr(prefix.size(), token.size() - prefix.size() - 1);
    return {.kind = EventKind::Update, .arg = parse_num<Value>(inner, line, "update argument")};
  }
  throw ParseError(line, "unknown operation '" + std::string(token) + "'");
}

}  // namespace

RunSpec parse_run_file(std::string_view text) {
  RunSpec spec;
  bool saw_header = false;
  bool saw_steps = false;
  std::vector<std::uint8_t> saw_script;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    auto tokens = split_ws(line);
    if (tokens.empty()) {
      if (pos > text.size()) break;
      continue;
    }

    if (!saw_header) {
      if (tokens[0].substr(0, 2) != "n=") throw ParseError(line_no, "expected 'n=<count>' header");
      spec.n = parse_num<int>(tokens[0].substr(2), line_no, "process count");
      if (spec.n <= 0) throw ParseError(line_no, "process count must be positive");
      for (std::size_t t = 1; t < tokens.size(); ++t) {
        if (tokens[t].substr(0, 5) == "init=")
          spec.initial_value = parse_num<Value>(tokens[t].substr(5), line_no, "initial value");
        else
          throw ParseError(line_no, "unknown header field '" + std::string(tokens[t]) + "'");
      }
      saw_header = true;
      spec.scripts.assign(static_cast<std::size_t>(spec.n), {});
      saw_script.assign(static_cast<std::size_t>(spec.n), 0);
      continue;
    }

    if (tokens[0].substr(0, 6) == "steps=") {
      if (saw_steps) throw ParseError(line_no, "duplicate steps line");
      saw_steps = true;
      std::vector<std::string_view> pids(tokens.begin() + 1, tokens.end());
      if (tokens[0].size() > 6) pids.insert(pids.begin(), tokens[0].substr(6));
      for (std::string_view p : pids) {
        int pid = parse_num<int>(p, line_no, "scheduled process");
        if (pid < 0 || pid >= spec.n) throw ParseError(line_no, "scheduled process out of range");
        spec.schedule.steps.push_back(pid);
      }
      continue;
    }

    if (tokens[0] == "script") {
      if (tokens.size() < 2) throw ParseError(line_no, "script line needs a process id");
      int pid = parse_num<int>(tokens[1], line_no, "script process");
      if (pid < 0 || pid >= spec.n) throw ParseError(line_no, "script process out of range");
      if (saw_script[static_cast<std::size_t>(pid)])
        throw ParseError(line_no, "duplicate script for process " + std::to_string(pid));
      saw_script[static_cast<std::size_t>(pid)] = 1;
      for (std::size_t t = 2; t < tokens.size(); ++t)
        spec.scripts[static_cast<std::size_t>(pid)].push_back(parse_op(tokens[t], line_no));
      continue;
    }

    throw ParseError(line_no, "unknown directive '" + std::string(tokens[0]) + "'");
  }
  if (!saw_header) throw ParseError(line_no, "missing 'n=<count>' header");
  return spec;
}

std::string format_script(const ProcessScript& script) {
  std::ostringstream out;
  for (std::size_t k = 0; k < script.size(); ++k) {
    if (k > 0) out << ' ';
    if (script[k].kind == EventKind::Scan)
      out << "scan";
    else
      out << "update(" << script[k].arg << ')';
  }
  return out.str();
}

}  // namespace snapcheck
