#include "snapcheck/trace.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace snapcheck {

Execution Execution::build(int n, std::vector<HighLevelEvent> ops, Value initial_value) {
  Execution exec;
  exec.n_ = n;
  exec.initial_value_ = initial_value;
  exec.events_.reserve(static_cast<std::size_t>(n) + ops.size());
  for (int i = 0; i < n; ++i) {
    HighLevelEvent init;
    init.id = "i" + std::to_string(i);
    init.pid = i;
    init.kind = EventKind::Update;
    init.start = -2 * static_cast<std::int64_t>(n) + 2 * i;
    init.end = init.start + 1;
    init.arg = initial_value;
    init.initial = true;
    exec.events_.push_back(std::move(init));
  }
  std::stable_sort(ops.begin(), ops.end(),
                   [](const HighLevelEvent& a, const HighLevelEvent& b) { return a.start < b.start; });
  std::vector<int> rank_u(static_cast<std::size_t>(n), 0), rank_s(static_cast<std::size_t>(n), 0);
  for (auto& e : ops) {
    e.initial = false;
    if (e.pid >= 0 && e.pid < n) {
      int& rank = e.kind == EventKind::Update ? rank_u[static_cast<std::size_t>(e.pid)]
                                              : rank_s[static_cast<std::size_t>(e.pid)];
      ++rank;
      e.id = "p" + std::to_string(e.pid) + (e.kind == EventKind::Update ? "u" : "s") +
             std::to_string(rank);
    } else {
      e.id = "x" + std::to_string(rank_u[0] + rank_s[0]);  // invalid pid; validate() reports it
    }
    exec.events_.push_back(std::move(e));
  }
  exec.updates_by_pid_.assign(static_cast<std::size_t>(n), {});
  for (EventIdx e = 0; e < exec.events_.size(); ++e) {
    const auto& ev = exec.events_[e];
    if (ev.pid < 0 || ev.pid >= n) continue;
    if (ev.kind == EventKind::Update) exec.updates_by_pid_[static_cast<std::size_t>(ev.pid)].push_back(e);
    if (ev.kind == EventKind::Scan && ev.complete()) exec.complete_scans_.push_back(e);
  }
  std::sort(exec.complete_scans_.begin(), exec.complete_scans_.end(), [&](EventIdx a, EventIdx b) {
    const auto& ea = exec.events_[a];
    const auto& eb = exec.events_[b];
    return ea.start != eb.start ? ea.start < eb.start : ea.pid < eb.pid;
  });
  return exec;
}

std::vector<EventIdx> Execution::complete_events() const {
  std::vector<EventIdx> out;
  for (EventIdx e = 0; e < events_.size(); ++e)
    if (events_[e].complete()) out.push_back(e);
  return out;
}

std::optional<EventIdx> Execution::find(std::string_view id) const {
  for (EventIdx e = 0; e < events_.size(); ++e)
    if (events_[e].id == id) return e;
  return std::nullopt;
}

ValidationReport validate(const Execution& exec) {
  ValidationReport report;
  auto add = [&](const std::string& code, const std::string& message) {
    report.findings.push_back({code, message});
  };
  const auto& events = exec.events();
  const int n = exec.n();

  for (EventIdx e = 0; e < events.size(); ++e) {
    const auto& ev = events[e];
    if (ev.pid < 0 || ev.pid >= n) {
      add("pid", "event " + ev.id + " names process " + std::to_string(ev.pid) +
                     " outside 0.." + std::to_string(n - 1));
      continue;
    }
    if (ev.complete() && ev.start >= ev.end)
      add("interval", "event " + ev.id + " has start >= end");
    if (!ev.initial && ev.start < 0)
      add("negative", "event " + ev.id + " has a negative timestamp");
    if (ev.kind == EventKind::Update) {
      if (!ev.arg) add("arg", "update " + ev.id + " is missing its argument");
      if (ev.ret) add("ret", "update " + ev.id + " carries a scan return");
    } else {
      if (ev.arg) add("arg", "scan " + ev.id + " carries an update argument");
      if (ev.complete() && !ev.ret)
        add("ret", "complete scan " + ev.id + " is missing its return");
      if (ev.pending() && ev.ret)
        add("ret", "pending scan " + ev.id + " carries a return");
      if (ev.ret && ev.ret->size() != static_cast<std::size_t>(n))
        add("arity", "scan " + ev.id + " returns " + std::to_string(ev.ret->size()) +
                         " values, expected " + std::to_string(n));
    }
  }

  // Per-process: no two events overlap, and a pending event is the last one.
  for (int pid = 0; pid < n; ++pid) {
    std::vector<EventIdx> own;
    for (EventIdx e = 0; e < events.size(); ++e)
      if (events[e].pid == pid) own.push_back(e);
    std::sort(own.begin(), own.end(),
              [&](EventIdx a, EventIdx b) { return events[a].start < events[b].start; });
    for (std::size_t k = 0; k + 1 < own.size(); ++k) {
      const auto& cur = events[own[k]];
      const auto& nxt = events[own[k + 1]];
      if (cur.pending())
        add("pending", "process " + std::to_string(pid) + " has events after pending " + cur.id);
      else if (cur.end >= nxt.start)
        add("overlap", "events " + cur.id + " and " + nxt.id + " of process " +
                           std::to_string(pid) + " overlap");
    }
  }

  std::size_t initials = 0;
  for (const auto& ev : events)
    if (ev.initial) ++initials;
  if (initials != static_cast<std::size_t>(n))
    add("initials", "expected " + std::to_string(n) + " initial updates, found " +
                        std::to_string(initials));

  std::map<std::int64_t, std::string> boundaries;
  for (const auto& ev : events) {
    auto claim = [&](std::int64_t t) {
      auto [it, inserted] = boundaries.emplace(t, ev.id);
      if (!inserted)
        add("boundary", "events " + it->second + " and " + ev.id + " share timestamp " +
                            std::to_string(t));
    };
    claim(ev.start);
    if (ev.complete()) claim(ev.end);
  }
  return report;
}

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
T parse_int(std::string_view tok, int line, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(tok) + "'");
  return value;
}

}  // namespace

Execution parse_trace(std::string_view text) {
  std::optional<int> n;
  Value initial_value = 0;
  std::vector<HighLevelEvent> ops;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;

    if (!n) {
      auto toks = split_ws(line);
      if (toks.empty() || !toks[0].starts_with("n="))
        throw ParseError(line_no, "expected header 'n=<int>'");
      n = parse_int<int>(toks[0].substr(2), line_no, "process count");
      if (*n <= 0) throw ParseError(line_no, "process count must be positive");
      for (std::size_t k = 1; k < toks.size(); ++k) {
        if (toks[k].starts_with("init="))
          initial_value = parse_int<Value>(toks[k].substr(5), line_no, "initial value");
        else
          throw ParseError(line_no, "unexpected header token '" + std::string(toks[k]) + "'");
      }
      continue;
    }

    auto toks = split_ws(line);
    if (toks.size() < 4) throw ParseError(line_no, "expected '<pid> <kind> <start> <end|pending>'");
    HighLevelEvent ev;
    ev.pid = parse_int<int>(toks[0], line_no, "pid");
    if (toks[1] == "update")
      ev.kind = EventKind::Update;
    else if (toks[1] == "scan")
      ev.kind = EventKind::Scan;
    else
      throw ParseError(line_no, "unknown kind '" + std::string(toks[1]) + "'");
    ev.start = parse_int<std::int64_t>(toks[2], line_no, "start");
    ev.end = toks[3] == "pending" ? kPendingEnd : parse_int<std::int64_t>(toks[3], line_no, "end");
    for (std::size_t k = 4; k < toks.size(); ++k) {
      if (toks[k].starts_with("arg=")) {
        ev.arg = parse_int<Value>(toks[k].substr(4), line_no, "argument");
      } else if (toks[k].starts_with("ret=")) {
        std::vector<Value> values;
        std::string_view rest = toks[k].substr(4);
        while (!rest.empty()) {
          std::size_t comma = rest.find(',');
          values.push_back(parse_int<Value>(rest.substr(0, comma), line_no, "return value"));
          rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        ev.ret = std::move(values);
      } else {
        throw ParseError(line_no, "unexpected token '" + std::string(toks[k]) + "'");
      }
    }
    ops.push_back(std::move(ev));
  }
  if (!n) throw ParseError(line_no, "missing header 'n=<int>'");
  return Execution::build(*n, std::move(ops), initial_value);
}

std::string serialize_trace(const Execution& exec) {
  std::ostringstream out;
  out << "n=" << exec.n();
  if (exec.initial_value() != 0) out << " init=" << exec.initial_value();
  out << '\n';
  for (const auto& ev : exec.events()) {
    if (ev.initial) continue;
    out << ev.pid << ' ' << (ev.kind == EventKind::Update ? "update" : "scan") << ' ' << ev.start
        << ' ';
    if (ev.pending())
      out << "pending";
    else
      out << ev.end;
    if (ev.arg) out << " arg=" << *ev.arg;
    if (ev.ret) {
      out << " ret=";
      for (std::size_t i = 0; i < ev.ret->size(); ++i) {
        if (i) out << ',';
        out << (*ev.ret)[i];
      }
    }
    out << '\n';
  }
  return out.str();
}

bool same_events(const Execution& a, const Execution& b) {
  if (a.n() != b.n() || a.size() != b.size() || a.initial_value() != b.initial_value()) return false;
  for (EventIdx e = 0; e < a.size(); ++e) {
    const auto& ea = a.event(e);
    const auto& eb = b.event(e);
    if (ea.id != eb.id || ea.pid != eb.pid || ea.kind != eb.kind || ea.start != eb.start ||
        ea.end != eb.end || ea.arg != eb.arg || ea.ret != eb.ret || ea.initial != eb.initial)
      return false;
  }
  return true;
}

}  // namespace snapcheck
