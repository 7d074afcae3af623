#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "snapcheck/trace.hpp"

namespace testsupport {

inline std::string data_path(const std::string& name) {
  return std::string(SNAPCHECK_DATA_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline snapcheck::Execution load_trace(const std::string& name) {
  return snapcheck::parse_trace(slurp(data_path(name)));
}

inline snapcheck::HighLevelEvent make_update(int pid, std::int64_t start, std::int64_t end,
                                             snapcheck::Value arg) {
  snapcheck::HighLevelEvent ev;
  ev.pid = pid;
  ev.kind = snapcheck::EventKind::Update;
  ev.start = start;
  ev.end = end;
  ev.arg = arg;
  return ev;
}

inline snapcheck::HighLevelEvent make_scan(int pid, std::int64_t start, std::int64_t end,
                                           std::vector<snapcheck::Value> ret) {
  snapcheck::HighLevelEvent ev;
  ev.pid = pid;
  ev.kind = snapcheck::EventKind::Scan;
  ev.start = start;
  ev.end = end;
  if (end != snapcheck::kPendingEnd) ev.ret = std::move(ret);
  return ev;
}

}  // namespace testsupport
