#include <algorithm>

#include "doctest.h"
#include "snapcheck/simulate.hpp"
#include "snapcheck/trace.hpp"
#include "support.hpp"

using namespace snapcheck;
using testsupport::make_scan;
using testsupport::make_update;

TEST_CASE("build synthesizes initial updates with the reserved timestamps") {
  Execution exec = Execution::build(
      3, {make_update(1, 0, 1, 7), make_scan(2, 2, 5, {0, 7, 0})}, 0);
  REQUIRE(exec.size() == 5);
  for (int pid = 0; pid < 3; ++pid) {
    const HighLevelEvent& init = exec.event(exec.initial_of(pid));
    CHECK(init.id == "i" + std::to_string(pid));
    CHECK(init.pid == pid);
    CHECK(init.kind == EventKind::Update);
    CHECK(init.initial);
    CHECK(init.start == -6 + 2 * pid);
    CHECK(init.end == -6 + 2 * pid + 1);
    CHECK(init.arg == Value{0});
  }
  CHECK(exec.event(3).id == "p1u1");
  CHECK(exec.event(4).id == "p2s1");
}

TEST_CASE("build carries the initial value into the synthetic updates") {
  Execution exec = Execution::build(2, {}, 9);
  CHECK(exec.initial_value() == 9);
  CHECK(exec.event(0).arg == Value{9});
  CHECK(exec.event(1).arg == Value{9});
}

TEST_CASE("canonical ids are ranked per process and kind by start timestamp") {
  Execution exec = Execution::build(2, {
      make_update(0, 10, 11, 1),
      make_update(0, 0, 1, 2),
      make_scan(0, 4, 5, {2, 0}),
      make_update(1, 2, 3, 3),
  });
  REQUIRE(exec.find("p0u1").has_value());
  CHECK(exec.event(*exec.find("p0u1")).start == 0);
  CHECK(exec.event(*exec.find("p0u2")).start == 10);
  CHECK(exec.event(*exec.find("p0s1")).start == 4);
  CHECK(exec.event(*exec.find("p1u1")).start == 2);
  CHECK(!exec.find("p1u2"));
  CHECK(!exec.find("nonsense"));
}

TEST_CASE("precedes tracks interval order and pending events precede nothing") {
  HighLevelEvent a = make_update(0, 0, 1, 0);
  HighLevelEvent b = make_update(1, 2, 3, 0);
  HighLevelEvent p = make_update(1, 0, kPendingEnd, 0);
  CHECK(precedes(a, b));
  CHECK(!precedes(b, a));
  CHECK(!precedes(p, b));
  CHECK(precedes(a, p) == false);  // p starts at 0, before a ends
  HighLevelEvent late = make_update(1, 9, kPendingEnd, 0);
  CHECK(precedes(a, late));
  CHECK(!precedes(a, a));
}

TEST_CASE("updates_of lists the initial update first, then in time order") {
  Execution exec = Execution::build(2, {
      make_update(0, 4, 5, 1),
      make_update(0, 0, 1, 2),
      make_update(0, 8, kPendingEnd, 3),
      make_scan(1, 2, 3, {2, 0}),
  });
  const auto& ups = exec.updates_of(0);
  REQUIRE(ups.size() == 4);
  CHECK(exec.event(ups[0]).initial);
  CHECK(exec.event(ups[1]).arg == Value{2});
  CHECK(exec.event(ups[2]).arg == Value{1});
  CHECK(exec.event(ups[3]).arg == Value{3});
  CHECK(exec.updates_of(1).size() == 1);
}

TEST_CASE("complete_scans is ordered by start and skips pending scans") {
  Execution exec = Execution::build(2, {
      make_scan(0, 6, 7, {0, 0}),
      make_scan(1, 2, 3, {0, 0}),
      make_scan(0, 10, kPendingEnd, {}),
  });
  const auto& scans = exec.complete_scans();
  REQUIRE(scans.size() == 2);
  CHECK(exec.event(scans[0]).start == 2);
  CHECK(exec.event(scans[1]).start == 6);
}

TEST_CASE("trace files parse to the same events they serialize from") {
  Execution exec = testsupport::load_trace("overlap.trace");
  CHECK(exec.n() == 2);
  CHECK(exec.size() == 6);
  CHECK(serialize_trace(exec) == testsupport::slurp(testsupport::data_path("overlap.trace")));
  Execution again = parse_trace(serialize_trace(exec));
  CHECK(same_events(exec, again));
}

TEST_CASE("parse accepts comments, blank lines, init= and pending") {
  Execution exec = parse_trace(
      "# a comment\n"
      "n=2 init=5\n"
      "\n"
      "0 update 0 pending arg=7   # trailing comment\n"
      "1 scan 2 3 ret=5,5\n");
  CHECK(exec.initial_value() == 5);
  REQUIRE(exec.find("p0u1"));
  CHECK(exec.event(*exec.find("p0u1")).pending());
  CHECK(exec.event(*exec.find("p1s1")).ret == std::vector<Value>{5, 5});
}

TEST_CASE("parse rejects malformed input with line numbers") {
  CHECK_THROWS_AS(parse_trace(""), ParseError);
  CHECK_THROWS_AS(parse_trace("x=2\n"), ParseError);
  CHECK_THROWS_AS(parse_trace("n=0\n"), ParseError);
  CHECK_THROWS_AS(parse_trace("n=2\np0 update 0 1 arg=1\n"), ParseError);
  CHECK_THROWS_AS(parse_trace("n=2\n0 write 0 1 arg=1\n"), ParseError);
  CHECK_THROWS_AS(parse_trace("n=2\n0 update 0\n"), ParseError);
  CHECK_THROWS_AS(parse_trace("n=2\n0 scan 0 1 ret=1,x\n"), ParseError);
  try {
    parse_trace("n=2\n# fine\n0 update zero 1 arg=1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("validate flags structural problems with stable codes") {
  auto codes = [](const Execution& exec) {
    std::vector<std::string> out;
    for (const auto& finding : validate(exec).findings) out.push_back(finding.code);
    return out;
  };
  auto has = [](const std::vector<std::string>& cs, const std::string& c) {
    return std::find(cs.begin(), cs.end(), c) != cs.end();
  };

  CHECK(validate(testsupport::load_trace("overlap.trace")).ok());
  CHECK(validate(testsupport::load_trace("crossed.trace")).ok());
  CHECK(validate(testsupport::load_trace("pending.trace")).ok());

  CHECK(has(codes(Execution::build(1, {make_update(0, 3, 2, 1)})), "interval"));
  CHECK(has(codes(Execution::build(1, {make_update(0, -1, 2, 1)})), "negative"));
  CHECK(has(codes(Execution::build(
            1, {make_update(0, 0, 3, 1), make_update(0, 2, 5, 2)})), "overlap"));
  CHECK(has(codes(Execution::build(
            1, {make_update(0, 0, kPendingEnd, 1), make_update(0, 2, 3, 2)})), "pending"));
  CHECK(has(codes(Execution::build(
            2, {make_update(0, 0, 1, 1), make_update(1, 1, 2, 1)})), "boundary"));
  CHECK(has(codes(Execution::build(1, {make_scan(0, 0, 1, {1, 2})})), "arity"));

  Execution scan_with_arg = Execution::build(1, {make_scan(0, 0, 1, {0})});
  const_cast<HighLevelEvent&>(scan_with_arg.event(1)).arg = 3;
  CHECK(has(codes(scan_with_arg), "arg"));

  Execution update_with_ret = Execution::build(1, {make_update(0, 0, 1, 1)});
  const_cast<HighLevelEvent&>(update_with_ret.event(1)).ret = std::vector<Value>{1};
  CHECK(has(codes(update_with_ret), "ret"));
}

TEST_CASE("round trip holds on simulated executions including pending ops") {
  const AlgorithmModel& model = *find_model("SingleCollect");
  OpScript scripts = {{{EventKind::Update, 3}, {EventKind::Scan, 0}},
                      {{EventKind::Update, 4}}};
  for (const auto& steps : std::vector<std::vector<int>>{
           {}, {0}, {0, 0}, {0, 1, 0, 1, 0, 0}, {1, 1, 0, 0, 0, 0}, {0, 1, 1, 0}}) {
    RunOutcome outcome = run(model, Schedule{steps}, scripts, 2, 0);
    Execution again = parse_trace(serialize_trace(outcome.execution));
    CHECK(same_events(outcome.execution, again));
    CHECK(validate(outcome.execution).ok());
  }
}

TEST_CASE("same_events distinguishes differing traces") {
  Execution a = testsupport::load_trace("overlap.trace");
  Execution b = testsupport::load_trace("crossed.trace");
  CHECK(same_events(a, a));
  CHECK(!same_events(a, b));
}
