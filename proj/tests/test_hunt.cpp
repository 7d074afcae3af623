#include "doctest.h"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "snapcheck/alpha.hpp"
#include "snapcheck/hunt.hpp"
#include "snapcheck/oracle.hpp"
#include "snapcheck/simulate.hpp"
#include "snapcheck/trace.hpp"
#include "support.hpp"

using namespace snapcheck;

namespace {

const AlgorithmModel& model(const char* name) {
  const AlgorithmModel* m = find_model(name);
  REQUIRE(m != nullptr);
  return *m;
}

std::string kinds_of(const ProcessScript& script) {
  std::string out;
  for (const OpRequest& op : script) out += op.kind == EventKind::Scan ? 'S' : 'U';
  return out;
}

}  // namespace

TEST_CASE("schedule enumeration is a preorder walk of the bounded tree") {
  std::size_t count = 0;
  enumerate_schedules(2, 2, [&](const Schedule&) {
    ++count;
    return true;
  });
  CHECK(count == 7);

  std::set<std::vector<int>> seen;
  count = 0;
  enumerate_schedules(3, 3, [&](const Schedule& schedule) {
    ++count;
    if (!schedule.steps.empty()) {
      auto parent = schedule.steps;
      parent.pop_back();
      CHECK(seen.count(parent) == 1);
    }
    seen.insert(schedule.steps);
    return true;
  });
  CHECK(count == 40);
  CHECK(seen.size() == 40);

  count = 0;
  enumerate_schedules(2, 5, [&](const Schedule&) {
    ++count;
    return count < 3;
  });
  CHECK(count == 3);

  CHECK_THROWS_AS(enumerate_schedules(0, 2, [](const Schedule&) { return true; }),
                  std::invalid_argument);
}

TEST_CASE("kind scripts come shortest first with scans before updates") {
  auto scripts = enumerate_kind_scripts(2);
  std::vector<std::string> shapes;
  for (const auto& s : scripts) shapes.push_back(kinds_of(s));
  CHECK(shapes == std::vector<std::string>{"", "S", "U", "SS", "SU", "US", "UU"});

  CHECK(enumerate_kind_scripts(0).size() == 1);
  CHECK(enumerate_kind_scripts(3).size() == 15);
}

TEST_CASE("simple parameter ranges cover 0..updates inclusive") {
  OpScript kinds = {{{EventKind::Update}, {EventKind::Update}},
                    {{EventKind::Update}},
                    {{EventKind::Scan}}};
  auto params = enumerate_simple_assignments(kinds, 0, 1);
  REQUIRE(params.size() == 6);
  std::vector<std::pair<int, int>> rs;
  for (const auto& p : params) {
    CHECK(p.i == 0);
    CHECK(p.j == 1);
    rs.emplace_back(p.r_i, p.r_j);
  }
  CHECK(rs == std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 0}, {2, 1}});

  CHECK(enumerate_simple_assignments(kinds, 2, 0).size() == 3);
  CHECK_THROWS_AS(enumerate_simple_assignments(kinds, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_simple_assignments(kinds, 0, 3), std::invalid_argument);
}

TEST_CASE("simple parameters write 0 before the switch point and 1 after") {
  OpScript kinds = {{{EventKind::Update}, {EventKind::Update}},
                    {{EventKind::Scan}, {EventKind::Update}},
                    {{EventKind::Update}}};
  auto scripts = apply_simple_params(kinds, SimpleParams{.i = 0, .j = 1, .r_i = 1, .r_j = 0});

  CHECK(scripts[0][0].arg == 0);
  CHECK(scripts[0][1].arg == 1);
  CHECK(scripts[1][1].arg == 1);
  CHECK(scripts[2][0].arg == 0);
  CHECK(format_script(scripts[0]) == "update(0) update(1)");
  CHECK(format_script(scripts[1]) == "scan update(1)");
}

TEST_CASE("the three-process single-collect hunt lands on the straddled scan") {
  HuntBounds bounds{3, 8, 1};
  auto report = hunt(model("SingleCollect"), bounds);

  CHECK(report.model == "SingleCollect");
  REQUIRE(!report.clean());
  CHECK(report.checked > 0);

  const auto& cex = *report.counterexample;
  CHECK(cex.schedule.steps == std::vector<int>{0, 0, 1, 1, 2, 2, 0});
  CHECK(cex.params.i == 1);
  CHECK(cex.params.j == 2);
  CHECK(cex.params.r_i == 0);
  CHECK(cex.params.r_j == 0);
  CHECK(format_script(cex.scripts[0]) == "scan");
  CHECK(format_script(cex.scripts[1]) == "update(1)");
  CHECK(format_script(cex.scripts[2]) == "update(1)");

  auto spec = parse_run_file(testsupport::slurp(testsupport::data_path("n3gap.run")));
  auto golden = run(model("SingleCollect"), spec.schedule, spec.scripts, spec.n);
  CHECK(same_events(cex.execution, golden.execution));

  CHECK(validate(cex.execution).ok());
  CHECK(!search_alpha(cex.execution).has_value());
  CHECK(!oracle_linearizable(cex.execution).has_value());

  HuntOptions two_jobs;
  two_jobs.jobs = 2;
  auto threaded = hunt(model("SingleCollect"), bounds, two_jobs);
  CHECK(threaded.checked == report.checked);
  REQUIRE(!threaded.clean());
  CHECK(threaded.counterexample->schedule.steps == cex.schedule.steps);
  CHECK(same_events(threaded.counterexample->execution, cex.execution));

  auto again = hunt(model("SingleCollect"), bounds);
  CHECK(again.checked == report.checked);
  CHECK(same_events(again.counterexample->execution, cex.execution));
}

TEST_CASE("the hunt report carries the full recipe for the counterexample") {
  auto report = hunt(model("SingleCollect"), HuntBounds{3, 8, 1});
  REQUIRE(!report.clean());
  std::string text = serialize_hunt_report(report);
  CHECK(text ==
        "COUNTEREXAMPLE\n"
        "# model=SingleCollect\n"
        "# schedule=0,0,1,1,2,2,0\n"
        "# script 0: scan\n"
        "# script 1: update(1)\n"
        "# script 2: update(1)\n"
        "# simple i=1 j=2 r_i=0 r_j=0\n"
        "n=3\n"
        "0 scan 0 13 ret=0,0,1\n"
        "1 update 4 7 arg=1\n"
        "2 update 8 11 arg=1\n"
        "NOT_LINEARIZABLE\n");

  auto body_begin = text.find("n=3");
  auto body_end = text.find("NOT_LINEARIZABLE");
  REQUIRE(body_begin != std::string::npos);
  REQUIRE(body_end != std::string::npos);
  auto reparsed = parse_trace(text.substr(body_begin, body_end - body_begin));
  CHECK(same_events(reparsed, report.counterexample->execution));
}

TEST_CASE("the atomic model survives the full two-process sweep") {
  auto report = hunt(model("AtomicMock"), HuntBounds{2, 12, 2});
  CHECK(report.clean());
  CHECK(report.checked == 17432);
  CHECK(serialize_hunt_report(report) == "CLEAN count=17432\n");
}

TEST_CASE("paranoid mode cross-checks verdicts without disagreement") {
  auto plain = hunt(model("SingleCollect"), HuntBounds{2, 6, 1});
  HuntOptions crosscheck;
  crosscheck.paranoid = true;
  auto paranoid = hunt(model("SingleCollect"), HuntBounds{2, 6, 1}, crosscheck);
  CHECK(plain.clean());
  CHECK(paranoid.clean());
  CHECK(paranoid.checked == plain.checked);
}

TEST_CASE("the sweep visits exactly what the hunt counts") {
  HuntBounds bounds{2, 6, 1};
  std::uint64_t visited = 0;
  bool finished = for_each_simple_execution(model("AtomicMock"), bounds,
                                            [&](const SimpleInstance& inst) {
                                              CHECK(inst.execution.n() == 2);
                                              CHECK(inst.schedule.steps.size() <= 6);
                                              ++visited;
                                              return true;
                                            });
  CHECK(finished);
  CHECK(visited == hunt(model("AtomicMock"), bounds).checked);

  std::uint64_t stopped_at = 0;
  bool completed = for_each_simple_execution(model("AtomicMock"), bounds,
                                             [&](const SimpleInstance&) {
                                               ++stopped_at;
                                               return false;
                                             });
  CHECK(!completed);
  CHECK(stopped_at == 1);
}

TEST_CASE("the general sweep confirms the simple reduction on the single-collect model") {
  auto report = check_reduction(model("SingleCollect"), {0, 1, 2}, HuntBounds{3, 8, 1});

  CHECK(report.general_checked == 45548);
  CHECK(report.general_violations == 56);
  REQUIRE(report.general.has_value());
  CHECK(!search_alpha(report.general->execution).has_value());
  CHECK(!oracle_linearizable(report.general->execution).has_value());

  REQUIRE(!report.simple.clean());
  CHECK(!report.breach());

  std::string text = serialize_reduction_report(report);
  CHECK(text.find("general count=45548 violations=56\n") == 0);
  CHECK(text.find("REDUCTION_OK\n") == text.size() - 13);
}

TEST_CASE("a model that cheats on values only breaks outside the simple executions") {
  auto report = check_reduction(model("ParityQuirk"), {0, 1, 2}, HuntBounds{2, 6, 1});

  CHECK(report.general_violations > 0);
  REQUIRE(report.general.has_value());
  CHECK(!search_alpha(report.general->execution).has_value());
  CHECK(report.simple.clean());
  CHECK(report.breach());
  CHECK(serialize_reduction_report(report).find("REDUCTION_BREACH\n") != std::string::npos);

  auto honest = check_reduction(model("AtomicMock"), {0, 1, 2}, HuntBounds{2, 6, 1});
  CHECK(honest.general_violations == 0);
  CHECK(!honest.general.has_value());
  CHECK(honest.simple.clean());
  CHECK(!honest.breach());
}

TEST_CASE("reduction checking rejects an empty domain") {
  CHECK_THROWS_AS(check_reduction(model("AtomicMock"), {}, HuntBounds{2, 2, 1}),
                  std::invalid_argument);
}
