#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "support.hpp"

namespace {

struct CliResult {
  int rc = -1;
  std::string out;
  std::string err;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "snapcheck_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  ++counter;
  auto dir = scratch_dir();
  auto out = dir / ("out_" + std::to_string(counter) + ".txt");
  auto err = dir / ("err_" + std::to_string(counter) + ".txt");
  std::string cmd = args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
  int raw = std::system(cmd.c_str());
  REQUIRE(raw != -1);
  CliResult result;
  result.rc = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.out = read_file(out);
  result.err = read_file(err);
  return result;
}

std::string cli() { return std::string("\"") + SNAPCHECK_CLI_PATH + "\""; }

std::string data(const std::string& name) {
  return "\"" + testsupport::data_path(name) + "\"";
}

}  // namespace

TEST_CASE("check reports the assignment, the order, and the verdict") {
  auto result = run_cli(cli() + " check " + data("overlap.trace"));
  CHECK(result.rc == 0);
  CHECK(result.out ==
        "alpha 0 p0s1 p0u1\n"
        "alpha 1 p0s1 p1u1\n"
        "LIN i0\n"
        "LIN i1\n"
        "LIN p1u1\n"
        "LIN p0u1\n"
        "LIN p0s1\n"
        "LIN p1u2\n"
        "LINEARIZABLE\n");
}

TEST_CASE("check rejects the crossed-scans trace") {
  auto result = run_cli(cli() + " check " + data("crossed.trace"));
  CHECK(result.rc == 1);
  CHECK(result.out == "NOT_LINEARIZABLE\n");
}

TEST_CASE("oracle agrees on both verdicts") {
  auto yes = run_cli(cli() + " oracle " + data("overlap.trace"));
  CHECK(yes.rc == 0);
  CHECK(yes.out ==
        "LIN i0\n"
        "LIN i1\n"
        "LIN p1u1\n"
        "LIN p0u1\n"
        "LIN p0s1\n"
        "LIN p1u2\n"
        "LINEARIZABLE\n");

  auto no = run_cli(cli() + " oracle " + data("p2.trace"));
  CHECK(no.rc == 1);
  CHECK(no.out == "NOT_LINEARIZABLE\n");
}

TEST_CASE("props lists every violated property or confirms the assignment") {
  auto ok = run_cli(cli() + " props " + data("overlap.trace") + " " + data("overlap.alpha"));
  CHECK(ok.rc == 0);
  CHECK(ok.out == "OK\n");

  auto bad = run_cli(cli() + " props " + data("crossed.trace") + " " + data("crossed.alpha"));
  CHECK(bad.rc == 1);
  CHECK(bad.out ==
        "P3 scan=p0s1 i=0 update=p0u1\n"
        "P3 scan=p1s1 i=1 update=p1u2\n"
        "P4 scan=p0s1 scan2=p1s1 i=1\n"
        "P5 scan=p0s1 i=0 j=1 update=p0u1\n"
        "P5 scan=p1s1 i=1 j=0 update=p1u2\n"
        "P6 scan=p0s1 scan2=p1s1 i=0 j=1\n");

  auto partial = run_cli(cli() + " props " + data("crossed.trace") + " " + data("overlap.alpha"));
  CHECK(partial.rc == 2);
  CHECK(partial.err.find("error:") != std::string::npos);
}

TEST_CASE("simulate replays a run file under the chosen model") {
  auto atomic = run_cli(cli() + " simulate " + data("overlap.run") + " --model AtomicMock");
  CHECK(atomic.rc == 0);
  CHECK(atomic.out == "# model=AtomicMock\n# steps=7 noops=0\n" +
                          testsupport::slurp(testsupport::data_path("overlap.trace")));

  auto collect = run_cli(cli() + " simulate " + data("n3gap.run"));
  CHECK(collect.rc == 0);
  CHECK(collect.out ==
        "# model=SingleCollect\n"
        "# steps=7 noops=0\n"
        "n=3\n"
        "0 scan 0 13 ret=0,0,1\n"
        "1 update 4 7 arg=1\n"
        "2 update 8 11 arg=1\n");
}

TEST_CASE("hunt finds the three-process counterexample and exits 1") {
  auto result = run_cli(cli() +
                        " hunt --model SingleCollect --processes 3 --bound-steps 8 --bound-ops 1");
  CHECK(result.rc == 1);
  CHECK(result.out ==
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
}

TEST_CASE("hunt reports a clean sweep with its run count") {
  auto result =
      run_cli(cli() + " hunt --model AtomicMock --processes 2 --bound-steps 6 --bound-ops 1");
  CHECK(result.rc == 0);
  CHECK(result.out.rfind("CLEAN count=", 0) == 0);
}

TEST_CASE("reduction flags the quirk model and clears the honest ones") {
  auto breach = run_cli(cli() +
                        " reduction --model ParityQuirk --domain 0,1,2"
                        " --processes 2 --bound-steps 6 --bound-ops 1");
  CHECK(breach.rc == 1);
  CHECK(breach.out.find("REDUCTION_BREACH\n") != std::string::npos);

  auto honest = run_cli(cli() +
                        " reduction --model AtomicMock --processes 2"
                        " --bound-steps 6 --bound-ops 1");
  CHECK(honest.rc == 0);
  CHECK(honest.out.find("violations=0") != std::string::npos);
  CHECK(honest.out.find("REDUCTION_OK\n") != std::string::npos);

  auto single = run_cli(cli() +
                        " reduction --model AtomicMock --domain 2"
                        " --processes 2 --bound-steps 4 --bound-ops 1");
  CHECK(single.rc == 0);
  CHECK(single.out.find("REDUCTION_OK\n") != std::string::npos);
}

TEST_CASE("--out duplicates stdout into a file") {
  auto copy = scratch_dir() / "check_copy.txt";
  std::filesystem::remove(copy);
  auto result = run_cli(cli() + " check " + data("overlap.trace") + " --out \"" + copy.string() +
                        "\"");
  CHECK(result.rc == 0);
  CHECK(read_file(copy) == result.out);
}

TEST_CASE("the oracle bound honors its environment variable") {
  auto refused = run_cli("SNAPCHECK_ORACLE_BOUND=3 " + cli() + " oracle " + data("overlap.trace"));
  CHECK(refused.rc == 2);
  CHECK(refused.err == "error: trace has 4 events, oracle bound is 3\n");

  auto junk = run_cli("SNAPCHECK_ORACLE_BOUND=abc " + cli() + " oracle " + data("overlap.trace"));
  CHECK(junk.rc == 2);
  CHECK(junk.err == "error: SNAPCHECK_ORACLE_BOUND is not a number\n");

  auto lifted = run_cli("SNAPCHECK_ORACLE_BOUND=4 " + cli() + " oracle " + data("overlap.trace"));
  CHECK(lifted.rc == 0);
}

TEST_CASE("usage problems exit 2") {
  CHECK(run_cli(cli()).rc == 2);
  CHECK(run_cli(cli() + " frobnicate").rc == 2);
  CHECK(run_cli(cli() + " check").rc == 2);
  CHECK(run_cli(cli() + " check /no/such/file.trace").rc == 2);

  auto unknown = run_cli(cli() + " hunt --model Bogus --processes 2 --bound-steps 2");
  CHECK(unknown.rc == 2);
  CHECK(unknown.err.find("unknown model 'Bogus'") != std::string::npos);
  CHECK(unknown.err.find("AtomicMock") != std::string::npos);
}

TEST_CASE("traces that fail validation are refused with details") {
  auto bad = scratch_dir() / "bad.trace";
  std::ofstream(bad) << "n=1\n0 update 0 5\n";
  auto result = run_cli(cli() + " check \"" + bad.string() + "\"");
  CHECK(result.rc == 2);
  CHECK(result.err.find("error: trace failed validation") != std::string::npos);
}
