// SPDX-License-Identifier: Apache-2.0
// Tests for the command-line front end: exit codes, output formats and configuration.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "json.hpp"
#include "rsm/cli.hpp"

using json = nlohmann::json;
using rsm::run_cli;

namespace {
struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream o, e;
  const int code = run_cli(args, o, e);
  return {code, o.str(), e.str()};
}

json run_json(const std::vector<std::string>& args) {
  const Run r = run(args);
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  j["provenance"].erase("timestamp");
  return j;
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p;
}
}  // namespace

TEST_CASE("csv field quoting and number formatting") {
  CHECK(rsm::csv_field("abc") == "abc");
  CHECK(rsm::csv_field("a,b") == "\"a,b\"");
  CHECK(rsm::csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(rsm::csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(rsm::format_double(0.1) == "0.1");
  CHECK(std::stod(rsm::format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(rsm::format_double(std::nan("")) == "nan");
  CHECK(rsm::format_double(-HUGE_VAL) == "-inf");
}

TEST_CASE("exit codes") {
  CHECK(run({"bogus"}).code == rsm::kExitUsage);
  CHECK(run({}).code == rsm::kExitUsage);
  CHECK(run({"classgroup", "--conductor", "0"}).code == rsm::kExitUsage);
  CHECK(run({"central", "--k", "2"}).code == rsm::kExitUsage);
  CHECK(run({"classgroup", "--disc", "-5"}).code == rsm::kExitDomain);
  CHECK(run({"classgroup", "--disc", "5"}).code == rsm::kExitDomain);
  CHECK(run({"shifted", "--q", "0", "--Y", "1000"}).code == rsm::kExitDomain);
  CHECK(run({"shifted", "--q", "300", "--Y", "1000"}).code == rsm::kExitDomain);
  CHECK(run({"shifted", "--form", "delta", "--pmax", "1000", "--q", "1", "--Y", "1e5"}).code == rsm::kExitCoverage);
  CHECK(run({"central", "--form", "/nonexistent/table.txt"}).code == rsm::kExitDomain);
  CHECK(run({"whittaker", "--ymin", "2", "--ymax", "1"}).code == rsm::kExitDomain);
  CHECK(run({"--version"}).code == rsm::kExitOk);
  CHECK(run({"--help"}).code == rsm::kExitOk);
}

TEST_CASE("malformed table reports its line") {
  const auto p = temp_file("rsm_bad_table.txt", "# level 1\n2 -1\n3 0.5\nfoo bar\n");
  const Run r = run({"central", "--form", p.string(), "--pmax", "100"});
  CHECK(r.code == rsm::kExitDomain);
  CHECK(r.err.find("line") != std::string::npos);
}

TEST_CASE("classgroup output") {
  const json j = run_json({"classgroup", "--disc", "-23", "--conductor", "3"});
  CHECK(j["result"]["h"] == 6);
  CHECK(j["result"]["h_dedekind"] == 6);
  CHECK(j["result"]["characters"].size() == 6);
  CHECK(j["provenance"]["config"]["disc"] == -23);
  CHECK(j["provenance"].contains("version"));
  CHECK(j["provenance"]["tolerances"].contains("theta"));
}

TEST_CASE("JSON output is deterministic apart from the timestamp") {
  const std::vector<std::string> a{"central", "--disc", "-7", "--form", "delta", "--pmax", "200000"};
  CHECK(run_json(a) == run_json(a));
}

TEST_CASE("csv output") {
  const Run r = run({"--format", "csv", "whittaker", "--q", "0", "--nu", "0.25", "--points", "5"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# {", 0) == 0);
  std::getline(in, line);
  CHECK(line == "y,value\r");
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(line.back() == '\r');
    ++rows;
  }
  CHECK(rows == 5);
  CHECK(run({"--format", "csv", "selftest"}).code == rsm::kExitOk);
}

TEST_CASE("whittaker grid endpoints are exact") {
  const json j = run_json({"whittaker", "--q", "0", "--nu", "0.25", "--ymin", "0.001", "--ymax", "3", "--points", "7"});
  const auto& v = j["result"]["values"];
  REQUIRE(v.size() == 7);
  CHECK(v[0][0].get<double>() == 0.001);
  CHECK(v[6][0].get<double>() == 3.0);
}

TEST_CASE("central value with automatic parity") {
  const json j = run_json({"central", "--disc", "-4", "--form", "delta", "--pmax", "200000"});
  const auto& v = j["result"]["values"];
  REQUIRE(v.size() == 1);
  CHECK(v[0]["k"] == 1);
  CHECK(v[0]["root_number"] == -1);
  CHECK(v[0]["stated_root_number"] == 1);
  CHECK(v[0]["value"].get<double>() > 0.0);
}

TEST_CASE("average routes agree") {
  const json j = run_json({"average", "--disc", "-23", "--form", "delta", "--pmax", "200000", "--route", "both",
                           "--no-main-term"});
  const auto& r = j["result"];
  CHECK(r["route_gap"].get<double>() <= 1e-9 * std::fabs(r["H_A"].get<double>()));
  CHECK(r["per_character"].size() == 3);
  CHECK_FALSE(r.contains("main_term"));
}

TEST_CASE("thread count does not change results") {
  const std::vector<std::string> base{"shifted", "--form", "delta", "--pmax", "300000", "--q", "1", "--q", "5",
                                      "--Y", "1000", "--Y", "20000"};
  std::vector<std::string> a{"--threads", "1"}, b{"--threads", "3"};
  a.insert(a.end(), base.begin(), base.end());
  b.insert(b.end(), base.begin(), base.end());
  json ja = run_json(a), jb = run_json(b);
  CHECK(ja["result"] == jb["result"]);
  CHECK(ja["provenance"]["config"]["threads"] == 1);
}

TEST_CASE("configuration file with command-line override") {
  const auto cfg = temp_file("rsm_test.ini", "threads = 2\n[classgroup]\ndisc = -23\nconductor = 2\n");
  const json j = run_json({"--config", cfg.string(), "classgroup"});
  CHECK(j["provenance"]["config"]["threads"] == 2);
  CHECK(j["provenance"]["config"]["disc"] == -23);
  CHECK(j["result"]["conductor"] == 2);
  const json k = run_json({"--config", cfg.string(), "classgroup", "--conductor", "3"});
  CHECK(k["result"]["conductor"] == 3);
}

TEST_CASE("output file") {
  const auto p = std::filesystem::temp_directory_path() / "rsm_out.json";
  std::filesystem::remove(p);
  const Run r = run({"--output", p.string(), "classgroup", "--disc", "-3"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(p);
  const json j = json::parse(in);
  CHECK(j["result"]["h"] == 1);
}

TEST_CASE("installed binary") {
  const char* bin = std::getenv("RSM_CLI");
  if (!bin) return;
  const std::string cmd = std::string(bin) + " selftest > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(st) == 0);
  const int bad = std::system((std::string(bin) + " classgroup --disc -5 > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(bad) == rsm::kExitDomain);
}
