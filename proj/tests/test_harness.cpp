#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "contring/crosscheck.hpp"
#include "contring/dispatch.hpp"
#include "contring/errors.hpp"
#include "contring/golden.hpp"
#include "contring/records.hpp"

using namespace contring;

namespace {

RunConfig base_config() {
  RunConfig config;
  config.data_dir = CONTRING_DATA_DIR;
  return config;
}

struct FileGuard {
  std::string path;
  ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("csv serialization is byte exact") {
  CountRecord plain{"Zmod:8", 5, "roots", "0", "dp", "2816", "2816", "pass"};
  CountRecord comma{"PolyQuot:Zmod:4/x^2,2x", 4, "roots", "0",
                    "formula", "40", "", "ok"};
  CountRecord quote{"Zmod:4", 3, "roots", "say \"hi\"", "dp", "1", "", "ok"};
  std::string csv = to_csv({plain, comma, quote});
  CHECK(csv ==
        "ring,n,kind,target,method,value,expected,status\n"
        "Zmod:8,5,roots,0,dp,2816,2816,pass\n"
        "\"PolyQuot:Zmod:4/x^2,2x\",4,roots,0,formula,40,,ok\n"
        "Zmod:4,3,roots,\"say \"\"hi\"\"\",dp,1,,ok\n");
}

TEST_CASE("markdown serialization escapes pipes") {
  CountRecord rec{"Zmod:6", 2, "roots", "a|b", "dp", "4", "", "ok"};
  CHECK(to_markdown({rec}) ==
        "| ring | n | kind | target | method | value | expected | status |\n"
        "|---|---|---|---|---|---|---|---|\n"
        "| Zmod:6 | 2 | roots | a\\|b | dp | 4 |  | ok |\n");
}

TEST_CASE("json serialization round trips") {
  CountRecord rec{"GF:2^2", 4, "quiddity", "x", "brute", "63", "63", "pass"};
  nlohmann::json parsed = nlohmann::json::parse(to_json({rec}));
  REQUIRE(parsed.is_array());
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0]["ring"] == "GF:2^2");
  CHECK(parsed[0]["n"] == 4);
  CHECK(parsed[0]["kind"] == "quiddity");
  CHECK(parsed[0]["target"] == "x");
  CHECK(parsed[0]["method"] == "brute");
  CHECK(parsed[0]["value"] == "63");
  CHECK(parsed[0]["expected"] == "63");
  CHECK(parsed[0]["status"] == "pass");
}

TEST_CASE("bundled tables load with the advertised shapes") {
  CHECK(golden_table_names() ==
        std::vector<std::string>{"roots-a", "roots-b", "roots-exotic",
                                 "w-plus", "w-minus"});
  std::vector<std::pair<const char*, std::size_t>> shapes = {
      {"roots-a", 60}, {"roots-b", 36}, {"roots-exotic", 21},
      {"w-plus", 25},  {"w-minus", 25},
  };
  for (const auto& [name, rows] : shapes) {
    CAPTURE(name);
    GoldenTable table = load_golden(CONTRING_DATA_DIR, name);
    CHECK(table.name == name);
    CHECK(table.rows.size() == rows);
    CHECK_FALSE(table.provenance.empty());
    for (const GoldenRow& row : table.rows) CHECK(row.expected > 0);
  }
}

TEST_CASE("golden loader rejects bad input") {
  CHECK_THROWS_AS(load_golden_file("/nonexistent/table.json"), BuildError);
  std::string path = "harness_bad_golden.json";
  FileGuard guard{path};
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load_golden_file(path), BuildError);
}

TEST_CASE("auto method prefers the closed form") {
  Session session(base_config());
  std::vector<CountRecord> recs =
      session.compute("Zmod:8", 5, Kind::Roots, "", "auto");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].method == "formula");
  CHECK(recs[0].value == "2816");
  CHECK(recs[0].target == "0");
  CHECK(recs[0].status == "ok");
}

TEST_CASE("explicit engines agree") {
  Session session(base_config());
  auto dp = session.compute("Zmod:6", 4, Kind::Roots, "3", "dp");
  auto brute = session.compute("Zmod:6", 4, Kind::Roots, "3", "brute");
  REQUIRE(dp.size() == 1);
  REQUIRE(brute.size() == 1);
  CHECK(dp[0].value == brute[0].value);
  CHECK(dp[0].method == "dp");
  CHECK(brute[0].method == "brute");
}

TEST_CASE("method all runs every applicable engine") {
  Session session(base_config());
  auto recs = session.compute("Zmod:8", 4, Kind::Roots, "", "all");
  REQUIRE(recs.size() == 3);
  std::vector<std::string> methods;
  for (const CountRecord& r : recs) {
    methods.push_back(r.method);
    CHECK(r.status == "agree");
    CHECK(r.value == recs[0].value);
  }
  CHECK(methods == std::vector<std::string>{"formula", "dp", "brute"});
}

TEST_CASE("formula coverage gaps surface as domain errors") {
  Session session(base_config());
  CHECK_THROWS_AS(
      session.compute("Bivar:Zmod:2/x^2,y^2", 4, Kind::Quiddity, "", "formula"),
      DomainError);
}

TEST_CASE("disk cache replays previous results") {
  std::string path = "harness_cache_roundtrip.json";
  FileGuard guard{path};
  std::string fresh_value;
  {
    RunConfig config = base_config();
    config.cache_path = path;
    Session session(config);
    auto recs = session.compute("Zmod:9", 6, Kind::Roots, "", "auto");
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].method == "formula");
    fresh_value = recs[0].value;
    session.flush_cache();
  }
  RunConfig config = base_config();
  config.cache_path = path;
  Session session(config);
  auto recs = session.compute("Zmod:9", 6, Kind::Roots, "", "auto");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].method == "cache(formula)");
  CHECK(recs[0].value == fresh_value);
}

TEST_CASE("corrupt cache files fail the session build") {
  std::string path = "harness_cache_corrupt.json";
  FileGuard guard{path};
  std::ofstream(path) << "{{{";
  RunConfig config = base_config();
  config.cache_path = path;
  CHECK_THROWS_AS(Session{std::move(config)}, BuildError);
}

TEST_CASE("table runs verify expected values") {
  Session session(base_config());
  GoldenTable table;
  table.name = "inline";
  table.rows = {
      {"GF:2^1", 4, "roots", "0", BigInt(5)},
      {"Zmod:4", 4, "roots", "0", BigInt(40)},
  };
  TableRunResult good = run_table(session, table);
  CHECK(good.all_pass);
  CHECK_FALSE(good.any_skip);
  REQUIRE(good.records.size() == 2);
  CHECK(good.records[0].status == "pass");
  CHECK(good.records[1].status == "pass");

  table.rows[1].expected = 41;
  TableRunResult bad = run_table(session, table);
  CHECK_FALSE(bad.all_pass);
  CHECK(bad.records[0].status == "pass");
  CHECK(bad.records[1].status == "fail");
  CHECK(bad.records[1].value == "40");
  CHECK(bad.records[1].expected == "41");
}

TEST_CASE("budget-bound cells skip without failing the run") {
  Session session(base_config());
  GoldenTable table;
  table.name = "inline";
  table.rows = {
      {"GF:3^1", 3, "roots", "0", BigInt(7)},
      {"Zmod:128", 12, "omega", "", BigInt(1)},
  };
  TableRunResult result = run_table(session, table);
  CHECK(result.all_pass);
  CHECK(result.any_skip);
  REQUIRE(result.records.size() == 2);
  CHECK(result.records[0].status == "pass");
  CHECK(result.records[1].status == "skipped-budget");
  CHECK(result.records[1].value.empty());
}

TEST_CASE("worker count does not change table output") {
  GoldenTable table = load_golden(CONTRING_DATA_DIR, "roots-a");
  Session serial(base_config());
  RunConfig parallel_config = base_config();
  parallel_config.workers = 4;
  Session parallel(parallel_config);
  TableRunResult a = run_table(serial, table);
  TableRunResult b = run_table(parallel, table);
  CHECK(a.all_pass);
  CHECK(b.all_pass);
  CHECK(to_csv(a.records) == to_csv(b.records));
}

TEST_CASE("table output is deterministic across runs") {
  GoldenTable table = load_golden(CONTRING_DATA_DIR, "w-plus");
  Session session(base_config());
  std::string first = to_csv(run_table(session, table).records);
  std::string second = to_csv(run_table(session, table).records);
  CHECK(first == second);
  CHECK(first.find("fail") == std::string::npos);
}

TEST_CASE("crosscheck reports per-property statuses") {
  Session session(base_config());
  std::vector<PropertyResult> local = run_crosscheck(session, "Zmod:4", 4);
  CHECK(local.size() >= 20);
  for (const PropertyResult& p : local) {
    CAPTURE(p.name);
    CAPTURE(p.detail);
    CHECK(p.status != "FAIL");
  }

  std::vector<PropertyResult> composite = run_crosscheck(session, "Zmod:10", 4);
  bool saw_local_skip = false;
  for (const PropertyResult& p : composite) {
    CAPTURE(p.name);
    CAPTURE(p.detail);
    CHECK(p.status != "FAIL");
    if (p.name == "local-structure") {
      CHECK(p.status == "SKIP");
      saw_local_skip = true;
    }
  }
  CHECK(saw_local_skip);
}
