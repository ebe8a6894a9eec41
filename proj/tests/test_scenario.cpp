#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "supremal/scenario.hpp"

using namespace supremal;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kMinimal = R"JSON({
  "version": 1,
  "domain": {"dim": 1, "extent": [[0, 1]], "h": 0.1},
  "supremands": {"n": {"pieces": [{"region": "all", "profile": "abs(xi)"}]}},
  "fields": {"u": "2 * x"},
  "operations": []
})JSON";

}  // namespace

TEST_CASE("builtins are listed, sorted, and stable") {
  auto names = list_builtins();
  CHECK(names.size() >= 4);
  CHECK(std::is_sorted(names.begin(), names.end()));
  for (const char* required :
       {"example-boh", "example-fg-meet", "main-theorem-suite", "sandwich-suite"}) {
    CHECK(std::count(names.begin(), names.end(), std::string(required)) == 1);
  }
  CHECK(names == list_builtins());
}

TEST_CASE("every builtin runs and passes") {
  for (const std::string& name : list_builtins()) {
    CAPTURE(name);
    Report rep = run_scenario_text(builtin_config(name), name);
    CHECK(rep.pass());
  }
}

TEST_CASE("empty operation list yields an empty passing report") {
  Report rep = run_scenario_text(kMinimal, "minimal");
  CHECK(rep.pass());
  CHECK(rep.ops.empty());
  CHECK(rep.assertion_count() == 0);
}

TEST_CASE("parse errors carry line numbers") {
  const char* broken = "{\n  \"version\": 1,\n  \"oops\n}";
  try {
    run_scenario_text(broken, "broken");
    CHECK(false);
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("line") != std::string::npos);
  }
}

TEST_CASE("version mismatch is a config error") {
  const char* v2 = R"JSON({"version": 2, "domain": {"dim": 1, "extent": [[0,1]], "h": 0.1}})JSON";
  CHECK_THROWS_AS(run_scenario_text(v2, "v2"), ConfigError);
}

TEST_CASE("unresolved references are config errors") {
  std::string cfg = kMinimal;
  cfg.replace(cfg.find("\"operations\": []"), 17,
              "\"operations\": [{\"op\": \"supremal\", \"f\": \"nope\", \"u\": \"u\"}]");
  CHECK_THROWS_AS(run_scenario_text(cfg, "bad-ref"), ConfigError);
  std::string cfg2 = kMinimal;
  cfg2.replace(cfg2.find("\"operations\": []"), 17,
               "\"operations\": [{\"op\": \"no_such_op\"}]");
  CHECK_THROWS_AS(run_scenario_text(cfg2, "bad-op"), ConfigError);
}

TEST_CASE("failed assertions mark the report, not an exception") {
  std::string cfg = kMinimal;
  cfg.replace(cfg.find("\"operations\": []"), 17,
              "\"operations\": [{\"op\": \"supremal\", \"f\": \"n\", \"u\": \"u\", "
              "\"expect\": 5, \"tol\": 0.001}]");
  Report rep = run_scenario_text(cfg, "failing");
  CHECK_FALSE(rep.pass());
  REQUIRE(rep.ops.size() == 1);
  REQUIRE(!rep.ops[0].assertions.empty());
  CHECK_FALSE(rep.ops[0].assertions[0].pass);
}

TEST_CASE("reruns with the same seed produce byte-identical CSV output") {
  namespace fs = std::filesystem;
  fs::remove_all("/tmp/supremal_det_a");
  fs::remove_all("/tmp/supremal_det_b");
  RunOptions a;
  a.out_dir = "/tmp/supremal_det_a";
  RunOptions b;
  b.out_dir = "/tmp/supremal_det_b";
  Report ra = run_scenario_text(builtin_config("example-boh"), "example-boh", a);
  Report rb = run_scenario_text(builtin_config("example-boh"), "example-boh", b);
  CHECK(ra.pass());
  CHECK(rb.pass());
  REQUIRE(!ra.exported_files.empty());
  REQUIRE(ra.exported_files.size() == rb.exported_files.size());
  for (size_t i = 0; i < ra.exported_files.size(); ++i) {
    CHECK(slurp(ra.exported_files[i]) == slurp(rb.exported_files[i]));
  }
}

TEST_CASE("seed override lands in the provenance header") {
  RunOptions o;
  o.seed = 123;
  Report rep = run_scenario_text(kMinimal, "seeded", o);
  CHECK(rep.seed == 123);
  std::stringstream out;
  rep.print(out);
  CHECK(out.str().find("seed 123") != std::string::npos);
  CHECK(out.str().find("## config") != std::string::npos);  // provenance echo
}

TEST_CASE("ad-hoc operations replace the config's list") {
  std::vector<std::string> ops{
      R"JSON({"op": "distance", "f": "n", "lambda": 2, "source": 0.5, "method": "both",
              "expect": "2 * abs(x - 0.5)", "tol": 1e-9})JSON"};
  Report rep = run_scenario_with_ops(kMinimal, "adhoc", ops);
  CHECK(rep.pass());
  REQUIRE(rep.ops.size() == 1);
  CHECK(rep.ops[0].op == "distance");
}

TEST_CASE("domain errors surface as exceptions") {
  const char* disconnected = R"JSON({
    "version": 1,
    "domain": {"dim": 1, "extent": [[0, 1]], "h": 0.1,
               "obstacles": [[[0.45, 0.55]]]},
    "operations": []
  })JSON";
  CHECK_THROWS(run_scenario_text(disconnected, "disconnected"));
}

TEST_CASE("relax accepts a field from CSV") {
  namespace fs = std::filesystem;
  fs::create_directories("/tmp/supremal_csv_in");
  // field u = 2x written on the scenario's own lattice
  {
    std::ofstream out("/tmp/supremal_csv_in/u.csv");
    out << "x,value\n";
    for (int k = 1; k <= 9; ++k) out << 0.1 * k << "," << 0.2 * k << "\n";
  }
  std::vector<std::string> ops{
      R"JSON({"op": "relax", "f": "n", "u_csv": "/tmp/supremal_csv_in/u.csv",
              "bracket": [0, 8], "tol": 0.001, "expect": 2, "expect_tol": 0.02})JSON"};
  Report rep = run_scenario_with_ops(kMinimal, "csv-field", ops);
  CHECK(rep.pass());
}

TEST_CASE("relax accepts a declared witness field") {
  // the zero witness leaves the value unchanged; a nonzero one floors it at F(w)
  std::vector<std::string> ops{
      R"JSON({"op": "relax", "f": "n", "u": "u", "witness": "0 * x",
              "bracket": [0, 8], "tol": 0.001, "expect": 2, "expect_tol": 0.01})JSON",
      R"JSON({"op": "relax", "f": "n", "u": "u", "witness": "3 * x",
              "bracket": [0, 8], "tol": 0.001, "expect": 3, "expect_tol": 0.01})JSON"};
  Report rep = run_scenario_with_ops(kMinimal, "witness", ops);
  CHECK(rep.pass());
}

TEST_CASE("difference quotient, lipschitz, and geodesic operations") {
  namespace fs = std::filesystem;
  fs::remove_all("/tmp/supremal_geo_out");
  std::vector<std::string> ops{
      R"JSON({"op": "difference_quotient", "f": "n", "lambda": 2, "u": "3 * x",
              "expect": 1.5, "tol": 1e-9})JSON",
      R"JSON({"op": "lipschitz", "u": "u", "expect_grad_sup": 2, "tol": 1e-9,
              "ratio_bound": 1e-9})JSON",
      R"JSON({"op": "geodesic", "source": 0.1, "to": 0.9, "expect": 0.8, "tol": 1e-9,
              "export": "geodesic.csv"})JSON",
      R"JSON({"op": "domain_constant", "pairs": 100, "expect": 1.0, "tol": 1e-12})JSON"};
  RunOptions o;
  o.out_dir = "/tmp/supremal_geo_out";
  Report rep = run_scenario_with_ops(kMinimal, "quotient-ops", ops, o);
  CHECK(rep.pass());
  CHECK(fs::exists("/tmp/supremal_geo_out/geodesic.csv"));
}
