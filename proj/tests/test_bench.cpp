#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "cra/bench.hpp"

using namespace cra;
namespace fs = std::filesystem;

namespace {

Json tinySuite() {
  return Json::parse(R"({
    "suite": "unit-mis",
    "problem": "mis",
    "family": "rrg",
    "sizes": [8],
    "degrees": [3],
    "instances_per_cell": 2,
    "instance_seed0": 1,
    "reference": "exact",
    "solvers": [
      {"name": "cra-direct", "parametrization": "direct", "gamma0": -5, "rate": 1e-2,
       "lr": 0.1, "weight_decay": 0, "seeds": 3, "max_epochs": 8000},
      {"name": "dga", "baseline": "dga", "seeds": 3}
    ]
  })");
}

std::string tempDir(const std::string& tag) {
  auto dir = fs::temp_directory_path() / ("cra_bench_" + tag);
  fs::remove_all(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("suite parsing validates its inputs") {
  CHECK_THROWS_AS(parseSuite(Json::parse(R"({"suite":"x","solvers":[]})")),
                  std::exception);
  Json noSizes = tinySuite();
  noSizes.erase("sizes");
  CHECK_THROWS_AS(parseSuite(noSizes), std::invalid_argument);
  Json badProblem = tinySuite();
  badProblem["problem"] = "tsp";
  CHECK_THROWS_AS(parseSuite(badProblem), std::invalid_argument);

  BenchSuite suite = parseSuite(tinySuite());
  CHECK(suite.solvers.size() == 2);
  CHECK(suite.solvers[0].kind == "cra");
  CHECK(suite.solvers[1].kind == "baseline");
}

TEST_CASE("benchmark run produces populated rows and files") {
  BenchSuite suite = parseSuite(tinySuite());
  const std::string dir = tempDir("run");
  BenchOutcome outcome = runBenchmark(suite, dir, 1, false);
  CHECK(outcome.failures.empty());
  REQUIRE(outcome.rows.size() == 4);  // 2 solvers x (density, apr)

  for (const auto& row : outcome.rows) {
    if (row.metricName == "apr") {
      REQUIRE(row.referenceValue.has_value());
      CHECK(row.mean > 0.0);
      CHECK(row.mean <= 1.0 + 1e-12);  // exact reference bounds feasible solutions
    } else {
      CHECK(row.metricName == "is_density");
      CHECK(row.mean > 0.0);
    }
    CHECK(row.std >= 0.0);
    CHECK(row.instanceSeeds.size() == 2);
  }

  CHECK(fs::exists(fs::path(dir) / "results.csv"));
  CHECK(fs::exists(fs::path(dir) / "summary.json"));

  const std::string csv = readTextFile((fs::path(dir) / "results.csv").string());
  CHECK(csv.rfind("suite,problem,n,d_or_p,solver,seed_count,metric_name,mean,std,reference,"
                  "wall_time_s\n", 0) == 0);
}

TEST_CASE("benchmark outputs are byte-identical across runs and worker counts") {
  BenchSuite suite = parseSuite(tinySuite());
  const std::string dirA = tempDir("det_a");
  const std::string dirB = tempDir("det_b");
  runBenchmark(suite, dirA, 1, false);
  runBenchmark(suite, dirB, 3, false);
  CHECK(readTextFile(dirA + "/results.csv") == readTextFile(dirB + "/results.csv"));
  CHECK(readTextFile(dirA + "/summary.json") == readTextFile(dirB + "/summary.json"));
}

TEST_CASE("trace mode writes per-epoch csv") {
  Json j = tinySuite();
  j["trace"] = true;
  j["instances_per_cell"] = 1;
  j["solvers"][0]["max_epochs"] = 50;
  j["solvers"][0]["trace_every"] = 10;
  BenchSuite suite = parseSuite(j);
  const std::string dir = tempDir("trace");
  runBenchmark(suite, dir, 1, false);
  bool foundTrace = false;
  for (const auto& entry : fs::directory_iterator(fs::path(dir) / "traces")) {
    foundTrace = true;
    const std::string content = readTextFile(entry.path().string());
    CHECK(content.rfind("instance,seed,epoch,loss,phi,gamma,mean_p\n", 0) == 0);
  }
  CHECK(foundTrace);
}

TEST_CASE("failed cells are reported without aborting the suite") {
  Json j = tinySuite();
  j["family"] = "gset";
  j["files"] = {"/nonexistent/file.gset"};
  BenchSuite suite = parseSuite(j);
  const std::string dir = tempDir("fail");
  // instance loading happens inside the cell builder; missing files throw
  CHECK_THROWS(runBenchmark(suite, dir, 1, false));
}

TEST_CASE("alpha sweep expands solver columns and rejects odd alpha") {
  Json sweep = Json::parse(R"({
    "suite": "unit-alpha",
    "mode": "alpha",
    "problem": "mis",
    "family": "rrg",
    "sizes": [8],
    "degrees": [3],
    "instances_per_cell": 1,
    "instance_seed0": 1,
    "reference": "exact",
    "alphas": [2, 4],
    "solver": {"parametrization": "direct", "gamma0": -5, "rate": 1e-2,
               "lr": 0.1, "weight_decay": 0, "seeds": 2, "max_epochs": 6000}
  })");
  const std::string dir = tempDir("alpha");
  BenchOutcome outcome = runSweep(sweep, dir, 1, false);
  CHECK(outcome.failures.empty());
  CHECK(outcome.rows.size() == 4);  // 2 alphas x 2 metrics

  sweep["alphas"] = {2, 3};
  CHECK_THROWS_AS(runSweep(sweep, tempDir("alpha_bad"), 1, false), std::invalid_argument);
}

TEST_CASE("gamma-rate sweep expands the grid") {
  Json sweep = Json::parse(R"({
    "suite": "unit-grid",
    "mode": "gamma-rate",
    "problem": "mis",
    "family": "rrg",
    "sizes": [8],
    "degrees": [3],
    "instances_per_cell": 1,
    "instance_seed0": 1,
    "reference": "none",
    "gamma0": [-5, -2],
    "rate": [1e-2],
    "solver": {"parametrization": "direct", "lr": 0.1, "weight_decay": 0,
               "seeds": 2, "max_epochs": 6000}
  })");
  const std::string dir = tempDir("grid");
  BenchOutcome outcome = runSweep(sweep, dir, 1, false);
  CHECK(outcome.failures.empty());
  CHECK(outcome.rows.size() == 4);  // 2 grid points x 2 metrics
  // no reference: apr rows empty-mean
  int emptyApr = 0;
  for (const auto& row : outcome.rows)
    if (row.metricName == "apr" && std::isnan(row.mean)) ++emptyApr;
  CHECK(emptyApr == 2);
}
