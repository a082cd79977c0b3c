#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cra/io.hpp"
#include "cra/solver.hpp"

namespace cra {

/// One solver column of a benchmark suite: either a relaxation solver run
/// (kind "cra", full SolveConfig) or a greedy baseline (kind "baseline").
struct SolverSpec {
  std::string name;
  std::string kind = "cra";  // "cra" | "baseline"
  SolveConfig config;
  std::string baseline;  // dga | rga | greedy-maxcut
  int baselineSeeds = 5;
};

struct BenchSuite {
  std::string name;
  std::string problem = "mis";  // mis | maxcut
  std::string family = "rrg";   // rrg | erg | gset
  std::vector<int> sizes;
  std::vector<double> degrees;     // rrg: node degree, erg: edge probability
  std::vector<std::string> files;  // gset instance paths
  int instancesPerCell = 5;
  RngSeed instanceSeed0 = 1;
  double misLambda = 2.0;
  std::string reference = "none";  // exact | theory | best_known | none
  bool trace = false;
  std::vector<SolverSpec> solvers;
};

BenchSuite parseSuite(const Json& j);
SolverSpec parseSolverSpec(const Json& j, const std::string& problem);

/// Aggregated metric for one (cell, solver, metric) triple, carrying enough
/// provenance to re-run the cell.
struct MetricReport {
  std::string suite;
  std::string problem;
  int n = 0;
  double dOrP = 0.0;
  std::string solver;
  int seedCount = 0;
  std::string metricName;  // is_density | cut_ratio | apr
  double mean = 0.0;
  double std = 0.0;
  std::string referenceKind;
  std::optional<double> referenceValue;
  double wallTimeSeconds = 0.0;
  std::vector<RngSeed> instanceSeeds;
  std::string configHash;
  std::vector<double> values;  // per-instance values behind mean/std
};

struct BenchOutcome {
  std::vector<MetricReport> rows;
  std::vector<std::string> failures;  // one message per failed cell
};

/// Runs every (cell, solver) pair, writes results.csv and summary.json under
/// outDir (plus traces/*.csv when the suite asks for them), and returns the
/// rows. Cells run on `jobs` workers; output order is deterministic.
BenchOutcome runBenchmark(const BenchSuite& suite, const std::string& outDir, int jobs,
                          bool includeTimings);

/// Grid sweeps reuse the benchmark machinery: "gamma-rate" expands a
/// gamma0 x rate grid, "alpha" expands a list of (even) curve rates; each
/// grid point becomes one solver column.
BenchOutcome runSweep(const Json& sweepSpec, const std::string& outDir, int jobs,
                      bool includeTimings);

std::string metricsCsv(const std::vector<MetricReport>& rows, bool includeTimings);

}  // namespace cra
