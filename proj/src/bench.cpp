#include "cra/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <thread>

#include "cra/baselines.hpp"
#include "cra/metrics.hpp"

namespace cra {

namespace {

namespace fs = std::filesystem;

double sampleStd(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

double sampleMean(const std::vector<double>& xs) {
  double acc = 0.0;
  for (double x : xs) acc += x;
  return xs.empty() ? 0.0 : acc / static_cast<double>(xs.size());
}

struct Cell {
  int n = 0;
  double dOrP = 0.0;
  std::string label;  // gset stem when applicable
  std::vector<Graph> instances;
  std::vector<RngSeed> instanceSeeds;
};

std::string fileStem(const std::string& path) { return fs::path(path).stem().string(); }

std::vector<Cell> buildCells(const BenchSuite& suite) {
  std::vector<Cell> cells;
  if (suite.family == "gset") {
    for (const auto& file : suite.files) {
      Cell cell;
      cell.label = fileStem(file);
      cell.instances.push_back(parseGsetFile(file));
      cell.instanceSeeds.push_back(0);
      cell.n = cell.instances[0].numNodes();
      cell.dOrP = cell.n > 0 ? 2.0 * cell.instances[0].numEdges() / cell.n : 0.0;
      cells.push_back(std::move(cell));
    }
    return cells;
  }
  for (int n : suite.sizes) {
    for (double d : suite.degrees) {
      Cell cell;
      cell.n = n;
      cell.dOrP = d;
      for (int i = 0; i < suite.instancesPerCell; ++i) {
        const RngSeed seed = suite.instanceSeed0 + static_cast<RngSeed>(i);
        cell.instanceSeeds.push_back(seed);
        if (suite.family == "rrg")
          cell.instances.push_back(generateRrg(n, static_cast<int>(d), seed));
        else if (suite.family == "erg")
          cell.instances.push_back(generateErg(n, d, seed));
        else
          throw std::invalid_argument("unknown instance family '" + suite.family + "'");
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::optional<double> referenceSize(const BenchSuite& suite, const Cell& cell,
                                    const Graph& instance) {
  if (suite.reference == "none") return std::nullopt;
  if (suite.reference == "best_known") {
    if (auto best = gsetBestKnown(cell.label)) return best;
    return std::nullopt;
  }
  if (suite.reference == "theory") {
    if (suite.problem == "maxcut")
      return maxcutUpperBound(static_cast<int>(cell.dOrP)) * instance.numNodes();
    const auto table = misTheoryTable();
    if (auto it = table.find(static_cast<int>(cell.dOrP)); it != table.end())
      return it->second * instance.numNodes();
    return std::nullopt;
  }
  if (suite.reference == "exact") {
    if (instance.numNodes() > OracleBudget{}.maxNodes) return std::nullopt;
    if (suite.problem == "maxcut") {
      MaxCutProblem pr{&instance};
      return -bruteForce(pr).bestFeasibleCost;  // max cut value
    }
    MisProblem pr{&instance, suite.misLambda};
    return -bruteForce(pr).bestFeasibleCost;  // optimal set size
  }
  throw std::invalid_argument("unknown reference kind '" + suite.reference + "'");
}

struct InstanceScore {
  double quantity = 0.0;  // set size or cut value; 0 when infeasible
  std::optional<double> apr;
  const SolveResult* traces = nullptr;
};

// Invalid (constraint-violating) solutions score 0, matching how failed
// un-annealed runs are reported.
double solutionQuantity(const std::string& problem, const Graph& g,
                        const Eigen::VectorXi& x, double misLambda) {
  if (problem == "maxcut") return cutValue(g, x);
  MisProblem pr{&g, misLambda};
  DiscreteEval eval = evaluateDiscrete(pr, x);
  return eval.feasible ? static_cast<double>(x.sum()) : 0.0;
}

struct CellTaskResult {
  std::vector<double> quantities;
  std::vector<double> ratios;  // quantity / n
  std::vector<double> aprs;    // only when reference known
  std::optional<double> reference;
  double wallTime = 0.0;
  int seedCount = 0;
  std::string configHash;
  std::vector<SolveResult> results;  // kept only in trace mode
};

CellTaskResult runCellSolver(const BenchSuite& suite, const Cell& cell, const SolverSpec& spec,
                             bool keepTraces) {
  CellTaskResult out;
  const auto start = std::chrono::steady_clock::now();
  for (size_t i = 0; i < cell.instances.size(); ++i) {
    const Graph& g = cell.instances[i];
    if (spec.kind == "baseline") {
      out.seedCount = spec.baselineSeeds;
      // baselines are cheap; average the quantity over their own seeds
      std::vector<double> qs;
      for (int s = 0; s < spec.baselineSeeds; ++s) {
        Eigen::VectorXi xs;
        if (spec.baseline == "dga")
          xs = dgaMis(g, static_cast<RngSeed>(s));
        else if (spec.baseline == "rga")
          xs = rgaMis(g, static_cast<RngSeed>(s));
        else if (spec.baseline == "greedy-maxcut")
          xs = greedyMaxcut(g, static_cast<RngSeed>(s));
        else
          throw std::invalid_argument("unknown baseline '" + spec.baseline + "'");
        qs.push_back(solutionQuantity(suite.problem, g, xs, suite.misLambda));
      }
      out.quantities.push_back(sampleMean(qs));
    } else {
      out.seedCount = static_cast<int>(spec.config.seeds.size());
      SolveResult result;
      if (suite.problem == "maxcut") {
        MaxCutProblem pr{&g};
        result = solve(pr, spec.config);
      } else {
        MisProblem pr{&g, suite.misLambda};
        result = solve(pr, spec.config);
      }
      double q = solutionQuantity(suite.problem, g, result.bestX.col(0), suite.misLambda);
      if (!result.feasible) q = 0.0;
      out.quantities.push_back(q);
      if (keepTraces) out.results.push_back(std::move(result));
    }
    out.ratios.push_back(out.quantities.back() / g.numNodes());
    auto ref = referenceSize(suite, cell, g);
    if (ref) {
      out.reference = ref;
      if (auto apr = approximationRatio(out.quantities.back(), ref)) out.aprs.push_back(*apr);
    }
  }
  out.wallTime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (spec.kind == "cra") out.configHash = fnv1aHex(solveConfigToJson(spec.config).dump());
  return out;
}

void appendRows(std::vector<MetricReport>& rows, const BenchSuite& suite, const Cell& cell,
                const SolverSpec& spec, const CellTaskResult& r) {
  MetricReport base;
  base.suite = suite.name;
  base.problem = suite.problem;
  base.n = cell.n;
  base.dOrP = cell.dOrP;
  base.solver = spec.name;
  base.seedCount = r.seedCount;
  base.referenceKind = suite.reference;
  base.referenceValue = r.reference;
  base.wallTimeSeconds = r.wallTime;
  base.instanceSeeds = cell.instanceSeeds;
  base.configHash = r.configHash;

  MetricReport ratio = base;
  ratio.metricName = suite.problem == "maxcut" ? "cut_ratio" : "is_density";
  ratio.values = r.ratios;
  ratio.mean = sampleMean(r.ratios);
  ratio.std = sampleStd(r.ratios, ratio.mean);
  rows.push_back(std::move(ratio));

  MetricReport apr = base;
  apr.metricName = "apr";
  apr.values = r.aprs;
  if (!r.aprs.empty()) {
    apr.mean = sampleMean(r.aprs);
    apr.std = sampleStd(r.aprs, apr.mean);
  } else {
    apr.mean = std::numeric_limits<double>::quiet_NaN();
    apr.std = std::numeric_limits<double>::quiet_NaN();
  }
  rows.push_back(std::move(apr));
}

void writeTraceCsv(const std::string& path, const BenchSuite& suite, const SolverSpec& spec,
                   const CellTaskResult& r) {
  std::ostringstream os;
  os << "instance,seed,epoch,loss,phi,gamma,mean_p\n";
  for (size_t inst = 0; inst < r.results.size(); ++inst) {
    const auto& result = r.results[inst];
    for (const auto& run : result.perSeed) {
      for (size_t k = 0; k < run.costTrace.size(); ++k) {
        os << inst << "," << run.seed << "," << k * spec.config.traceEvery << ","
           << formatDouble(run.costTrace[k]) << "," << formatDouble(run.phiTrace[k]) << ","
           << formatDouble(run.gammaTrace[k]) << "," << formatDouble(run.meanPTrace[k]) << "\n";
      }
    }
  }
  (void)suite;
  writeTextFile(path, os.str());
}

}  // namespace

SolverSpec parseSolverSpec(const Json& j, const std::string& problem) {
  SolverSpec spec;
  spec.name = j.at("name").get<std::string>();
  if (j.contains("baseline")) {
    spec.kind = "baseline";
    spec.baseline = j.at("baseline").get<std::string>();
    spec.baselineSeeds = j.value("seeds", 5);
    return spec;
  }
  SolveConfig& c = spec.config;
  c.arch = archFromName(j.value("parametrization", std::string("gcn")));
  if (j.value("no_anneal", false)) {
    c.schedule.reset();
  } else {
    AnnealSchedule s;
    s.gamma0 = j.value("gamma0", problem == "maxcut" ? -6.0 : -20.0);
    s.rate = j.value("rate", 1e-3);
    s.alpha = j.value("alpha", 2);
    if (j.contains("gamma_cap")) s.gammaCap = j.at("gamma_cap").get<double>();
    c.schedule = s;
  }
  const int seedCount = j.value("seeds", 5);
  const RngSeed seed0 = j.value("seed0", 0);
  c.seeds.clear();
  for (int s = 0; s < seedCount; ++s) c.seeds.push_back(seed0 + static_cast<RngSeed>(s));
  c.maxEpochs = j.value("max_epochs", 50000L);
  c.stop.tolerance = j.value("tolerance", 1e-5);
  c.stop.patience = j.value("patience", 1000L);
  c.stop.phiThreshold = j.value("phi_threshold", 1e-6);
  c.optimizer.lr = j.value("lr", 1e-4);
  c.optimizer.weightDecay = j.value("weight_decay", 1e-2);
  c.threshold = j.value("threshold", 0.5);
  c.traceEvery = j.value("trace_every", 1L);
  c.initScale = j.value("init_scale", 1.0);
  if (j.contains("h0") || j.contains("h1")) {
    GnnDims dims = defaultGnnDims(1, 1);
    dims.h0 = j.value("h0", dims.h0);
    dims.h1 = j.value("h1", dims.h1);
    c.dims = dims;
  }
  c.validate();
  return spec;
}

BenchSuite parseSuite(const Json& j) {
  BenchSuite suite;
  suite.name = j.at("suite").get<std::string>();
  suite.problem = j.value("problem", std::string("mis"));
  if (suite.problem != "mis" && suite.problem != "maxcut")
    throw std::invalid_argument("benchmark suites support problems 'mis' and 'maxcut'");
  suite.family = j.value("family", std::string("rrg"));
  if (j.contains("sizes")) suite.sizes = j.at("sizes").get<std::vector<int>>();
  if (j.contains("degrees")) suite.degrees = j.at("degrees").get<std::vector<double>>();
  if (j.contains("edge_probs")) suite.degrees = j.at("edge_probs").get<std::vector<double>>();
  if (j.contains("files")) suite.files = j.at("files").get<std::vector<std::string>>();
  suite.instancesPerCell = j.value("instances_per_cell", 5);
  suite.instanceSeed0 = j.value("instance_seed0", 1);
  suite.misLambda = j.value("lambda", 2.0);
  suite.reference = j.value("reference", std::string("none"));
  suite.trace = j.value("trace", false);
  if (!j.contains("solvers") || j.at("solvers").empty())
    throw std::invalid_argument("suite must declare at least one solver");
  for (const auto& s : j.at("solvers")) suite.solvers.push_back(parseSolverSpec(s, suite.problem));
  if (suite.family == "gset") {
    if (suite.files.empty()) throw std::invalid_argument("gset suites need a 'files' list");
  } else if (suite.sizes.empty() || suite.degrees.empty()) {
    throw std::invalid_argument("suite needs nonempty 'sizes' and 'degrees'/'edge_probs'");
  }
  return suite;
}

std::string metricsCsv(const std::vector<MetricReport>& rows, bool includeTimings) {
  std::ostringstream os;
  os << "suite,problem,n,d_or_p,solver,seed_count,metric_name,mean,std,reference,wall_time_s\n";
  for (const auto& r : rows) {
    os << r.suite << "," << r.problem << "," << r.n << "," << formatDouble(r.dOrP) << ","
       << r.solver << "," << r.seedCount << "," << r.metricName << ",";
    if (std::isnan(r.mean))
      os << ",";
    else
      os << formatDouble(r.mean) << "," << formatDouble(r.std);
    os << ",";
    if (r.referenceValue) os << formatDouble(*r.referenceValue);
    os << ",";
    if (includeTimings) os << formatDouble(r.wallTimeSeconds);
    os << "\n";
  }
  return os.str();
}

BenchOutcome runBenchmark(const BenchSuite& suite, const std::string& outDir, int jobs,
                          bool includeTimings) {
  fs::create_directories(outDir);
  if (suite.trace) fs::create_directories(fs::path(outDir) / "traces");

  const std::vector<Cell> cells = buildCells(suite);
  struct Task {
    size_t cell;
    size_t solver;
  };
  std::vector<Task> tasks;
  for (size_t c = 0; c < cells.size(); ++c)
    for (size_t s = 0; s < suite.solvers.size(); ++s) tasks.push_back({c, s});

  std::vector<std::optional<CellTaskResult>> results(tasks.size());
  std::vector<std::string> failures(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      const size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      try {
        results[t] = runCellSolver(suite, cells[tasks[t].cell], suite.solvers[tasks[t].solver],
                                   suite.trace);
      } catch (const std::exception& e) {
        std::ostringstream os;
        os << "cell n=" << cells[tasks[t].cell].n << " d=" << cells[tasks[t].cell].dOrP
           << " solver=" << suite.solvers[tasks[t].solver].name << ": " << e.what();
        failures[t] = os.str();
      }
    }
  };
  const int workerCount = std::max(1, jobs);
  if (workerCount == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workerCount; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  BenchOutcome outcome;
  for (size_t t = 0; t < tasks.size(); ++t) {
    if (!failures[t].empty()) {
      outcome.failures.push_back(failures[t]);
      continue;
    }
    const Cell& cell = cells[tasks[t].cell];
    const SolverSpec& spec = suite.solvers[tasks[t].solver];
    appendRows(outcome.rows, suite, cell, spec, *results[t]);
    if (suite.trace && spec.kind == "cra") {
      std::ostringstream name;
      name << "trace_n" << cell.n << "_d" << formatDouble(cell.dOrP) << "_" << spec.name << ".csv";
      writeTraceCsv((fs::path(outDir) / "traces" / name.str()).string(), suite, spec,
                    *results[t]);
    }
  }

  writeTextFile((fs::path(outDir) / "results.csv").string(),
                metricsCsv(outcome.rows, includeTimings));

  Json summary;
  summary["suite"] = suite.name;
  summary["problem"] = suite.problem;
  summary["family"] = suite.family;
  summary["version"] = versionString();
  summary["reference"] = suite.reference;
  Json rows = Json::array();
  for (const auto& r : outcome.rows) {
    Json row;
    row["n"] = r.n;
    row["d_or_p"] = r.dOrP;
    row["solver"] = r.solver;
    row["seed_count"] = r.seedCount;
    row["metric_name"] = r.metricName;
    if (!std::isnan(r.mean)) {
      row["mean"] = r.mean;
      row["std"] = r.std;
    } else {
      row["mean"] = nullptr;
      row["std"] = nullptr;
    }
    if (r.referenceValue) row["reference_value"] = *r.referenceValue;
    row["values"] = r.values;
    row["instance_seeds"] = r.instanceSeeds;
    if (!r.configHash.empty()) row["config_hash"] = r.configHash;
    if (includeTimings) row["wall_time_s"] = r.wallTimeSeconds;
    rows.push_back(std::move(row));
  }
  summary["rows"] = std::move(rows);
  summary["failures"] = outcome.failures;
  writeJsonFile((fs::path(outDir) / "summary.json").string(), summary);
  return outcome;
}

BenchOutcome runSweep(const Json& sweepSpec, const std::string& outDir, int jobs,
                      bool includeTimings) {
  const std::string mode = sweepSpec.value("mode", std::string("gamma-rate"));
  Json suiteJson = sweepSpec;
  suiteJson.erase("mode");

  Json solverBase = sweepSpec.value("solver", Json::object());
  Json solvers = Json::array();
  if (mode == "alpha") {
    const std::vector<int> alphas =
        sweepSpec.value("alphas", std::vector<int>{2, 4, 6, 8});
    for (int a : alphas) {
      if (a < 2 || a % 2 != 0)
        throw std::invalid_argument("curve rate alpha must be an even integer >= 2");
      Json s = solverBase;
      s["alpha"] = a;
      s["name"] = "alpha" + std::to_string(a);
      solvers.push_back(std::move(s));
    }
  } else if (mode == "gamma-rate") {
    const auto gammas = sweepSpec.at("gamma0").get<std::vector<double>>();
    const auto rates = sweepSpec.at("rate").get<std::vector<double>>();
    for (double g : gammas)
      for (double r : rates) {
        Json s = solverBase;
        s["gamma0"] = g;
        s["rate"] = r;
        std::ostringstream name;
        name << "g" << formatDouble(g) << "_e" << formatDouble(r);
        s["name"] = name.str();
        solvers.push_back(std::move(s));
      }
  } else {
    throw std::invalid_argument("unknown sweep mode '" + mode + "'");
  }
  suiteJson.erase("solver");
  suiteJson.erase("gamma0");
  suiteJson.erase("rate");
  suiteJson.erase("alphas");
  suiteJson["solvers"] = std::move(solvers);
  return runBenchmark(parseSuite(suiteJson), outDir, jobs, includeTimings);
}

}  // namespace cra
