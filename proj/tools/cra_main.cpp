#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <thread>

#include "cra/baselines.hpp"
#include "cra/bench.hpp"
#include "cra/io.hpp"
#include "cra/metrics.hpp"
#include "cra/solver.hpp"

namespace fs = std::filesystem;
using namespace cra;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitPartialFailure = 4;

int defaultJobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string joinCommandLine(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

std::string defaultManifestPath(const std::string& outPath) {
  return outPath + ".manifest.json";
}

// Options shared by solve/exact/baseline: which instance and which problem.
struct InstanceOptions {
  std::string instancePath;
  std::string format = "auto";
  std::string problem = "mis";
  double lambda = 2.0;
  int colors = 2;
};

void addInstanceOptions(CLI::App* cmd, InstanceOptions& opt, bool needProblem = true) {
  cmd->add_option("instance", opt.instancePath, "instance file (graph or DBM json)")
      ->required();
  cmd->add_option("--format", opt.format, "graph file format: auto|edges|gset")
      ->check(CLI::IsMember({"auto", "edges", "gset"}));
  if (needProblem)
    cmd->add_option("--problem", opt.problem, "problem family")
        ->check(CLI::IsMember({"mis", "maxcut", "coloring", "dbm"}))
        ->required();
  cmd->add_option("--lambda", opt.lambda, "MIS independence penalty weight (default 2)");
  cmd->add_option("--colors", opt.colors, "number of colors for coloring problems");
}

struct LoadedInstance {
  std::optional<Graph> graph;
  std::optional<DbmProblem> dbm;
  Json descriptor;
};

LoadedInstance loadInstance(const InstanceOptions& opt) {
  LoadedInstance inst;
  if (opt.problem == "dbm") {
    inst.dbm = dbmFromJson(readJsonFile(opt.instancePath));
    inst.descriptor["source"] = opt.instancePath;
    inst.descriptor["n1"] = inst.dbm->n1();
    inst.descriptor["n2"] = inst.dbm->n2();
  } else {
    inst.graph = loadGraphFile(opt.instancePath, opt.format);
    inst.descriptor["source"] = opt.instancePath;
    inst.descriptor["nodes"] = inst.graph->numNodes();
    inst.descriptor["edges"] = inst.graph->numEdges();
  }
  return inst;
}

// ---------------------------------------------------------------- generate

struct GenerateOptions {
  std::string kind;
  int n = 1000;
  int d = 20;
  double p = 0.05;
  int n1 = 50, n2 = 50;
  double pFrac = 0.25, qFrac = 0.25;
  std::vector<double> lambda = {10, 10, 25, 25};
  RngSeed seed = 1;
  std::string out = "instance.edges";
  std::string manifestPath;
};

int runGenerate(const GenerateOptions& opt, const std::string& commandLine) {
  Json config;
  config["kind"] = opt.kind;
  config["seed"] = opt.seed;
  if (opt.kind == "rrg") {
    config["n"] = opt.n;
    config["d"] = opt.d;
  } else if (opt.kind == "erg") {
    config["n"] = opt.n;
    config["p"] = opt.p;
  } else {
    config["n1"] = opt.n1;
    config["n2"] = opt.n2;
    config["p_frac"] = opt.pFrac;
    config["q_frac"] = opt.qFrac;
    config["lambda"] = opt.lambda;
  }

  RunManifest manifest;
  manifest.commandLine = commandLine;
  manifest.config = config;
  manifest.outputs = {opt.out};
  const std::string manifestPath =
      opt.manifestPath.empty() ? defaultManifestPath(opt.out) : opt.manifestPath;
  writeManifest(manifestPath, manifest);

  if (opt.kind == "rrg") {
    Graph g = generateRrg(opt.n, opt.d, opt.seed);
    writeTextFile(opt.out, toEdgeListString(g));
    std::cout << "wrote " << opt.out << " (" << g.numNodes() << " nodes, " << g.numEdges()
              << " edges)\n";
  } else if (opt.kind == "erg") {
    Graph g = generateErg(opt.n, opt.p, opt.seed);
    writeTextFile(opt.out, toEdgeListString(g));
    std::cout << "wrote " << opt.out << " (" << g.numNodes() << " nodes, " << g.numEdges()
              << " edges)\n";
  } else {
    if (opt.lambda.size() != 4)
      throw std::invalid_argument("--lambda needs exactly four values");
    DbmProblem pr = generateDbm(opt.n1, opt.n2, opt.pFrac, opt.qFrac,
                                Eigen::Vector4d(opt.lambda.data()), opt.seed);
    writeJsonFile(opt.out, dbmToJson(pr));
    std::cout << "wrote " << opt.out << " (" << (pr.n1() + pr.n2()) << " nodes, "
              << pr.n1() * pr.n2() << " pair variables)\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------------- solve

struct SolveOptions {
  InstanceOptions instance;
  std::string parametrization;  // empty: dbm -> direct, else gcn
  bool noAnneal = false;
  double gamma0 = 0;  // filled per problem unless set
  double rate = 1e-3;
  int alpha = 2;
  double gammaCap = 10.0;
  bool noGammaCap = false;
  double tolerance = 1e-5;
  long patience = 1000;
  double phiThreshold = 1e-6;
  double lr = 1e-4;
  double weightDecay = 1e-2;
  int seeds = 5;
  RngSeed seed0 = 0;
  long maxEpochs = 50000;
  double threshold = 0.5;
  long traceEvery = 1;
  double initScale = 1.0;
  int h0 = 0, h1 = 0;
  std::string penalty = "polynomial";
  int jobs = defaultJobs();
  bool timings = false;
  double bestKnown = 0.0;
  std::string out = "result.json";
  std::string manifestPath;
  std::string saveParams;
  std::string configPath;
};

void addSolveFlags(CLI::App* cmd, SolveOptions& opt) {
  addInstanceOptions(cmd, opt.instance);
  cmd->add_option("--parametrization", opt.parametrization, "direct|gcn|sage")
      ->check(CLI::IsMember({"direct", "gcn", "sage"}));
  cmd->add_flag("--no-anneal", opt.noAnneal, "disable annealing (plain gamma=0 baseline)");
  cmd->add_option("--gamma0", opt.gamma0, "initial gamma (default -20, maxcut -6)");
  cmd->add_option("--rate", opt.rate, "gamma increment per epoch");
  cmd->add_option("--alpha", opt.alpha, "even curve rate of the penalty");
  cmd->add_option("--gamma-cap", opt.gammaCap, "upper bound on gamma");
  cmd->add_flag("--no-gamma-cap", opt.noGammaCap, "let gamma grow unbounded");
  cmd->add_option("--tolerance", opt.tolerance, "early-stopping improvement tolerance");
  cmd->add_option("--patience", opt.patience, "early-stopping patience (epochs)");
  cmd->add_option("--phi-threshold", opt.phiThreshold, "per-variable penalty zero cutoff");
  cmd->add_option("--lr", opt.lr, "AdamW learning rate");
  cmd->add_option("--weight-decay", opt.weightDecay, "AdamW weight decay");
  cmd->add_option("--seeds", opt.seeds, "number of restarts");
  cmd->add_option("--seed0", opt.seed0, "first restart seed");
  cmd->add_option("--max-epochs", opt.maxEpochs, "epoch budget per seed");
  cmd->add_option("--threshold", opt.threshold, "rounding threshold");
  cmd->add_option("--trace-every", opt.traceEvery, "trace sampling stride");
  cmd->add_option("--init-scale", opt.initScale, "parameter init scale");
  cmd->add_option("--h0", opt.h0, "hidden width H0 override");
  cmd->add_option("--h1", opt.h1, "hidden width H1 override");
  cmd->add_option("--penalty", opt.penalty, "polynomial|entropy (entropy is a demo mode)")
      ->check(CLI::IsMember({"polynomial", "entropy"}));
  cmd->add_option("--jobs", opt.jobs, "concurrent seeds");
  cmd->add_flag("--timings", opt.timings, "include wall times in outputs (non-reproducible)");
  cmd->add_option("--best-known", opt.bestKnown, "reference value for the ApR printout");
  cmd->add_option("--out", opt.out, "result json path");
  cmd->add_option("--manifest", opt.manifestPath, "manifest path (default <out>.manifest.json)");
  cmd->add_option("--save-params", opt.saveParams, "write the best seed's checkpoint here");
  cmd->add_option("--config", opt.configPath, "json config file (flags take precedence)");
}

/// Config file values fill any solve flag the command line left untouched.
/// A key that conflicts with an explicit flag is reported and ignored.
void applyConfigFile(CLI::App* cmd, SolveOptions& opt) {
  if (opt.configPath.empty()) return;
  const Json cfg = readJsonFile(opt.configPath);
  auto apply = [&](const std::string& key, const std::string& flag, auto& target) {
    if (!cfg.contains(key)) return;
    using T = std::decay_t<decltype(target)>;
    const T value = cfg.at(key).get<T>();
    if (cmd->count(flag) > 0) {
      if (value != target)
        std::cerr << "note: --" << key << " from the command line overrides the config file\n";
      return;
    }
    target = value;
  };
  apply("parametrization", "--parametrization", opt.parametrization);
  apply("gamma0", "--gamma0", opt.gamma0);
  apply("rate", "--rate", opt.rate);
  apply("alpha", "--alpha", opt.alpha);
  apply("gamma_cap", "--gamma-cap", opt.gammaCap);
  apply("tolerance", "--tolerance", opt.tolerance);
  apply("patience", "--patience", opt.patience);
  apply("phi_threshold", "--phi-threshold", opt.phiThreshold);
  apply("lr", "--lr", opt.lr);
  apply("weight_decay", "--weight-decay", opt.weightDecay);
  apply("seeds", "--seeds", opt.seeds);
  apply("seed0", "--seed0", opt.seed0);
  apply("max_epochs", "--max-epochs", opt.maxEpochs);
  apply("threshold", "--threshold", opt.threshold);
  apply("trace_every", "--trace-every", opt.traceEvery);
  apply("init_scale", "--init-scale", opt.initScale);
  apply("penalty", "--penalty", opt.penalty);
  if (cfg.contains("no_anneal") && cmd->count("--no-anneal") == 0)
    opt.noAnneal = cfg.at("no_anneal").get<bool>();
}

SolveConfig buildSolveConfig(const SolveOptions& opt, CLI::App* cmd) {
  SolveConfig config;
  if (!opt.parametrization.empty())
    config.arch = archFromName(opt.parametrization);
  else
    config.arch = opt.instance.problem == "dbm" ? Arch::direct : Arch::gcn;

  if (opt.noAnneal) {
    config.schedule.reset();
  } else {
    AnnealSchedule s;
    s.gamma0 = cmd->count("--gamma0") > 0 || opt.gamma0 != 0
                   ? opt.gamma0
                   : (opt.instance.problem == "maxcut" ? -6.0 : -20.0);
    s.rate = opt.rate;
    s.alpha = opt.alpha;
    if (opt.noGammaCap)
      s.gammaCap.reset();
    else
      s.gammaCap = opt.gammaCap;
    config.schedule = s;
  }
  config.stop.tolerance = opt.tolerance;
  config.stop.patience = opt.patience;
  config.stop.phiThreshold = opt.phiThreshold;
  config.optimizer.lr = opt.lr;
  config.optimizer.weightDecay = opt.weightDecay;
  config.maxEpochs = opt.maxEpochs;
  config.seeds.clear();
  for (int s = 0; s < opt.seeds; ++s) config.seeds.push_back(opt.seed0 + static_cast<RngSeed>(s));
  config.threshold = opt.threshold;
  config.traceEvery = opt.traceEvery;
  config.initScale = opt.initScale;
  config.penalty = opt.penalty == "entropy" ? PenaltyKind::entropy : PenaltyKind::polynomial;
  config.jobs = opt.jobs;
  config.keepParams = !opt.saveParams.empty();
  if (opt.h0 > 0 || opt.h1 > 0) {
    GnnDims dims{std::max(1, opt.h0), std::max(1, opt.h1), 1};
    config.dims = dims;
  }
  config.validate();
  return config;
}

std::optional<double> lookupBestKnown(const SolveOptions& opt) {
  if (opt.bestKnown != 0.0) return opt.bestKnown;
  return gsetBestKnown(fs::path(opt.instance.instancePath).stem().string());
}

template <typename Problem>
int solveAndReport(const Problem& problem, const SolveOptions& opt, const SolveConfig& config,
                   const LoadedInstance& inst) {
  SolveResult result = solve(problem, config);

  ResultJsonOptions jsonOpt;
  jsonOpt.includeTimings = opt.timings;
  const Json resultJson = solveResultToJson(result, ProblemTraits<Problem>::name,
                                            solveConfigToJson(config), inst.descriptor, jsonOpt);
  writeJsonFile(opt.out, resultJson);

  if (!opt.saveParams.empty() && result.bestSeedIndex >= 0 &&
      result.perSeed[result.bestSeedIndex].params) {
    writeJsonFile(opt.saveParams, paramsToJson(*result.perSeed[result.bestSeedIndex].params));
  }

  std::cout << "problem: " << ProblemTraits<Problem>::name << "\n";
  std::cout << "best cost: " << formatDouble(result.bestCost)
            << (result.feasible ? " (feasible)" : " (INFEASIBLE)") << "\n";
  if constexpr (std::is_same_v<Problem, MisProblem>) {
    std::cout << "set size: " << result.bestX.sum() << " of " << problem.graph->numNodes()
              << "\n";
  } else if constexpr (std::is_same_v<Problem, MaxCutProblem>) {
    const double cut = cutValue(*problem.graph, result.bestX.col(0));
    std::cout << "cut value: " << formatDouble(cut) << "\n";
    if (auto ref = lookupBestKnown(opt)) {
      if (auto apr = approximationRatio(cut, ref))
        std::cout << "ApR vs best known " << formatDouble(*ref) << ": " << formatDouble(*apr)
                  << "\n";
    }
  }
  for (const auto& run : result.perSeed)
    std::cout << "  seed " << run.seed << ": cost " << formatDouble(run.eval.cost) << ", "
              << run.epochs << " epochs, stop " << stopReasonName(run.stopReason)
              << ", discreteness " << formatDouble(run.finalDiscreteness) << "\n";

  PlateauReport plateau = diagnosePlateau(result, 0.5, 0.01, 50, config.traceEvery);
  if (plateau.plateaued)
    std::cout << "plateau detected: " << plateau.longestRun
              << " epochs pinned near zero loss with p ~ 0 (first at epoch "
              << plateau.firstEpoch << ")\n";
  if (opt.timings) std::cout << "wall time: " << formatDouble(result.wallTimeSeconds) << " s\n";
  return kExitOk;
}

int runSolve(SolveOptions& opt, CLI::App* cmd, const std::string& commandLine) {
  applyConfigFile(cmd, opt);
  const LoadedInstance inst = loadInstance(opt.instance);
  const SolveConfig config = buildSolveConfig(opt, cmd);

  RunManifest manifest;
  manifest.commandLine = commandLine;
  manifest.config = solveConfigToJson(config);
  manifest.config["problem"] = opt.instance.problem;
  manifest.config["instance"] = inst.descriptor;
  manifest.outputs = {opt.out};
  writeManifest(opt.manifestPath.empty() ? defaultManifestPath(opt.out) : opt.manifestPath,
                manifest);

  if (opt.instance.problem == "mis") {
    MisProblem pr{&*inst.graph, opt.instance.lambda};
    return solveAndReport(pr, opt, config, inst);
  }
  if (opt.instance.problem == "maxcut") {
    MaxCutProblem pr{&*inst.graph};
    return solveAndReport(pr, opt, config, inst);
  }
  if (opt.instance.problem == "coloring") {
    ColoringProblem pr{&*inst.graph, opt.instance.colors};
    return solveAndReport(pr, opt, config, inst);
  }
  DbmProblem pr = *inst.dbm;
  return solveAndReport(pr, opt, config, inst);
}

// ---------------------------------------------------------------- baseline

struct BaselineOptions {
  std::string algorithm;
  InstanceOptions instance;
  int seeds = 5;
  RngSeed seed0 = 0;
  std::string out = "baseline.json";
  std::string manifestPath;
};

int runBaseline(const BaselineOptions& opt, const std::string& commandLine) {
  const LoadedInstance inst = loadInstance(opt.instance);
  const Graph& g = *inst.graph;

  RunManifest manifest;
  manifest.commandLine = commandLine;
  manifest.config = {{"algorithm", opt.algorithm},
                     {"seeds", opt.seeds},
                     {"seed0", opt.seed0},
                     {"instance", inst.descriptor}};
  manifest.outputs = {opt.out};
  writeManifest(opt.manifestPath.empty() ? defaultManifestPath(opt.out) : opt.manifestPath,
                manifest);

  Json seedsJson = Json::array();
  double bestQuantity = -std::numeric_limits<double>::infinity();
  Eigen::VectorXi bestX;
  double sum = 0, sumSq = 0;
  for (int s = 0; s < opt.seeds; ++s) {
    const RngSeed seed = opt.seed0 + static_cast<RngSeed>(s);
    Eigen::VectorXi x;
    double quantity = 0;
    if (opt.algorithm == "dga" || opt.algorithm == "rga") {
      x = opt.algorithm == "dga" ? dgaMis(g, seed) : rgaMis(g, seed);
      quantity = x.sum();
    } else {
      x = greedyMaxcut(g, seed);
      quantity = cutValue(g, x);
    }
    if (quantity > bestQuantity) {
      bestQuantity = quantity;
      bestX = x;
    }
    sum += quantity;
    sumSq += quantity * quantity;
    seedsJson.push_back({{"seed", seed}, {"value", quantity}});
  }
  const double mean = sum / opt.seeds;
  const double var = opt.seeds > 1
                         ? std::max(0.0, (sumSq - opt.seeds * mean * mean) / (opt.seeds - 1))
                         : 0.0;

  Json out;
  out["schema_version"] = 1;
  out["algorithm"] = opt.algorithm;
  out["instance"] = inst.descriptor;
  out["seeds"] = seedsJson;
  out["mean"] = mean;
  out["std"] = std::sqrt(var);
  out["best"] = bestQuantity;
  Json xj = Json::array();
  for (Eigen::Index i = 0; i < bestX.size(); ++i) xj.push_back(bestX[i]);
  out["best_x"] = std::move(xj);
  writeJsonFile(opt.out, out);

  std::cout << opt.algorithm << ": mean " << formatDouble(mean) << ", std "
            << formatDouble(std::sqrt(var)) << ", best " << formatDouble(bestQuantity) << " over "
            << opt.seeds << " seeds\n";
  return kExitOk;
}

// ------------------------------------------------------------------- exact

struct ExactOptions {
  InstanceOptions instance;
  int maxNodes = 20;
  long long maxStates = 1LL << 20;
  std::string out = "exact.json";
  std::string manifestPath;
};

int runExact(const ExactOptions& opt, const std::string& commandLine) {
  const LoadedInstance inst = loadInstance(opt.instance);

  RunManifest manifest;
  manifest.commandLine = commandLine;
  manifest.config = {{"problem", opt.instance.problem}, {"instance", inst.descriptor}};
  manifest.outputs = {opt.out};
  writeManifest(opt.manifestPath.empty() ? defaultManifestPath(opt.out) : opt.manifestPath,
                manifest);

  OracleBudget budget;
  budget.maxNodes = opt.maxNodes;
  budget.maxStates = opt.maxStates;

  BruteForceResult r;
  if (opt.instance.problem == "mis") {
    MisProblem pr{&*inst.graph, opt.instance.lambda};
    r = bruteForce(pr, budget);
  } else if (opt.instance.problem == "maxcut") {
    MaxCutProblem pr{&*inst.graph};
    r = bruteForce(pr, budget);
  } else if (opt.instance.problem == "coloring") {
    ColoringProblem pr{&*inst.graph, opt.instance.colors};
    r = bruteForce(pr, budget);
  } else {
    r = bruteForce(*inst.dbm, budget);
  }

  Json out;
  out["schema_version"] = 1;
  out["problem"] = opt.instance.problem;
  out["instance"] = inst.descriptor;
  out["optimal_cost"] = r.bestCost;
  out["feasible_optimal_cost"] = r.hasFeasible ? Json(r.bestFeasibleCost) : Json(nullptr);
  Json xj = Json::array();
  for (Eigen::Index i = 0; i < r.bestFeasibleX.rows(); ++i)
    for (Eigen::Index k = 0; k < r.bestFeasibleX.cols(); ++k)
      xj.push_back(r.bestFeasibleX(i, k));
  out["feasible_optimal_x"] = std::move(xj);
  writeJsonFile(opt.out, out);

  std::cout << "optimal cost: " << formatDouble(r.bestCost) << "\n";
  if (r.hasFeasible)
    std::cout << "feasible optimal cost: " << formatDouble(r.bestFeasibleCost) << "\n";
  return kExitOk;
}

// ------------------------------------------------------------- bench/sweep

struct BenchOptions {
  std::string suitePath;
  std::string outDir = "bench-out";
  std::string runDir;
  int jobs = defaultJobs();
  bool timings = false;
};

int runBenchCommand(const BenchOptions& opt, bool sweepMode, const std::string& commandLine) {
  const Json spec = readJsonFile(opt.suitePath);
  const std::string suiteName = spec.value("suite", std::string("suite"));
  std::string runDir = opt.runDir;
  if (runDir.empty()) {
    std::string stamp = currentUtcTimestamp();
    for (auto& c : stamp)
      if (c == ':') c = '-';
    runDir = (fs::path(opt.outDir) / (suiteName + "-" + stamp)).string();
  }
  fs::create_directories(runDir);

  RunManifest manifest;
  manifest.commandLine = commandLine;
  manifest.config = spec;
  manifest.outputs = {runDir + "/results.csv", runDir + "/summary.json"};
  writeManifest((fs::path(runDir) / "manifest.json").string(), manifest);

  BenchOutcome outcome = sweepMode ? runSweep(spec, runDir, opt.jobs, opt.timings)
                                   : runBenchmark(parseSuite(spec), runDir, opt.jobs, opt.timings);

  std::cout << "wrote " << runDir << "/results.csv (" << outcome.rows.size() << " rows)\n";
  for (const auto& fail : outcome.failures) std::cerr << "cell failed: " << fail << "\n";
  return outcome.failures.empty() ? kExitOk : kExitPartialFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous relaxation annealing solver for graph optimization problems"};
  app.set_version_flag("--version", versionString());
  app.require_subcommand(1);
  const std::string commandLine = joinCommandLine(argc, argv);

  // generate
  auto* gen = app.add_subcommand("generate", "write a random instance file");
  gen->require_subcommand(1);
  GenerateOptions genOpt;
  auto addGenCommon = [&](CLI::App* sub) {
    sub->add_option("--seed", genOpt.seed, "generator seed");
    sub->add_option("--out", genOpt.out, "output path")->required();
    sub->add_option("--manifest", genOpt.manifestPath, "manifest path");
  };
  auto* genRrg = gen->add_subcommand("rrg", "random regular graph");
  genRrg->add_option("--n", genOpt.n, "nodes")->required();
  genRrg->add_option("--d", genOpt.d, "degree")->required();
  addGenCommon(genRrg);
  auto* genErg = gen->add_subcommand("erg", "Erdos-Renyi graph");
  genErg->add_option("--n", genOpt.n, "nodes")->required();
  genErg->add_option("--p", genOpt.p, "edge probability")->required();
  addGenCommon(genErg);
  auto* genDbm = gen->add_subcommand("dbm", "diverse bipartite matching instance");
  genDbm->add_option("--n1", genOpt.n1, "left side size");
  genDbm->add_option("--n2", genOpt.n2, "right side size");
  genDbm->add_option("--p-frac", genOpt.pFrac, "same-field diversity fraction");
  genDbm->add_option("--q-frac", genOpt.qFrac, "cross-field diversity fraction");
  genDbm->add_option("--lambda", genOpt.lambda, "four penalty weights")->expected(4);
  addGenCommon(genDbm);

  // solve
  auto* solveCmd = app.add_subcommand("solve", "train a relaxed solver on one instance");
  SolveOptions solveOpt;
  addSolveFlags(solveCmd, solveOpt);

  // baseline
  auto* baseCmd = app.add_subcommand("baseline", "greedy and exact reference solvers");
  baseCmd->require_subcommand(1);
  BaselineOptions baseOpt;
  ExactOptions exactOpt;
  auto addBaselineSub = [&](const std::string& name, const std::string& desc,
                            const std::string& problem) {
    auto* sub = baseCmd->add_subcommand(name, desc);
    addInstanceOptions(sub, baseOpt.instance, /*needProblem=*/false);
    baseOpt.instance.problem = problem;
    sub->add_option("--seeds", baseOpt.seeds, "number of randomized runs");
    sub->add_option("--seed0", baseOpt.seed0, "first seed");
    sub->add_option("--out", baseOpt.out, "output json");
    sub->add_option("--manifest", baseOpt.manifestPath, "manifest path");
    return sub;
  };
  auto* dgaCmd = addBaselineSub("dga", "degree-based greedy independent set", "mis");
  auto* rgaCmd = addBaselineSub("rga", "random greedy independent set", "mis");
  auto* gmcCmd = addBaselineSub("greedy-maxcut", "greedy cut with 1-flip polish", "maxcut");
  auto* exactSub = baseCmd->add_subcommand("exact", "exhaustive oracle for small instances");
  addInstanceOptions(exactSub, exactOpt.instance);
  exactSub->add_option("--max-nodes", exactOpt.maxNodes, "node budget");
  exactSub->add_option("--max-states", exactOpt.maxStates, "state budget");
  exactSub->add_option("--out", exactOpt.out, "output json");
  exactSub->add_option("--manifest", exactOpt.manifestPath, "manifest path");

  // exact (top-level alias)
  auto* exactCmd = app.add_subcommand("exact", "exhaustive oracle for small instances");
  ExactOptions exactTopOpt;
  addInstanceOptions(exactCmd, exactTopOpt.instance);
  exactCmd->add_option("--max-nodes", exactTopOpt.maxNodes, "node budget");
  exactCmd->add_option("--max-states", exactTopOpt.maxStates, "state budget");
  exactCmd->add_option("--out", exactTopOpt.out, "output json");
  exactCmd->add_option("--manifest", exactTopOpt.manifestPath, "manifest path");

  // bench / sweep
  auto* benchCmd = app.add_subcommand("bench", "run a benchmark suite from a json spec");
  BenchOptions benchOpt;
  benchCmd->add_option("suite", benchOpt.suitePath, "suite spec (json)")->required();
  benchCmd->add_option("--out-dir", benchOpt.outDir, "parent directory for run outputs");
  benchCmd->add_option("--run-dir", benchOpt.runDir, "exact output directory (no timestamp)");
  benchCmd->add_option("--jobs", benchOpt.jobs, "worker count");
  benchCmd->add_flag("--timings", benchOpt.timings, "include wall times (non-reproducible)");

  auto* sweepCmd = app.add_subcommand("sweep", "run a parameter sweep from a json spec");
  BenchOptions sweepOpt;
  sweepCmd->add_option("spec", sweepOpt.suitePath, "sweep spec (json)")->required();
  sweepCmd->add_option("--out-dir", sweepOpt.outDir, "parent directory for run outputs");
  sweepCmd->add_option("--run-dir", sweepOpt.runDir, "exact output directory (no timestamp)");
  sweepCmd->add_option("--jobs", sweepOpt.jobs, "worker count");
  sweepCmd->add_flag("--timings", sweepOpt.timings, "include wall times (non-reproducible)");

  try {
    app.parse(argc, argv);

    if (gen->parsed()) {
      if (genRrg->parsed()) genOpt.kind = "rrg";
      if (genErg->parsed()) genOpt.kind = "erg";
      if (genDbm->parsed()) genOpt.kind = "dbm";
      return runGenerate(genOpt, commandLine);
    }
    if (solveCmd->parsed()) return runSolve(solveOpt, solveCmd, commandLine);
    if (baseCmd->parsed()) {
      if (exactSub->parsed()) return runExact(exactOpt, commandLine);
      if (dgaCmd->parsed()) baseOpt.algorithm = "dga";
      if (rgaCmd->parsed()) baseOpt.algorithm = "rga";
      if (gmcCmd->parsed()) baseOpt.algorithm = "greedy-maxcut";
      return runBaseline(baseOpt, commandLine);
    }
    if (exactCmd->parsed()) return runExact(exactTopOpt, commandLine);
    if (benchCmd->parsed()) return runBenchCommand(benchOpt, false, commandLine);
    if (sweepCmd->parsed()) return runBenchCommand(sweepOpt, true, commandLine);
    return kExitValidation;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
