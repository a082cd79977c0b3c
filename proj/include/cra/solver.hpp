#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <future>
#include <optional>
#include <vector>

#include "cra/optimizer.hpp"
#include "cra/parametrization.hpp"
#include "cra/penalty.hpp"
#include "cra/problems.hpp"

namespace cra {

struct SolveConfig {
  Arch arch = Arch::gcn;
  std::optional<AnnealSchedule> schedule = AnnealSchedule{};  // nullopt: gamma == 0 baseline
  StopPolicy stop;
  long maxEpochs = 50000;
  std::vector<RngSeed> seeds = {0, 1, 2, 3, 4};
  double threshold = 0.5;
  std::optional<GnnDims> dims;  // default int(N^0.8) rule when unset
  AdamWSettings optimizer;
  double initScale = 1.0;
  long traceEvery = 1;
  int jobs = 1;  // concurrent seeds
  PenaltyKind penalty = PenaltyKind::polynomial;
  bool keepParams = false;  // retain each seed's trained parameters (checkpoints)

  void validate() const {
    if (maxEpochs < 1) throw std::invalid_argument("maxEpochs must be >= 1");
    if (seeds.empty()) throw std::invalid_argument("need at least one seed");
    if (traceEvery < 1) throw std::invalid_argument("traceEvery must be >= 1");
    if (schedule) schedule->validate();
    stop.validate();
  }
};

struct SeedRun {
  RngSeed seed = 0;
  long epochs = 0;
  StopReason stopReason = StopReason::none;
  double finalDiscreteness = 0.0;  // max_i over min(p_i, 1 - p_i), Potts: 1 - max_k P_ik
  double finalLoss = 0.0;
  double finalPhi = 0.0;
  DiscreteEval eval;
  Eigen::MatrixXi x;  // rounded solution of this seed
  long skippedSteps = 0;
  std::optional<Params<double>> params;  // only with SolveConfig::keepParams
  std::vector<double> costTrace;   // relaxed loss l, sampled every traceEvery epochs
  std::vector<double> phiTrace;
  std::vector<double> gammaTrace;
  std::vector<double> meanPTrace;
};

struct SolveResult {
  Eigen::MatrixXi bestX;
  double bestCost = 0.0;
  bool feasible = false;
  int bestSeedIndex = -1;
  std::vector<SeedRun> perSeed;
  double wallTimeSeconds = 0.0;
};

/// 0/1 rounding with the boundary sent to 0: x_i = 0 iff p_i <= threshold.
inline Eigen::MatrixXi roundSolution(const Eigen::Ref<const Eigen::MatrixXd>& p,
                                     double threshold = 0.5) {
  return (p.array() > threshold).cast<int>();
}

/// Potts rounding: per-row argmax, ties resolved toward the lowest index.
inline Eigen::VectorXi roundPotts(const Eigen::Ref<const Eigen::MatrixXd>& P) {
  Eigen::VectorXi colors(P.rows());
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    int best = 0;
    for (int k = 1; k < P.cols(); ++k)
      if (P(i, k) > P(i, best)) best = k;
    colors[i] = best;
  }
  return colors;
}

namespace detail {

inline double discreteness(const Eigen::MatrixXd& p, bool potts) {
  if (!potts) return p.array().min(1.0 - p.array()).maxCoeff();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    worst = std::max(worst, 1.0 - p.row(i).maxCoeff());
  return worst;
}

template <typename Problem>
SeedRun runSingleSeed(const Problem& problem, const SolveConfig& config,
                      const MeanAggregator<double>* agg, RngSeed seed) {
  constexpr bool potts = ProblemTraits<Problem>::potts;
  const auto [rows, cols] = stateShape(problem);
  const long numVars = static_cast<long>(rows) * cols;
  const int alpha = config.schedule ? config.schedule->alpha : 2;

  GnnDims dims = config.dims ? *config.dims : defaultGnnDims(rows, cols);
  dims.h2 = cols;
  Params<double> params =
      initParams<double>(config.arch, rows, cols, dims, potts, seed, config.initScale);
  AdamW<double> opt(config.optimizer, params.tensors);
  StopMonitor monitor(config.stop, numVars);

  SeedRun run;
  run.seed = seed;
  run.stopReason = StopReason::maxEpochs;

  ForwardCache<double> cache;
  Eigen::MatrixXd p;
  for (long epoch = 0; epoch < config.maxEpochs; ++epoch) {
    p = forward(params, agg, &cache);
    auto loss = relaxedLoss(problem, p);
    const double gamma = config.schedule ? config.schedule->gammaAt(epoch) : 0.0;

    double phiValue = 0.0;
    Eigen::MatrixXd upstream;
    if (config.penalty == PenaltyKind::entropy) {
      auto [pv, pg] = phiEntropy(p);
      phiValue = pv;
      upstream = loss.grad + gamma * pg;
    } else if constexpr (potts) {
      auto [pv, pg] = phiPottsShifted(p, alpha);
      phiValue = pv;
      upstream = loss.grad + gamma * pg;
    } else {
      auto [pv, pg] = phi(p, alpha);
      phiValue = pv;
      upstream = loss.grad + gamma * pg;
    }

    run.epochs = epoch + 1;
    if (epoch % config.traceEvery == 0) {
      run.costTrace.push_back(loss.value);
      run.phiTrace.push_back(phiValue);
      run.gammaTrace.push_back(gamma);
      run.meanPTrace.push_back(p.mean());
    }
    run.finalLoss = loss.value;
    run.finalPhi = phiValue;

    if (!std::isfinite(loss.value) || !std::isfinite(phiValue)) {
      run.stopReason = StopReason::nonFinite;
      break;
    }

    auto grads = backward(params, agg, cache, upstream);
    if (!opt.step(params.tensors, grads)) ++run.skippedSteps;

    const StopReason reason = monitor.update(loss.value, phiValue, gamma);
    if (reason != StopReason::none) {
      run.stopReason = reason;
      break;
    }
  }

  p = forward(params, agg, &cache);
  run.finalDiscreteness = discreteness(p, potts);
  if constexpr (potts) {
    run.x = roundPotts(p);
  } else {
    run.x = roundSolution(p, config.threshold);
  }
  run.eval = evalRounded(problem, run.x);
  if (config.keepParams) run.params = std::move(params);
  return run;
}

}  // namespace detail

/// Full multi-seed run: every seed trains independently (concurrently when
/// config.jobs > 1), solutions are rounded and evaluated, and the feasible
/// minimum-cost one wins. With no feasible seed the minimum-violation
/// solution is reported and `feasible` stays false.
template <typename Problem>
SolveResult solve(const Problem& problem, const SolveConfig& config) {
  config.validate();
  if constexpr (std::is_same_v<Problem, DbmProblem>) {
    if (config.arch != Arch::direct)
      throw std::invalid_argument("dbm instances have no graph; use the direct parametrization");
  }
  const auto start = std::chrono::steady_clock::now();

  std::optional<MeanAggregator<double>> agg;
  const Graph* graph = detail::problemGraph(problem);
  if (config.arch != Arch::direct) {
    if (!graph) throw std::invalid_argument("GNN parametrization requires a graph problem");
    agg.emplace(*graph);
  }
  const MeanAggregator<double>* aggPtr = agg ? &*agg : nullptr;

  SolveResult result;
  result.perSeed.resize(config.seeds.size());
  if (config.jobs > 1 && config.seeds.size() > 1) {
    std::vector<std::future<SeedRun>> futures;
    futures.reserve(config.seeds.size());
    for (RngSeed seed : config.seeds)
      futures.push_back(std::async(std::launch::async, [&, seed] {
        return detail::runSingleSeed(problem, config, aggPtr, seed);
      }));
    for (size_t i = 0; i < futures.size(); ++i) result.perSeed[i] = futures[i].get();
  } else {
    for (size_t i = 0; i < config.seeds.size(); ++i)
      result.perSeed[i] = detail::runSingleSeed(problem, config, aggPtr, config.seeds[i]);
  }

  int bestIdx = -1;
  for (size_t i = 0; i < result.perSeed.size(); ++i) {
    const SeedRun& run = result.perSeed[i];
    if (run.stopReason == StopReason::nonFinite) continue;
    if (bestIdx < 0) {
      bestIdx = static_cast<int>(i);
      continue;
    }
    const SeedRun& best = result.perSeed[bestIdx];
    const bool runBetter =
        run.eval.feasible != best.eval.feasible
            ? run.eval.feasible
            : (run.eval.feasible ? run.eval.cost < best.eval.cost
                                 : run.eval.violations < best.eval.violations);
    if (runBetter) bestIdx = static_cast<int>(i);
  }
  if (bestIdx >= 0) {
    result.bestSeedIndex = bestIdx;
    result.bestX = result.perSeed[bestIdx].x;
    result.bestCost = result.perSeed[bestIdx].eval.cost;
    result.feasible = result.perSeed[bestIdx].eval.feasible;
  }
  result.wallTimeSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

struct PlateauReport {
  long plateauEpochs = 0;
  long longestRun = 0;
  long firstEpoch = -1;
  bool plateaued = false;
};

/// Flags stretches where the loss sits at ~0 while the state has collapsed
/// toward p = 0, the failure mode of un-annealed runs on dense graphs.
/// Thresholds: |loss| <= lossTol and mean p < meanPTol, for at least minRun
/// consecutive epochs.
inline PlateauReport diagnosePlateau(const SeedRun& run, double lossTol = 0.5,
                                     double meanPTol = 0.01, long minRun = 50,
                                     long traceEvery = 1) {
  PlateauReport report;
  long current = 0;
  for (size_t i = 0; i < run.costTrace.size(); ++i) {
    const bool flat = std::abs(run.costTrace[i]) <= lossTol && run.meanPTrace[i] < meanPTol;
    if (flat) {
      if (current == 0 && report.firstEpoch < 0)
        report.firstEpoch = static_cast<long>(i) * traceEvery;
      ++current;
      report.plateauEpochs += traceEvery;
      report.longestRun = std::max(report.longestRun, current * traceEvery);
    } else {
      current = 0;
    }
  }
  report.plateaued = report.longestRun >= minRun;
  return report;
}

inline PlateauReport diagnosePlateau(const SolveResult& result, double lossTol = 0.5,
                                     double meanPTol = 0.01, long minRun = 50,
                                     long traceEvery = 1) {
  PlateauReport worst;
  for (const auto& run : result.perSeed) {
    PlateauReport r = diagnosePlateau(run, lossTol, meanPTol, minRun, traceEvery);
    if (r.longestRun > worst.longestRun) worst = r;
    worst.plateaued = worst.plateaued || r.plateaued;
    worst.plateauEpochs = std::max(worst.plateauEpochs, r.plateauEpochs);
  }
  return worst;
}

}  // namespace cra
