#pragma once

#include <Eigen/Dense>

#include "cra/graph.hpp"
#include "cra/problems.hpp"

namespace cra {

/// Degree-based greedy MIS: repeatedly take a minimum-degree node of the
/// residual graph (ties broken by a seed-shuffled order), add it to the set,
/// delete it and its neighbors. Always returns a maximal independent set.
Eigen::VectorXi dgaMis(const Graph& g, RngSeed seed);

/// Random greedy MIS: as above but the next node is drawn uniformly from the
/// residual graph.
Eigen::VectorXi rgaMis(const Graph& g, RngSeed seed);

/// Sequential greedy placement in seed-shuffled order followed by 1-flip
/// local improvement until no single flip increases the cut.
Eigen::VectorXi greedyMaxcut(const Graph& g, RngSeed seed);

double cutValue(const Graph& g, const Eigen::Ref<const Eigen::VectorXi>& x);

struct OracleBudget {
  int maxNodes = 20;
  long long maxStates = 1LL << 20;
};

struct BruteForceResult {
  Eigen::MatrixXi bestX;          // optimum of the penalized objective
  double bestCost = 0.0;
  Eigen::MatrixXi bestFeasibleX;  // optimum restricted to feasible solutions
  double bestFeasibleCost = 0.0;
  bool hasFeasible = false;
};

namespace detail {

template <typename Problem>
long long stateCount(const Problem& pr, const OracleBudget& budget) {
  const auto [rows, cols] = stateShape(pr);
  const long long vars = static_cast<long long>(rows) * cols;
  if constexpr (ProblemTraits<Problem>::potts) {
    if (rows > budget.maxNodes) throw std::invalid_argument("instance exceeds oracle node budget");
    long long states = 1;
    for (int i = 0; i < rows; ++i) {
      states *= cols;
      if (states > budget.maxStates) throw std::invalid_argument("instance exceeds oracle state budget");
    }
    return states;
  } else {
    if (vars > budget.maxNodes) throw std::invalid_argument("instance exceeds oracle node budget");
    const long long states = 1LL << vars;
    if (states > budget.maxStates) throw std::invalid_argument("instance exceeds oracle state budget");
    return states;
  }
}

}  // namespace detail

/// Exact optimum of the discrete penalized objective by exhaustive
/// enumeration; also reports the best feasible solution.
template <typename Problem>
BruteForceResult bruteForce(const Problem& pr, const OracleBudget& budget = {}) {
  const auto [rows, cols] = detail::stateShape(pr);
  const long long states = detail::stateCount(pr, budget);

  BruteForceResult best;
  Eigen::MatrixXi x(rows, ProblemTraits<Problem>::potts ? 1 : cols);
  bool first = true;
  for (long long code = 0; code < states; ++code) {
    if constexpr (ProblemTraits<Problem>::potts) {
      long long c = code;
      for (int i = 0; i < rows; ++i) {
        x(i, 0) = static_cast<int>(c % cols);
        c /= cols;
      }
    } else {
      for (int k = 0; k < rows * cols; ++k) x(k % rows, k / rows) = (code >> k) & 1;
    }
    DiscreteEval eval = detail::evalRounded(pr, x);
    if (first || eval.cost < best.bestCost) {
      best.bestCost = eval.cost;
      best.bestX = x;
    }
    if (eval.feasible && (!best.hasFeasible || eval.cost < best.bestFeasibleCost)) {
      best.bestFeasibleCost = eval.cost;
      best.bestFeasibleX = x;
      best.hasFeasible = true;
    }
    first = false;
  }
  return best;
}

}  // namespace cra
