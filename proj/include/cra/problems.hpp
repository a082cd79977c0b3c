#pragma once

#include <Eigen/Dense>

#include "cra/graph.hpp"

namespace cra {

/// Penalty weights for multi-constraint problems (one entry per constraint
/// group, all nonnegative).
struct PenaltyWeights {
  Eigen::VectorXd lambda;

  void validate() const {
    if ((lambda.array() < 0).any())
      throw std::invalid_argument("penalty weights must be nonnegative");
  }
};

/// Maximum independent set: minimize  -sum_i p_i + lambda * sum_{(i,j) in E} p_i p_j.
/// lambda > 1 is required for the feasible-optimum guarantee; not enforced.
struct MisProblem {
  const Graph* graph = nullptr;
  double lambda = 2.0;
};

/// MaxCut in QUBO form: minimize  sum_{i<j} A_ij (2 p_i p_j - p_i - p_j).
/// The cut value is the negated objective. Negative weights are allowed.
struct MaxCutProblem {
  const Graph* graph = nullptr;
};

/// Diverse bipartite matching over an n1 x n2 likelihood matrix with row/column
/// degree caps and two diversity constraints, all folded in as ReLU penalties.
struct DbmProblem {
  Eigen::MatrixXd likelihood;  // C
  Eigen::MatrixXi sameField;   // M, entries in {0, 1}
  double pFrac = 0.25;
  double qFrac = 0.25;
  Eigen::Vector4d lambda{10.0, 10.0, 25.0, 25.0};

  int n1() const { return static_cast<int>(likelihood.rows()); }
  int n2() const { return static_cast<int>(likelihood.cols()); }
  void validate() const;
};

/// K-coloring as a Potts model: minimize the (relaxed) number of
/// monochromatic edges  sum_{(i,j) in E} w_ij sum_k P_ik P_jk.
struct ColoringProblem {
  const Graph* graph = nullptr;
  int numColors = 2;
};

struct LossGrad {
  double value = 0.0;
  Eigen::VectorXd grad;
};

struct LossGradMat {
  double value = 0.0;
  Eigen::MatrixXd grad;
};

LossGrad relaxedLoss(const MisProblem& pr, const Eigen::Ref<const Eigen::VectorXd>& p);
LossGrad relaxedLoss(const MaxCutProblem& pr, const Eigen::Ref<const Eigen::VectorXd>& p);
LossGradMat relaxedLoss(const DbmProblem& pr, const Eigen::Ref<const Eigen::MatrixXd>& p);
LossGradMat relaxedLoss(const ColoringProblem& pr, const Eigen::Ref<const Eigen::MatrixXd>& P);

struct DiscreteEval {
  double cost = 0.0;       // full penalized objective l(x)
  double objective = 0.0;  // cost minus penalty terms
  double penalty = 0.0;
  bool feasible = true;
  long violations = 0;  // number of violated constraint terms
};

DiscreteEval evaluateDiscrete(const MisProblem& pr, const Eigen::Ref<const Eigen::VectorXi>& x);
DiscreteEval evaluateDiscrete(const MaxCutProblem& pr, const Eigen::Ref<const Eigen::VectorXi>& x);
DiscreteEval evaluateDiscrete(const DbmProblem& pr, const Eigen::Ref<const Eigen::MatrixXi>& x);
/// Colors are category indices in [0, K); every assignment is feasible and the
/// cost counts (weighted) monochromatic edges.
DiscreteEval evaluateDiscrete(const ColoringProblem& pr,
                              const Eigen::Ref<const Eigen::VectorXi>& colors);

/// Synthetic DBM instance: C ~ U[0,1), two random field labels per side,
/// sameField_ij = [field(i) == field(j)].
DbmProblem generateDbm(int n1, int n2, double pFrac, double qFrac, Eigen::Vector4d lambda,
                       RngSeed seed);

/// Compile-time description of each problem family used by the generic
/// solver: the relaxed-state shape and whether the state rows are Potts
/// (softmax head, argmax rounding) or independent binaries.
template <typename P>
struct ProblemTraits;

template <>
struct ProblemTraits<MisProblem> {
  static constexpr bool potts = false;
  static constexpr const char* name = "mis";
};
template <>
struct ProblemTraits<MaxCutProblem> {
  static constexpr bool potts = false;
  static constexpr const char* name = "maxcut";
};
template <>
struct ProblemTraits<DbmProblem> {
  static constexpr bool potts = false;
  static constexpr const char* name = "dbm";
};
template <>
struct ProblemTraits<ColoringProblem> {
  static constexpr bool potts = true;
  static constexpr const char* name = "coloring";
};

namespace detail {

/// Shape of the relaxed state: (N, 1) for node binaries, (N, K) for Potts,
/// (n1, n2) for matching grids.
template <typename Problem>
std::pair<int, int> stateShape(const Problem& pr) {
  if constexpr (std::is_same_v<Problem, DbmProblem>) {
    return {pr.n1(), pr.n2()};
  } else if constexpr (std::is_same_v<Problem, ColoringProblem>) {
    return {pr.graph->numNodes(), pr.numColors};
  } else {
    return {pr.graph->numNodes(), 1};
  }
}

template <typename Problem>
const Graph* problemGraph(const Problem& pr) {
  if constexpr (std::is_same_v<Problem, DbmProblem>)
    return nullptr;
  else
    return pr.graph;
}

/// Evaluates a rounded solution in the representation evaluateDiscrete
/// expects (color column for Potts, binary matrix otherwise).
template <typename Problem>
DiscreteEval evalRounded(const Problem& pr, const Eigen::MatrixXi& x) {
  if constexpr (ProblemTraits<Problem>::potts) {
    return evaluateDiscrete(pr, Eigen::VectorXi(x.col(0)));
  } else if constexpr (std::is_same_v<Problem, DbmProblem>) {
    return evaluateDiscrete(pr, x);
  } else {
    return evaluateDiscrete(pr, Eigen::VectorXi(x.col(0)));
  }
}

}  // namespace detail

}  // namespace cra
