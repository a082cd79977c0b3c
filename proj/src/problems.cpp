#include "cra/problems.hpp"

#include <random>

namespace cra {

namespace {

void requireBinary(const Eigen::Ref<const Eigen::MatrixXi>& x) {
  if (((x.array() != 0) && (x.array() != 1)).any())
    throw std::invalid_argument("solution entries must be 0 or 1");
}

}  // namespace

void DbmProblem::validate() const {
  if (likelihood.rows() != sameField.rows() || likelihood.cols() != sameField.cols())
    throw std::invalid_argument("likelihood and sameField must share shape");
  if (((sameField.array() != 0) && (sameField.array() != 1)).any())
    throw std::invalid_argument("sameField entries must be 0 or 1");
  if (!(pFrac >= 0 && pFrac <= 1 && qFrac >= 0 && qFrac <= 1))
    throw std::invalid_argument("pFrac/qFrac must lie in [0, 1]");
  if ((lambda.array() < 0).any())
    throw std::invalid_argument("penalty weights must be nonnegative");
}

LossGrad relaxedLoss(const MisProblem& pr, const Eigen::Ref<const Eigen::VectorXd>& p) {
  const Graph& g = *pr.graph;
  if (p.size() != g.numNodes()) throw std::invalid_argument("state size != node count");
  Eigen::VectorXd q = g.adjacency() * p;  // q_i = sum_{j in N(i)} w_ij p_j
  LossGrad out;
  out.value = -p.sum() + 0.5 * pr.lambda * p.dot(q);
  out.grad = (pr.lambda * q).array() - 1.0;
  return out;
}

LossGrad relaxedLoss(const MaxCutProblem& pr, const Eigen::Ref<const Eigen::VectorXd>& p) {
  const Graph& g = *pr.graph;
  if (p.size() != g.numNodes()) throw std::invalid_argument("state size != node count");
  Eigen::VectorXd q = g.adjacency() * p;
  Eigen::VectorXd wd = g.weightedDegrees();
  LossGrad out;
  out.value = p.dot(q) - p.dot(wd);  // sum_{i<j} A_ij (2 p_i p_j - p_i - p_j)
  out.grad = 2.0 * q - wd;
  return out;
}

LossGradMat relaxedLoss(const DbmProblem& pr, const Eigen::Ref<const Eigen::MatrixXd>& p) {
  if (p.rows() != pr.likelihood.rows() || p.cols() != pr.likelihood.cols())
    throw std::invalid_argument("state shape != instance shape");

  const auto& C = pr.likelihood;
  const Eigen::ArrayXXd M = pr.sameField.cast<double>().array();
  const Eigen::ArrayXXd pa = p.array();

  LossGradMat out;
  out.value = -(C.array() * pa).sum();
  out.grad = -C;

  // Row and column caps: ReLU(sum - 1), subgradient 0 at the kink.
  Eigen::ArrayXd rowExcess = pa.rowwise().sum() - 1.0;
  Eigen::ArrayXd colExcess = pa.colwise().sum().transpose() - 1.0;
  out.value += pr.lambda[0] * rowExcess.max(0.0).sum();
  out.value += pr.lambda[1] * colExcess.max(0.0).sum();
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    if (rowExcess[i] > 0) out.grad.row(i).array() += pr.lambda[0];
  for (Eigen::Index j = 0; j < p.cols(); ++j)
    if (colExcess[j] > 0) out.grad.col(j).array() += pr.lambda[1];

  // Diversity terms over the whole selection.
  const double total = pa.sum();
  const double sameSum = (M * pa).sum();
  const double diffSum = ((1.0 - M) * pa).sum();
  const double a = pr.pFrac * total - sameSum;
  const double b = pr.qFrac * total - diffSum;
  if (a > 0) {
    out.value += pr.lambda[2] * a;
    out.grad.array() += pr.lambda[2] * (pr.pFrac - M);
  }
  if (b > 0) {
    out.value += pr.lambda[3] * b;
    out.grad.array() += pr.lambda[3] * (pr.qFrac - (1.0 - M));
  }
  return out;
}

LossGradMat relaxedLoss(const ColoringProblem& pr, const Eigen::Ref<const Eigen::MatrixXd>& P) {
  const Graph& g = *pr.graph;
  if (P.rows() != g.numNodes() || P.cols() != pr.numColors)
    throw std::invalid_argument("state shape != (nodes, colors)");
  Eigen::MatrixXd q = g.adjacency() * P;  // q_ik = sum_{j in N(i)} w_ij P_jk
  LossGradMat out;
  out.value = 0.5 * (P.array() * q.array()).sum();
  out.grad = std::move(q);
  return out;
}

DiscreteEval evaluateDiscrete(const MisProblem& pr, const Eigen::Ref<const Eigen::VectorXi>& x) {
  const Graph& g = *pr.graph;
  if (x.size() != g.numNodes()) throw std::invalid_argument("solution size != node count");
  requireBinary(x);
  DiscreteEval out;
  long conflicts = 0;
  for (const auto& e : g.edges())
    if (x[e.u] == 1 && x[e.v] == 1) ++conflicts;
  out.objective = -static_cast<double>(x.sum());
  out.penalty = pr.lambda * static_cast<double>(conflicts);
  out.cost = out.objective + out.penalty;
  out.violations = conflicts;
  out.feasible = conflicts == 0;
  return out;
}

DiscreteEval evaluateDiscrete(const MaxCutProblem& pr, const Eigen::Ref<const Eigen::VectorXi>& x) {
  const Graph& g = *pr.graph;
  if (x.size() != g.numNodes()) throw std::invalid_argument("solution size != node count");
  requireBinary(x);
  DiscreteEval out;
  double cut = 0.0;
  for (const auto& e : g.edges())
    if (x[e.u] != x[e.v]) cut += e.w;
  out.objective = -cut;
  out.cost = out.objective;
  out.feasible = true;
  return out;
}

DiscreteEval evaluateDiscrete(const DbmProblem& pr, const Eigen::Ref<const Eigen::MatrixXi>& x) {
  if (x.rows() != pr.likelihood.rows() || x.cols() != pr.likelihood.cols())
    throw std::invalid_argument("solution shape != instance shape");
  requireBinary(x);

  const Eigen::ArrayXXd xd = x.cast<double>().array();
  const Eigen::ArrayXXd M = pr.sameField.cast<double>().array();

  DiscreteEval out;
  out.objective = -(pr.likelihood.array() * xd).sum();

  long violations = 0;
  double penalty = 0.0;
  const Eigen::ArrayXd rowExcess = xd.rowwise().sum() - 1.0;
  const Eigen::ArrayXd colExcess = xd.colwise().sum().transpose() - 1.0;
  penalty += pr.lambda[0] * rowExcess.max(0.0).sum();
  penalty += pr.lambda[1] * colExcess.max(0.0).sum();
  violations += (rowExcess > 0).count();
  violations += (colExcess > 0).count();
  const double total = xd.sum();
  const double a = pr.pFrac * total - (M * xd).sum();
  const double b = pr.qFrac * total - ((1.0 - M) * xd).sum();
  if (a > 0) {
    penalty += pr.lambda[2] * a;
    ++violations;
  }
  if (b > 0) {
    penalty += pr.lambda[3] * b;
    ++violations;
  }

  out.penalty = penalty;
  out.cost = out.objective + penalty;
  out.violations = violations;
  out.feasible = violations == 0;
  return out;
}

DiscreteEval evaluateDiscrete(const ColoringProblem& pr,
                              const Eigen::Ref<const Eigen::VectorXi>& colors) {
  const Graph& g = *pr.graph;
  if (colors.size() != g.numNodes()) throw std::invalid_argument("solution size != node count");
  if (((colors.array() < 0) || (colors.array() >= pr.numColors)).any())
    throw std::invalid_argument("color out of range");
  DiscreteEval out;
  double mono = 0.0;
  long count = 0;
  for (const auto& e : g.edges())
    if (colors[e.u] == colors[e.v]) {
      mono += e.w;
      ++count;
    }
  out.objective = mono;
  out.cost = mono;
  out.violations = count;  // informational; every assignment is feasible
  out.feasible = true;
  return out;
}

DbmProblem generateDbm(int n1, int n2, double pFrac, double qFrac, Eigen::Vector4d lambda,
                       RngSeed seed) {
  if (n1 <= 0 || n2 <= 0) throw std::invalid_argument("side sizes must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  DbmProblem pr;
  pr.likelihood.resize(n1, n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) pr.likelihood(i, j) = unif(rng);

  std::vector<int> f1(n1), f2(n2);
  for (auto& f : f1) f = coin(rng) ? 1 : 0;
  for (auto& f : f2) f = coin(rng) ? 1 : 0;
  pr.sameField.resize(n1, n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) pr.sameField(i, j) = f1[i] == f2[j] ? 1 : 0;

  pr.pFrac = pFrac;
  pr.qFrac = qFrac;
  pr.lambda = lambda;
  pr.validate();
  return pr;
}

}  // namespace cra
