#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

#include "cra/problems.hpp"

namespace cra {

namespace detail {

inline void requireEvenAlpha(int alpha) {
  if (alpha < 2 || alpha % 2 != 0)
    throw std::invalid_argument("curve rate alpha must be an even integer >= 2");
}

// Exact integer power by repeated multiplication. For |t| <= 1 the result
// never exceeds 1 in magnitude, which keeps the 2*alpha gradient bound exact
// in floating point.
template <typename Scalar>
Scalar ipow(Scalar t, int k) {
  Scalar r = Scalar(1);
  for (int i = 0; i < k; ++i) r *= t;
  return r;
}

}  // namespace detail

/// Discreteness penalty  Phi(p) = sum_i (1 - (2 p_i - 1)^alpha)  and its
/// gradient  -2 alpha (2 p_i - 1)^(alpha-1). Maximal (= #entries) at p = 1/2,
/// zero at binary p; |grad| <= 2 alpha everywhere on [0, 1].
template <typename Derived>
std::pair<typename Derived::Scalar, typename Derived::PlainObject> phi(
    const Eigen::MatrixBase<Derived>& p, int alpha) {
  detail::requireEvenAlpha(alpha);
  using Scalar = typename Derived::Scalar;
  typename Derived::PlainObject grad(p.rows(), p.cols());
  Scalar value = Scalar(0);
  const Scalar two = Scalar(2), one = Scalar(1);
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      const Scalar t = two * p(i, j) - one;
      value += one - detail::ipow(t, alpha);
      grad(i, j) = Scalar(-2 * alpha) * detail::ipow(t, alpha - 1);
    }
  }
  return {value, std::move(grad)};
}

/// Potts-variable penalty as printed:  sum_i (1 - sum_k (K P_ik - 1)^alpha).
/// Note the per-row minimum at a one-hot row is negative, not zero.
template <typename Derived>
std::pair<typename Derived::Scalar, typename Derived::PlainObject> phiPotts(
    const Eigen::MatrixBase<Derived>& P, int alpha) {
  detail::requireEvenAlpha(alpha);
  using Scalar = typename Derived::Scalar;
  const Scalar K = Scalar(P.cols());
  typename Derived::PlainObject grad(P.rows(), P.cols());
  Scalar value = Scalar(P.rows());
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    for (Eigen::Index k = 0; k < P.cols(); ++k) {
      const Scalar t = K * P(i, k) - Scalar(1);
      value -= detail::ipow(t, alpha);
      grad(i, k) = Scalar(-alpha) * K * detail::ipow(t, alpha - 1);
    }
  }
  return {value, std::move(grad)};
}

/// Shifted Potts penalty, normalized so one-hot rows score exactly zero:
/// each row gains the constant (K-1)^alpha + (K-1) - 1. Same gradient as
/// phiPotts; this is the form the annealing loop and the stopping rule use.
template <typename Derived>
std::pair<typename Derived::Scalar, typename Derived::PlainObject> phiPottsShifted(
    const Eigen::MatrixBase<Derived>& P, int alpha) {
  auto [value, grad] = phiPotts(P, alpha);
  using Scalar = typename Derived::Scalar;
  const Scalar K = Scalar(P.cols());
  const Scalar rowShift = detail::ipow(K - Scalar(1), alpha) + (K - Scalar(1)) - Scalar(1);
  return {value + Scalar(P.rows()) * rowShift, std::move(grad)};
}

/// Entropy penalty, the cross-entropy-style alternative: H(p) = -sum_i
/// [p ln p + (1-p) ln(1-p)], maximal at 1/2 and zero at binary p like phi,
/// but with gradient ln((1-p)/p) which is unbounded near 0 and 1. Inputs are
/// clamped to [1e-12, 1 - 1e-12]. Opt-in only; never a default.
template <typename Derived>
std::pair<typename Derived::Scalar, typename Derived::PlainObject> phiEntropy(
    const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  constexpr Scalar kClamp = Scalar(1e-12);
  typename Derived::PlainObject grad(p.rows(), p.cols());
  Scalar value = Scalar(0);
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      const Scalar q = std::min(Scalar(1) - kClamp, std::max(kClamp, p(i, j)));
      value -= q * std::log(q) + (Scalar(1) - q) * std::log(Scalar(1) - q);
      grad(i, j) = std::log((Scalar(1) - q) / q);
    }
  }
  return {value, std::move(grad)};
}

enum class PenaltyKind { polynomial, entropy };

/// Annealing schedule gamma(tau) = gamma0 + rate * tau, optionally capped.
struct AnnealSchedule {
  double gamma0 = -20.0;
  double rate = 1e-3;  // epsilon, added once per parameter update
  int alpha = 2;
  std::optional<double> gammaCap = 10.0;

  void validate() const {
    detail::requireEvenAlpha(alpha);
    if (!(rate > 0)) throw std::invalid_argument("scheduling rate must be positive");
  }

  double gammaAt(long tau) const {
    double g = gamma0 + rate * static_cast<double>(tau);
    if (gammaCap && g > *gammaCap) g = *gammaCap;
    return g;
  }
};

/// Annealed objective r(p) = l(p) + gamma * Phi(p). The Potts problems use
/// the shifted Potts penalty; everything else the elementwise binary one.
template <typename Problem, typename Derived>
auto annealedLoss(const Problem& pr, const Eigen::MatrixBase<Derived>& p, double gamma,
                  int alpha) {
  auto loss = relaxedLoss(pr, p);
  if constexpr (ProblemTraits<Problem>::potts) {
    auto [pv, pg] = phiPottsShifted(p, alpha);
    loss.value += gamma * pv;
    loss.grad += gamma * pg;
  } else {
    auto [pv, pg] = phi(p, alpha);
    loss.value += gamma * pv;
    loss.grad += gamma * pg;
  }
  return loss;
}

struct StopPolicy {
  double tolerance = 1e-5;     // minimum improvement that counts
  long patience = 1000;        // epochs without improvement before stopping
  double phiThreshold = 1e-6;  // per-variable mean of Phi counting as "zero"

  void validate() const {
    if (!(tolerance > 0)) throw std::invalid_argument("tolerance must be positive");
    if (patience < 1) throw std::invalid_argument("patience must be >= 1");
  }
};

enum class StopReason { none, discreteness, patience, maxEpochs, nonFinite };

inline const char* stopReasonName(StopReason r) {
  switch (r) {
    case StopReason::none: return "none";
    case StopReason::discreteness: return "discreteness";
    case StopReason::patience: return "patience";
    case StopReason::maxEpochs: return "max_epochs";
    case StopReason::nonFinite: return "non_finite";
  }
  return "unknown";
}

/// Tracks the loss and penalty traces and decides when to stop. The
/// discreteness rule (penalty ~ 0 while gamma > 0) takes priority over the
/// patience rule (neither monitored quantity improved for `patience` epochs).
class StopMonitor {
 public:
  StopMonitor(StopPolicy policy, long numVariables) : policy_(policy), n_(numVariables) {
    policy_.validate();
  }

  StopReason update(double loss, double phiValue, double gamma) {
    if (gamma > 0 && phiValue / static_cast<double>(n_) < policy_.phiThreshold)
      return StopReason::discreteness;
    bool improved = false;
    if (loss < bestLoss_ - policy_.tolerance) {
      bestLoss_ = loss;
      improved = true;
    }
    if (phiValue < bestPhi_ - policy_.tolerance) {
      bestPhi_ = phiValue;
      improved = true;
    }
    stale_ = improved ? 0 : stale_ + 1;
    if (stale_ >= policy_.patience) return StopReason::patience;
    return StopReason::none;
  }

 private:
  StopPolicy policy_;
  long n_;
  double bestLoss_ = std::numeric_limits<double>::infinity();
  double bestPhi_ = std::numeric_limits<double>::infinity();
  long stale_ = 0;
};

}  // namespace cra
