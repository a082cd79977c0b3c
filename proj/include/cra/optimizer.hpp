#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cra {

struct AdamWSettings {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weightDecay = 1e-2;
};

/// AdamW with decoupled weight decay: parameters are scaled by
/// (1 - lr * wd) before the bias-corrected Adam delta is applied.
template <typename Scalar>
class AdamW {
 public:
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  AdamW(AdamWSettings settings, const std::vector<Mat>& paramsLike) : s_(settings) {
    m_.reserve(paramsLike.size());
    v_.reserve(paramsLike.size());
    for (const auto& p : paramsLike) {
      m_.push_back(Mat::Zero(p.rows(), p.cols()));
      v_.push_back(Mat::Zero(p.rows(), p.cols()));
    }
  }

  /// Applies one update in place. Returns false without touching parameters
  /// or state if any gradient entry is non-finite.
  bool step(std::vector<Mat>& params, const std::vector<Mat>& grads) {
    if (params.size() != m_.size() || grads.size() != m_.size())
      throw std::invalid_argument("parameter/gradient tensor count mismatch");
    for (size_t k = 0; k < params.size(); ++k) {
      if (params[k].rows() != m_[k].rows() || params[k].cols() != m_[k].cols() ||
          grads[k].rows() != m_[k].rows() || grads[k].cols() != m_[k].cols())
        throw std::invalid_argument("parameter/gradient shape mismatch");
      if (!grads[k].allFinite()) return false;
    }

    ++t_;
    const Scalar lr = Scalar(s_.lr);
    const Scalar b1 = Scalar(s_.beta1), b2 = Scalar(s_.beta2);
    const Scalar c1 = Scalar(1) - Scalar(std::pow(s_.beta1, static_cast<double>(t_)));
    const Scalar c2 = Scalar(1) - Scalar(std::pow(s_.beta2, static_cast<double>(t_)));
    for (size_t k = 0; k < params.size(); ++k) {
      auto& p = params[k];
      const auto& g = grads[k];
      if (s_.weightDecay != 0) p *= (Scalar(1) - lr * Scalar(s_.weightDecay));
      m_[k] = b1 * m_[k] + (Scalar(1) - b1) * g;
      v_[k] = b2 * v_[k] + (Scalar(1) - b2) * g.array().square().matrix();
      p.array() -=
          lr * (m_[k].array() / c1) / ((v_[k].array() / c2).sqrt() + Scalar(s_.eps));
    }
    return true;
  }

  long stepCount() const { return t_; }

 private:
  AdamWSettings s_;
  long t_ = 0;
  std::vector<Mat> m_, v_;
};

}  // namespace cra
