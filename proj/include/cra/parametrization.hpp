#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <random>
#include <stdexcept>
#include <type_traits>
#include <string>
#include <vector>

#include "cra/graph.hpp"

namespace cra {

enum class Arch { direct, gcn, sage };

inline const char* archName(Arch a) {
  switch (a) {
    case Arch::direct: return "direct";
    case Arch::gcn: return "gcn";
    case Arch::sage: return "sage";
  }
  return "unknown";
}

inline Arch archFromName(const std::string& name) {
  if (name == "direct") return Arch::direct;
  if (name == "gcn") return Arch::gcn;
  if (name == "sage") return Arch::sage;
  throw std::invalid_argument("unknown parametrization '" + name + "'");
}

struct GnnDims {
  int h0 = 0;
  int h1 = 0;
  int h2 = 1;  // 1 for binary heads, K for Potts
};

/// Hidden widths scale with the instance: H0 = int(N^0.8), H1 = int(N^0.8 / 2).
inline GnnDims defaultGnnDims(int numNodes, int outDim = 1) {
  const double w = std::pow(static_cast<double>(numNodes), 0.8);
  GnnDims d;
  d.h0 = std::max(1, static_cast<int>(w));
  d.h1 = std::max(1, static_cast<int>(w / 2.0));
  d.h2 = outDim;
  return d;
}

/// Trainable parameters for one solver run. Tensor layout by architecture:
///   direct: {logits (rows x cols of the relaxed state)}
///   gcn:    {embeddings N x H0, W1 H0 x H1, B1 H0 x H1, W2 H1 x H2, B2 H1 x H2}
///   sage:   {embeddings N x H0, Wself1, Wneigh1 H0 x H1, Wself2, Wneigh2 H1 x H2}
template <typename Scalar>
struct Params {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Arch arch = Arch::direct;
  GnnDims dims;
  bool potts = false;  // softmax head (rows on the simplex) instead of sigmoid
  std::vector<Mat> tensors;
};

using ParamsD = Params<double>;

/// Row-mean neighborhood aggregation operator M (M_vu = 1/|N(v)| for each
/// neighbor u) and its transpose, built once per graph and shared by all
/// forward/backward passes. Isolated nodes aggregate to zero.
template <typename Scalar>
struct MeanAggregator {
  Eigen::SparseMatrix<Scalar, Eigen::RowMajor> m;
  Eigen::SparseMatrix<Scalar, Eigen::RowMajor> mt;

  explicit MeanAggregator(const Graph& g) {
    const int n = g.numNodes();
    std::vector<Eigen::Triplet<Scalar>> trip;
    trip.reserve(g.columnIndices().size());
    for (int v = 0; v < n; ++v) {
      const int deg = g.degree(v);
      if (deg == 0) continue;
      const Scalar inv = Scalar(1) / Scalar(deg);
      for (int u : g.neighbors(v)) trip.emplace_back(v, u, inv);
    }
    m.resize(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    m.makeCompressed();
    mt = m.transpose();
    mt.makeCompressed();
  }
};

namespace detail {

template <typename Mat>
Mat sigmoid(const Mat& z) {
  using Scalar = typename Mat::Scalar;
  return z.array()
      .unaryExpr([](Scalar v) {
        if (v >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-v));
        const Scalar e = std::exp(v);
        return e / (Scalar(1) + e);
      })
      .matrix();
}

template <typename Mat>
Mat rowSoftmax(const Mat& z) {
  Mat out(z.rows(), z.cols());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    auto row = z.row(i).array();
    auto shifted = (row - row.maxCoeff()).exp();
    out.row(i) = (shifted / shifted.sum()).matrix();
  }
  return out;
}

template <typename Mat>
Mat headForward(const Mat& z, bool potts) {
  return potts ? rowSoftmax(z) : sigmoid(z);
}

// d(head)/dz applied to the upstream gradient, given the head output.
template <typename Mat>
Mat headBackward(const Mat& out, const Mat& upstream, bool potts) {
  if (!potts)
    return (upstream.array() * out.array() * (1 - out.array())).matrix();
  Mat dz(out.rows(), out.cols());
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const auto o = out.row(i).array();
    const auto g = upstream.row(i).array();
    dz.row(i) = (o * (g - (g * o).sum())).matrix();
  }
  return dz;
}

}  // namespace detail

/// Intermediate activations kept for the matching backward pass.
template <typename Scalar>
struct ForwardCache {
  using Mat = typename Params<Scalar>::Mat;
  Mat a1;   // M * embeddings
  Mat z1;   // pre-activation, layer 1
  Mat h1;   // relu(z1)
  Mat a2;   // M * h1
  Mat z2;   // pre-activation, layer 2
  Mat out;  // head(z2), the relaxed state
  bool valid = false;
};

/// Maps parameters to the relaxed state. GNN layers follow
///   gcn:  h^l = act(W^l * mean_{u in N(v)} h^{l-1}_u + B^l * h^{l-1}_v)
///   sage: h^l = act(Wself^l * h^{l-1}_v + Wneigh^l * mean_{u in N(v)} h^{l-1}_u)
/// with relu on layer 1 and a sigmoid (or row softmax) head on layer 2.
template <typename Scalar>
typename Params<Scalar>::Mat forward(const Params<Scalar>& params,
                                     std::type_identity_t<const MeanAggregator<Scalar>*> agg,
                                     ForwardCache<Scalar>* cache = nullptr) {
  using Mat = typename Params<Scalar>::Mat;
  ForwardCache<Scalar> local;
  ForwardCache<Scalar>& c = cache ? *cache : local;

  if (params.arch == Arch::direct) {
    c.out = detail::headForward(params.tensors.at(0), params.potts);
    c.valid = true;
    return c.out;
  }
  if (!agg) throw std::invalid_argument("GNN forward requires a graph aggregator");
  const Mat& emb = params.tensors.at(0);
  if (agg->m.rows() != emb.rows()) throw std::invalid_argument("embedding rows != node count");

  if (params.arch == Arch::gcn) {
    const Mat& w1 = params.tensors.at(1);
    const Mat& b1 = params.tensors.at(2);
    const Mat& w2 = params.tensors.at(3);
    const Mat& b2 = params.tensors.at(4);
    c.a1 = agg->m * emb;
    c.z1 = c.a1 * w1 + emb * b1;
    c.h1 = c.z1.array().max(Scalar(0)).matrix();
    c.a2 = agg->m * c.h1;
    c.z2 = c.a2 * w2 + c.h1 * b2;
  } else {
    const Mat& ws1 = params.tensors.at(1);
    const Mat& wn1 = params.tensors.at(2);
    const Mat& ws2 = params.tensors.at(3);
    const Mat& wn2 = params.tensors.at(4);
    c.a1 = agg->m * emb;
    c.z1 = emb * ws1 + c.a1 * wn1;
    c.h1 = c.z1.array().max(Scalar(0)).matrix();
    c.a2 = agg->m * c.h1;
    c.z2 = c.h1 * ws2 + c.a2 * wn2;
  }
  c.out = detail::headForward(c.z2, params.potts);
  c.valid = true;
  return c.out;
}

/// Reverse-mode gradients for every trainable tensor, embeddings included.
/// Requires the cache of the matching forward pass.
template <typename Scalar>
std::vector<typename Params<Scalar>::Mat> backward(
    const Params<Scalar>& params, std::type_identity_t<const MeanAggregator<Scalar>*> agg,
    const ForwardCache<Scalar>& cache,
    const typename Params<Scalar>::Mat& upstream) {
  using Mat = typename Params<Scalar>::Mat;
  if (!cache.valid) throw std::invalid_argument("backward requires a forward cache");

  if (params.arch == Arch::direct) {
    return {detail::headBackward(cache.out, upstream, params.potts)};
  }
  if (!agg) throw std::invalid_argument("GNN backward requires a graph aggregator");
  const Mat& emb = params.tensors.at(0);

  const Mat dz2 = detail::headBackward(cache.out, upstream, params.potts);
  const Mat reluMask = (cache.z1.array() > Scalar(0)).template cast<Scalar>().matrix();

  if (params.arch == Arch::gcn) {
    const Mat& w1 = params.tensors.at(1);
    const Mat& b1 = params.tensors.at(2);
    const Mat& w2 = params.tensors.at(3);
    Mat dw2 = cache.a2.transpose() * dz2;
    Mat db2 = cache.h1.transpose() * dz2;
    Mat dh1 = agg->mt * (dz2 * w2.transpose()) + dz2 * params.tensors.at(4).transpose();
    Mat dz1 = (dh1.array() * reluMask.array()).matrix();
    Mat dw1 = cache.a1.transpose() * dz1;
    Mat db1 = emb.transpose() * dz1;
    Mat demb = agg->mt * (dz1 * w1.transpose()) + dz1 * b1.transpose();
    return {std::move(demb), std::move(dw1), std::move(db1), std::move(dw2), std::move(db2)};
  }

  const Mat& ws1 = params.tensors.at(1);
  const Mat& wn1 = params.tensors.at(2);
  const Mat& ws2 = params.tensors.at(3);
  const Mat& wn2 = params.tensors.at(4);
  Mat dws2 = cache.h1.transpose() * dz2;
  Mat dwn2 = cache.a2.transpose() * dz2;
  Mat dh1 = dz2 * ws2.transpose() + agg->mt * (dz2 * wn2.transpose());
  Mat dz1 = (dh1.array() * reluMask.array()).matrix();
  Mat dws1 = emb.transpose() * dz1;
  Mat dwn1 = cache.a1.transpose() * dz1;
  Mat demb = dz1 * ws1.transpose() + agg->mt * (dz1 * wn1.transpose());
  return {std::move(demb), std::move(dws1), std::move(dwn1), std::move(dws2), std::move(dwn2)};
}

/// Weights start Glorot-uniform, embeddings N(0,1)/sqrt(H0), logits
/// N(0,1) * scale. Deterministic in the seed.
template <typename Scalar>
Params<Scalar> initParams(Arch arch, int stateRows, int stateCols, GnnDims dims, bool potts,
                          RngSeed seed, double scale = 1.0) {
  using Mat = typename Params<Scalar>::Mat;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Params<Scalar> params;
  params.arch = arch;
  params.dims = dims;
  params.potts = potts;

  auto glorot = [&](int fanIn, int fanOut) {
    const double s = scale * std::sqrt(6.0 / (fanIn + fanOut));
    std::uniform_real_distribution<double> unif(-s, s);
    Mat w(fanIn, fanOut);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = Scalar(unif(rng));
    return w;
  };

  if (arch == Arch::direct) {
    Mat logits(stateRows, stateCols);
    for (Eigen::Index i = 0; i < logits.rows(); ++i)
      for (Eigen::Index j = 0; j < logits.cols(); ++j)
        logits(i, j) = Scalar(scale * normal(rng));
    params.dims = GnnDims{0, 0, stateCols};
    params.tensors = {std::move(logits)};
    return params;
  }

  Mat emb(stateRows, dims.h0);
  const double embScale = scale / std::sqrt(static_cast<double>(dims.h0));
  for (Eigen::Index i = 0; i < emb.rows(); ++i)
    for (Eigen::Index j = 0; j < emb.cols(); ++j) emb(i, j) = Scalar(normal(rng) * embScale);

  params.tensors.push_back(std::move(emb));
  params.tensors.push_back(glorot(dims.h0, dims.h1));
  params.tensors.push_back(glorot(dims.h0, dims.h1));
  params.tensors.push_back(glorot(dims.h1, dims.h2));
  params.tensors.push_back(glorot(dims.h1, dims.h2));
  return params;
}

}  // namespace cra
