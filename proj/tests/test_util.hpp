#pragma once

#include <Eigen/Dense>

#include <functional>
#include <random>

#include "cra/graph.hpp"

namespace cra::test {

/// Central finite differences of a scalar function over a matrix argument.
inline Eigen::MatrixXd finiteDifference(const std::function<double(const Eigen::MatrixXd&)>& f,
                                        const Eigen::MatrixXd& x, double h = 1e-6) {
  Eigen::MatrixXd grad(x.rows(), x.cols());
  Eigen::MatrixXd probe = x;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      probe(i, j) = x(i, j) + h;
      const double up = f(probe);
      probe(i, j) = x(i, j) - h;
      const double down = f(probe);
      probe(i, j) = x(i, j);
      grad(i, j) = (up - down) / (2.0 * h);
    }
  }
  return grad;
}

/// Worst mixed absolute/relative discrepancy between two gradients.
inline double gradientError(const Eigen::MatrixXd& analytic, const Eigen::MatrixXd& numeric) {
  const double scale = std::max(1.0, std::max(analytic.array().abs().maxCoeff(),
                                              numeric.array().abs().maxCoeff()));
  return (analytic - numeric).array().abs().maxCoeff() / scale;
}

inline Eigen::MatrixXd randomInterior(int rows, int cols, std::mt19937_64& rng, double lo = 0.05,
                                      double hi = 0.95) {
  std::uniform_real_distribution<double> unif(lo, hi);
  Eigen::MatrixXd p(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) p(i, j) = unif(rng);
  return p;
}

inline Eigen::VectorXi randomBinary(int n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  Eigen::VectorXi x(n);
  for (int i = 0; i < n; ++i) x[i] = coin(rng) ? 1 : 0;
  return x;
}

inline Graph pathGraph(int n) {
  std::vector<WeightedEdge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  return Graph(n, std::move(edges));
}

inline Graph cycleGraph(int n) {
  std::vector<WeightedEdge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
  return Graph(n, std::move(edges));
}

inline Graph completeGraph(int n) {
  std::vector<WeightedEdge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0});
  return Graph(n, std::move(edges));
}

inline Graph starGraph(int leaves) {
  std::vector<WeightedEdge> edges;
  for (int i = 1; i <= leaves; ++i) edges.push_back({0, i, 1.0});
  return Graph(leaves + 1, std::move(edges));
}

inline Graph petersenGraph() {
  std::vector<WeightedEdge> edges;
  for (int i = 0; i < 5; ++i) {
    edges.push_back({i, (i + 1) % 5, 1.0});          // outer cycle
    edges.push_back({i, i + 5, 1.0});                // spokes
    edges.push_back({i + 5, (i + 2) % 5 + 5, 1.0});  // inner pentagram
  }
  return Graph(10, std::move(edges));
}

}  // namespace cra::test
