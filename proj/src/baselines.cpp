#include "cra/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace cra {

namespace {

// Shared residual-graph greedy: pickNext chooses among alive nodes, the
// chosen node joins the set and is removed together with its neighbors.
template <typename PickNext>
Eigen::VectorXi greedyIndependentSet(const Graph& g, PickNext pickNext) {
  const int n = g.numNodes();
  std::vector<char> alive(n, 1);
  std::vector<int> deg(n);
  for (int v = 0; v < n; ++v) deg[v] = g.degree(v);
  int aliveCount = n;

  Eigen::VectorXi x = Eigen::VectorXi::Zero(n);
  while (aliveCount > 0) {
    const int chosen = pickNext(alive, deg);
    x[chosen] = 1;
    alive[chosen] = 0;
    --aliveCount;
    for (int u : g.neighbors(chosen)) {
      if (!alive[u]) continue;
      alive[u] = 0;
      --aliveCount;
      for (int w : g.neighbors(u))
        if (alive[w]) --deg[w];
    }
    // chosen's own neighbors are gone; no need to fix deg[chosen]
  }
  return x;
}

}  // namespace

Eigen::VectorXi dgaMis(const Graph& g, RngSeed seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> order(g.numNodes());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> rank(g.numNodes());
  for (size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);

  return greedyIndependentSet(g, [&](const std::vector<char>& alive, const std::vector<int>& deg) {
    int best = -1;
    for (int v = 0; v < static_cast<int>(alive.size()); ++v) {
      if (!alive[v]) continue;
      if (best < 0 || deg[v] < deg[best] || (deg[v] == deg[best] && rank[v] < rank[best]))
        best = v;
    }
    return best;
  });
}

Eigen::VectorXi rgaMis(const Graph& g, RngSeed seed) {
  std::mt19937_64 rng(seed);
  return greedyIndependentSet(g, [&](const std::vector<char>& alive, const std::vector<int>&) {
    std::vector<int> pool;
    for (int v = 0; v < static_cast<int>(alive.size()); ++v)
      if (alive[v]) pool.push_back(v);
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    return pool[pick(rng)];
  });
}

double cutValue(const Graph& g, const Eigen::Ref<const Eigen::VectorXi>& x) {
  double cut = 0.0;
  for (const auto& e : g.edges())
    if (x[e.u] != x[e.v]) cut += e.w;
  return cut;
}

Eigen::VectorXi greedyMaxcut(const Graph& g, RngSeed seed) {
  const int n = g.numNodes();
  std::mt19937_64 rng(seed);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  Eigen::VectorXi x(n);
  std::vector<char> placed(n, 0);
  for (int v : order) {
    // weight toward already-placed neighbors on each side
    double side0 = 0.0, side1 = 0.0;
    auto nbrs = g.neighbors(v);
    auto ws = g.neighborWeights(v);
    for (size_t k = 0; k < nbrs.size(); ++k) {
      if (!placed[nbrs[k]]) continue;
      (x[nbrs[k]] == 0 ? side0 : side1) += ws[k];
    }
    // placing on side 1 cuts the side-0 weight and vice versa
    x[v] = side0 >= side1 ? 1 : 0;
    placed[v] = 1;
  }

  // 1-flip polish: sweep until no strictly improving flip remains
  bool improved = true;
  while (improved) {
    improved = false;
    for (int v = 0; v < n; ++v) {
      double same = 0.0, crossed = 0.0;
      auto nbrs = g.neighbors(v);
      auto ws = g.neighborWeights(v);
      for (size_t k = 0; k < nbrs.size(); ++k)
        (x[nbrs[k]] == x[v] ? same : crossed) += ws[k];
      if (same > crossed) {  // flipping turns `same` into cut weight
        x[v] = 1 - x[v];
        improved = true;
      }
    }
  }
  return x;
}

}  // namespace cra
