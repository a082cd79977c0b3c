#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <queue>
#include <sstream>

#include "cra/graph.hpp"
#include "test_util.hpp"

using namespace cra;

namespace {

bool connected(const Graph& g) {
  if (g.numNodes() == 0) return true;
  std::vector<char> seen(g.numNodes(), 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int u : g.neighbors(v))
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        q.push(u);
      }
  }
  return count == g.numNodes();
}

bool sameGraph(const Graph& a, const Graph& b) {
  if (a.numNodes() != b.numNodes() || a.numEdges() != b.numEdges()) return false;
  for (int i = 0; i < a.numEdges(); ++i) {
    const auto& ea = a.edges()[i];
    const auto& eb = b.edges()[i];
    if (ea.u != eb.u || ea.v != eb.v || ea.w != eb.w) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("graph construction and CSR invariants") {
  Graph g(4, {{0, 1, 1.0}, {2, 1, 2.0}, {0, 3, -1.5}});
  CHECK(g.numNodes() == 4);
  CHECK(g.numEdges() == 3);
  CHECK(g.degree(0) == 2);
  CHECK(g.degree(1) == 2);
  CHECK(g.degree(2) == 1);
  CHECK(g.hasEdge(1, 2));
  CHECK(g.hasEdge(2, 1));
  CHECK_FALSE(g.hasEdge(0, 2));

  const auto& offsets = g.rowOffsets();
  for (size_t i = 1; i < offsets.size(); ++i) CHECK(offsets[i] >= offsets[i - 1]);
  CHECK(g.columnIndices().size() == 2 * static_cast<size_t>(g.numEdges()));

  // symmetric weights through the CSR view
  for (const auto& e : g.edges()) {
    auto nu = g.neighbors(e.u);
    auto wu = g.neighborWeights(e.u);
    bool found = false;
    for (size_t k = 0; k < nu.size(); ++k)
      if (nu[k] == e.v && wu[k] == e.w) found = true;
    CHECK(found);
  }
}

TEST_CASE("graph constructor rejects bad edges") {
  CHECK_THROWS_AS(Graph(3, {{0, 3, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{1, 1, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 1, 1.0}, {1, 0, 2.0}}), std::invalid_argument);
}

TEST_CASE("rrg on 4 nodes with degree 3 is K4") {
  Graph g = generateRrg(4, 3, 123);
  CHECK(g.numEdges() == 6);
  for (int v = 0; v < 4; ++v) CHECK(g.degree(v) == 3);
}

TEST_CASE("rrg on 4 nodes with degree 2 is a 4-cycle") {
  // every simple 2-regular graph on 4 nodes is a single 4-cycle
  for (RngSeed seed : {1ULL, 7ULL, 99ULL}) {
    Graph g = generateRrg(4, 2, seed);
    CHECK(g.numEdges() == 4);
    for (int v = 0; v < 4; ++v) CHECK(g.degree(v) == 2);
    CHECK(connected(g));
  }
}

TEST_CASE("rrg rejects odd n*d") {
  CHECK_THROWS_AS(generateRrg(5, 3, 1), std::invalid_argument);
}

TEST_CASE("rrg degrees are exact across sizes") {
  for (auto [n, d] : {std::pair{20, 3}, {50, 7}, {100, 20}, {400, 31}}) {
    if ((n * d) % 2 != 0) continue;
    Graph g = generateRrg(n, d, 42);
    CHECK(g.numEdges() == n * d / 2);
    for (int v = 0; v < n; ++v) REQUIRE(g.degree(v) == d);
    // simple graph: CSR rows sorted strictly (no multi-edges)
    for (int v = 0; v < n; ++v) {
      auto row = g.neighbors(v);
      for (size_t k = 1; k < row.size(); ++k) REQUIRE(row[k] > row[k - 1]);
    }
  }
}

TEST_CASE("rrg handles dense degrees") {
  Graph g = generateRrg(200, 60, 3);
  for (int v = 0; v < 200; ++v) REQUIRE(g.degree(v) == 60);
}

TEST_CASE("generators are deterministic in seed") {
  CHECK(sameGraph(generateRrg(30, 4, 5), generateRrg(30, 4, 5)));
  CHECK(sameGraph(generateErg(30, 0.3, 5), generateErg(30, 0.3, 5)));
  CHECK_FALSE(sameGraph(generateErg(30, 0.3, 5), generateErg(30, 0.3, 6)));
}

TEST_CASE("erg edge cases and binomial sanity") {
  CHECK(generateErg(10, 0.0, 1).numEdges() == 0);
  CHECK(generateErg(10, 1.0, 1).numEdges() == 45);
  CHECK_THROWS_AS(generateErg(10, 1.5, 1), std::invalid_argument);

  // n=1000, p=0.05: mean 24975, sigma ~154; four sigma band
  Graph g = generateErg(1000, 0.05, 7);
  const double mean = 0.05 * 499500.0;
  const double sigma = std::sqrt(499500.0 * 0.05 * 0.95);
  CHECK(std::abs(g.numEdges() - mean) < 4.0 * sigma);
}

TEST_CASE("gset parsing") {
  std::istringstream in("3 2\n1 2 1\n2 3 -1\n");
  Graph g = parseGset(in);
  CHECK(g.numNodes() == 3);
  CHECK(g.numEdges() == 2);
  CHECK(g.edges()[0].u == 0);
  CHECK(g.edges()[0].v == 1);
  CHECK(g.edges()[0].w == 1.0);
  CHECK(g.edges()[1].w == -1.0);
}

TEST_CASE("gset parse errors carry line numbers") {
  std::istringstream outOfRange("3 2\n1 4 1\n2 3 1\n");
  CHECK_THROWS_WITH_AS(parseGset(outOfRange), doctest::Contains("line 2"), ParseError);

  std::istringstream dup("3 2\n1 2 1\n2 1 1\n");
  CHECK_THROWS_WITH_AS(parseGset(dup), doctest::Contains("duplicate"), ParseError);

  std::istringstream selfLoop("2 1\n1 1 1\n");
  CHECK_THROWS_AS(parseGset(selfLoop), ParseError);

  std::istringstream badCount("3 2\n1 2 1\n");
  CHECK_THROWS_AS(parseGset(badCount), ParseError);

  std::istringstream badToken("3 1\n1 x 1\n");
  CHECK_THROWS_AS(parseGset(badToken), ParseError);
}

TEST_CASE("edge list parsing") {
  std::istringstream in("# a comment\n0 1\n1 2\n");
  Graph g = parseEdgeList(in);
  CHECK(g.numNodes() == 3);
  CHECK(g.numEdges() == 2);
  CHECK(g.edges()[0].w == 1.0);

  std::istringstream weighted("0 1 2.5\n");
  CHECK(parseEdgeList(weighted).edges()[0].w == 2.5);

  std::istringstream selfLoop("0 0\n");
  CHECK_THROWS_AS(parseEdgeList(selfLoop), ParseError);

  std::istringstream dup("0 1\n1 0 3\n");
  CHECK_THROWS_AS(parseEdgeList(dup), ParseError);

  std::istringstream declared("# nodes: 5\n0 1\n");
  CHECK(parseEdgeList(declared).numNodes() == 5);
}

TEST_CASE("serialization round-trips") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = generateErg(20, 0.3, trial);
    {
      std::istringstream in(toEdgeListString(g));
      CHECK(sameGraph(g, parseEdgeList(in)));
    }
    {
      std::istringstream in(toGsetString(g));
      CHECK(sameGraph(g, parseGset(in)));
    }
  }
  // negative and fractional weights survive
  Graph g(3, {{0, 1, -1.0}, {1, 2, 0.1234567890123}});
  std::istringstream in(toEdgeListString(g));
  CHECK(sameGraph(g, parseEdgeList(in)));
}

TEST_CASE("round-trip keeps trailing isolated nodes via the nodes directive") {
  Graph g(6, {{0, 1, 1.0}});  // nodes 2..5 isolated
  std::istringstream in(toEdgeListString(g));
  CHECK(parseEdgeList(in).numNodes() == 6);
}
