#pragma once

#include <Eigen/SparseCore>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cra {

using RngSeed = std::uint64_t;

struct WeightedEdge {
  int u = 0;
  int v = 0;  // canonical form keeps u < v
  double w = 1.0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, long line)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

  long line() const { return line_; }

 private:
  long line_;
};

/// Immutable undirected weighted graph. Adjacency is stored CSR-style with
/// both arc directions, rows sorted by neighbor index.
class Graph {
 public:
  Graph() = default;
  Graph(int numNodes, std::vector<WeightedEdge> edges);

  int numNodes() const { return num_nodes_; }
  int numEdges() const { return static_cast<int>(edges_.size()); }
  const std::vector<WeightedEdge>& edges() const { return edges_; }

  int degree(int v) const { return offsets_[v + 1] - offsets_[v]; }
  int maxDegree() const;
  std::span<const int> neighbors(int v) const {
    return {indices_.data() + offsets_[v], static_cast<size_t>(degree(v))};
  }
  std::span<const double> neighborWeights(int v) const {
    return {values_.data() + offsets_[v], static_cast<size_t>(degree(v))};
  }
  bool hasEdge(int u, int v) const;

  const std::vector<int>& rowOffsets() const { return offsets_; }
  const std::vector<int>& columnIndices() const { return indices_; }
  const std::vector<double>& values() const { return values_; }

  /// Symmetric weighted adjacency as a zero-copy Eigen sparse view.
  Eigen::Map<const Eigen::SparseMatrix<double, Eigen::RowMajor, int>> adjacency() const {
    return {num_nodes_, num_nodes_, static_cast<int>(indices_.size()),
            offsets_.data(), indices_.data(), values_.data()};
  }

  /// Sum of A_ij over the neighbors of every node (weighted degree vector).
  Eigen::VectorXd weightedDegrees() const;

 private:
  int num_nodes_ = 0;
  std::vector<WeightedEdge> edges_;  // sorted by (u, v), u < v
  std::vector<int> offsets_;         // size N + 1
  std::vector<int> indices_;         // size 2E
  std::vector<double> values_;       // size 2E
};

/// Random d-regular simple graph via stub pairing with deadlock restart.
Graph generateRrg(int n, int d, RngSeed seed);

/// G(n, p) with each unordered pair drawn independently; weights 1.
Graph generateErg(int n, double edgeProb, RngSeed seed);

/// "N M" header followed by M lines "u v w", 1-based indices.
Graph parseGset(std::istream& in);
Graph parseGsetFile(const std::string& path);

/// Lines "u v [w]" with 0-based indices, default weight 1, '#' comments.
/// A "# nodes: N" directive pins the node count (needed for trailing
/// isolated nodes, which the bare format cannot express).
Graph parseEdgeList(std::istream& in);
Graph parseEdgeListFile(const std::string& path);

void writeEdgeList(const Graph& g, std::ostream& out);
void writeGset(const Graph& g, std::ostream& out);
std::string toEdgeListString(const Graph& g);
std::string toGsetString(const Graph& g);

/// Dispatch on format name: "edges", "gset", or "auto" (by file extension,
/// ".gset"/".mc" -> gset, anything else -> edge list).
Graph loadGraphFile(const std::string& path, const std::string& format = "auto");

}  // namespace cra
