#include "cra/graph.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <unordered_set>

namespace cra {

namespace {

long long pairKey(int u, int v, int n) {
  return static_cast<long long>(u) * n + v;
}

}  // namespace

Graph::Graph(int numNodes, std::vector<WeightedEdge> edges) : num_nodes_(numNodes) {
  if (numNodes < 0) throw std::invalid_argument("node count must be nonnegative");
  for (auto& e : edges) {
    if (e.u < 0 || e.u >= numNodes || e.v < 0 || e.v >= numNodes)
      throw std::invalid_argument("edge index out of range: (" + std::to_string(e.u) + ", " +
                                  std::to_string(e.v) + ")");
    if (e.u == e.v) throw std::invalid_argument("self-loop at node " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(),
            [](const WeightedEdge& a, const WeightedEdge& b) {
              return std::tie(a.u, a.v) < std::tie(b.u, b.v);
            });
  for (size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
      throw std::invalid_argument("duplicate edge (" + std::to_string(edges[i].u) + ", " +
                                  std::to_string(edges[i].v) + ")");
  }
  edges_ = std::move(edges);

  offsets_.assign(num_nodes_ + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (int v = 0; v < num_nodes_; ++v) offsets_[v + 1] += offsets_[v];

  indices_.resize(edges_.size() * 2);
  values_.resize(edges_.size() * 2);
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    indices_[fill[e.u]] = e.v;
    values_[fill[e.u]++] = e.w;
    indices_[fill[e.v]] = e.u;
    values_[fill[e.v]++] = e.w;
  }
  // Rows come out sorted by construction for the v side but not the u side;
  // sort each row so hasEdge can bisect and layouts are canonical.
  for (int v = 0; v < num_nodes_; ++v) {
    const int begin = offsets_[v], end = offsets_[v + 1];
    std::vector<std::pair<int, double>> row;
    row.reserve(end - begin);
    for (int k = begin; k < end; ++k) row.emplace_back(indices_[k], values_[k]);
    std::sort(row.begin(), row.end());
    for (int k = begin; k < end; ++k) {
      indices_[k] = row[k - begin].first;
      values_[k] = row[k - begin].second;
    }
  }
}

int Graph::maxDegree() const {
  int best = 0;
  for (int v = 0; v < num_nodes_; ++v) best = std::max(best, degree(v));
  return best;
}

bool Graph::hasEdge(int u, int v) const {
  if (u < 0 || v < 0 || u >= num_nodes_ || v >= num_nodes_) return false;
  auto row = neighbors(u);
  return std::binary_search(row.begin(), row.end(), v);
}

Eigen::VectorXd Graph::weightedDegrees() const {
  Eigen::VectorXd wd = Eigen::VectorXd::Zero(num_nodes_);
  for (int v = 0; v < num_nodes_; ++v) {
    auto w = neighborWeights(v);
    for (double x : w) wd[v] += x;
  }
  return wd;
}

namespace {

// One pairing-model attempt: shuffle the stub list and wire consecutive
// stubs, carrying collisions (self-loops, repeats) over to the next round.
// Fails only when a round makes no progress, which forces a full restart.
std::optional<std::vector<WeightedEdge>> tryStubPairing(int n, int d, std::mt19937_64& rng) {
  std::vector<int> stubs;
  stubs.reserve(static_cast<size_t>(n) * d);
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < d; ++k) stubs.push_back(v);

  std::unordered_set<long long> seen;
  seen.reserve(stubs.size());
  std::vector<WeightedEdge> edges;
  edges.reserve(stubs.size() / 2);

  while (!stubs.empty()) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::vector<int> carry;
    bool progress = false;
    for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
      int u = stubs[i], v = stubs[i + 1];
      if (u > v) std::swap(u, v);
      if (u == v || seen.count(pairKey(u, v, n))) {
        carry.push_back(stubs[i]);
        carry.push_back(stubs[i + 1]);
        continue;
      }
      seen.insert(pairKey(u, v, n));
      edges.push_back({u, v, 1.0});
      progress = true;
    }
    if (!progress) return std::nullopt;
    stubs = std::move(carry);
  }
  return edges;
}

}  // namespace

Graph generateRrg(int n, int d, RngSeed seed) {
  if (n <= 0) throw std::invalid_argument("node count must be positive");
  if (d < 0 || d >= n) throw std::invalid_argument("degree must satisfy 0 <= d < n");
  if ((static_cast<long long>(n) * d) % 2 != 0)
    throw std::invalid_argument("n*d must be even for a d-regular graph");

  std::mt19937_64 rng(seed);
  constexpr int kRestartBudget = 10000;
  for (int attempt = 0; attempt < kRestartBudget; ++attempt) {
    if (auto edges = tryStubPairing(n, d, rng)) return Graph(n, std::move(*edges));
  }
  throw std::runtime_error("regular graph generation exhausted its restart budget");
}

Graph generateErg(int n, double edgeProb, RngSeed seed) {
  if (n <= 0) throw std::invalid_argument("node count must be positive");
  if (!(edgeProb >= 0.0 && edgeProb <= 1.0))
    throw std::invalid_argument("edge probability must lie in [0, 1]");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<WeightedEdge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (unif(rng) < edgeProb) edges.push_back({u, v, 1.0});
  return Graph(n, std::move(edges));
}

namespace {

struct LineTokens {
  long line = 0;
  std::vector<std::string> tokens;
};

std::vector<LineTokens> tokenize(std::istream& in, bool skipComments) {
  std::vector<LineTokens> out;
  std::string line;
  long num = 0;
  while (std::getline(in, line)) {
    ++num;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (toks.empty()) continue;
    if (skipComments && toks[0][0] == '#') {
      out.push_back({num, std::move(toks)});  // kept so directives stay visible
      continue;
    }
    out.push_back({num, std::move(toks)});
  }
  return out;
}

long long parseInt(const std::string& tok, long line) {
  size_t pos = 0;
  long long value = 0;
  try {
    value = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("expected integer, got '" + tok + "'", line);
  }
  if (pos != tok.size()) throw ParseError("expected integer, got '" + tok + "'", line);
  return value;
}

double parseReal(const std::string& tok, long line) {
  size_t pos = 0;
  double value = 0;
  try {
    value = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("expected number, got '" + tok + "'", line);
  }
  if (pos != tok.size()) throw ParseError("expected number, got '" + tok + "'", line);
  return value;
}

}  // namespace

Graph parseGset(std::istream& in) {
  auto lines = tokenize(in, /*skipComments=*/false);
  if (lines.empty()) throw ParseError("empty input", 0);

  const auto& head = lines[0];
  if (head.tokens.size() != 2) throw ParseError("header must be 'N M'", head.line);
  const long long n = parseInt(head.tokens[0], head.line);
  const long long m = parseInt(head.tokens[1], head.line);
  if (n < 0 || m < 0) throw ParseError("negative counts in header", head.line);
  if (static_cast<long long>(lines.size()) - 1 != m)
    throw ParseError("expected " + std::to_string(m) + " edge lines, found " +
                         std::to_string(lines.size() - 1),
                     head.line);

  std::vector<WeightedEdge> edges;
  edges.reserve(m);
  std::unordered_set<long long> seen;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l.tokens.size() != 3) throw ParseError("expected 'u v w'", l.line);
    long long u = parseInt(l.tokens[0], l.line);
    long long v = parseInt(l.tokens[1], l.line);
    double w = parseReal(l.tokens[2], l.line);
    if (u < 1 || u > n || v < 1 || v > n)
      throw ParseError("node index out of range [1, " + std::to_string(n) + "]", l.line);
    if (u == v) throw ParseError("self-loop", l.line);
    int a = static_cast<int>(u - 1), b = static_cast<int>(v - 1);
    if (a > b) std::swap(a, b);
    if (!seen.insert(pairKey(a, b, static_cast<int>(n))).second)
      throw ParseError("duplicate edge", l.line);
    edges.push_back({a, b, w});
  }
  return Graph(static_cast<int>(n), std::move(edges));
}

Graph parseEdgeList(std::istream& in) {
  auto lines = tokenize(in, /*skipComments=*/true);
  std::vector<WeightedEdge> edges;
  std::vector<long> edgeLines;
  long long declaredNodes = -1;
  long long maxIndex = -1;

  for (const auto& l : lines) {
    if (l.tokens[0][0] == '#') {
      // "# nodes: N" pins the node count; other comments are ignored.
      if (l.tokens.size() >= 3 && l.tokens[0] == "#" && l.tokens[1] == "nodes:")
        declaredNodes = parseInt(l.tokens[2], l.line);
      continue;
    }
    if (l.tokens.size() != 2 && l.tokens.size() != 3)
      throw ParseError("expected 'u v [w]'", l.line);
    long long u = parseInt(l.tokens[0], l.line);
    long long v = parseInt(l.tokens[1], l.line);
    double w = l.tokens.size() == 3 ? parseReal(l.tokens[2], l.line) : 1.0;
    if (u < 0 || v < 0) throw ParseError("node indices must be nonnegative", l.line);
    if (u == v) throw ParseError("self-loop", l.line);
    int a = static_cast<int>(u), b = static_cast<int>(v);
    if (a > b) std::swap(a, b);
    edges.push_back({a, b, w});
    edgeLines.push_back(l.line);
    maxIndex = std::max(maxIndex, std::max(u, v));
  }

  long long n = std::max(declaredNodes, maxIndex + 1);
  if (declaredNodes >= 0 && maxIndex >= declaredNodes)
    throw ParseError("node index " + std::to_string(maxIndex) + " exceeds declared count", 0);

  std::unordered_set<long long> seen;
  for (size_t i = 0; i < edges.size(); ++i) {
    if (!seen.insert(pairKey(edges[i].u, edges[i].v, static_cast<int>(n))).second)
      throw ParseError("duplicate edge", edgeLines[i]);
  }
  return Graph(static_cast<int>(n), std::move(edges));
}

namespace {

void writeWeight(std::ostream& out, double w) {
  if (w == static_cast<long long>(w) && std::abs(w) < 1e15) {
    out << static_cast<long long>(w);
  } else {
    char buf[32];
    snprintf(buf, sizeof(buf), "%.17g", w);
    out << buf;
  }
}

Graph parseFromFile(const std::string& path, Graph (*parser)(std::istream&)) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parser(in);
}

}  // namespace

Graph parseGsetFile(const std::string& path) { return parseFromFile(path, parseGset); }
Graph parseEdgeListFile(const std::string& path) { return parseFromFile(path, parseEdgeList); }

void writeEdgeList(const Graph& g, std::ostream& out) {
  out << "# nodes: " << g.numNodes() << "\n";
  for (const auto& e : g.edges()) {
    out << e.u << " " << e.v << " ";
    writeWeight(out, e.w);
    out << "\n";
  }
}

void writeGset(const Graph& g, std::ostream& out) {
  out << g.numNodes() << " " << g.numEdges() << "\n";
  for (const auto& e : g.edges()) {
    out << (e.u + 1) << " " << (e.v + 1) << " ";
    writeWeight(out, e.w);
    out << "\n";
  }
}

std::string toEdgeListString(const Graph& g) {
  std::ostringstream os;
  writeEdgeList(g, os);
  return os.str();
}

std::string toGsetString(const Graph& g) {
  std::ostringstream os;
  writeGset(g, os);
  return os.str();
}

Graph loadGraphFile(const std::string& path, const std::string& format) {
  std::string fmt = format;
  if (fmt == "auto") {
    auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    fmt = (ext == "gset" || ext == "mc") ? "gset" : "edges";
  }
  if (fmt == "gset") return parseGsetFile(path);
  if (fmt == "edges") return parseEdgeListFile(path);
  throw std::invalid_argument("unknown graph format '" + format + "'");
}

}  // namespace cra
