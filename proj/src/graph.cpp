#include "pwsync/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "pwsync/error.hpp"

namespace pwsync {

Graph::Graph(int n_vertices, std::vector<Edge> edges) : n_(n_vertices), edges_(std::move(edges)) {
  if (n_ < 1) throw GraphError("graph must have at least one vertex, got " + std::to_string(n_));
  for (const auto& e : edges_) {
    if (e.u == e.v) throw GraphError("self-loop at vertex " + std::to_string(e.u));
    if (e.u < 0 || e.v >= n_) {
      throw GraphError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                       ") out of range for N = " + std::to_string(n_));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) {
    throw GraphError("duplicate edge (" + std::to_string(dup->u) + ", " + std::to_string(dup->v) + ")");
  }
  adjacency_.resize(static_cast<std::size_t>(n_));
  for (const auto& e : edges_) {
    adjacency_[static_cast<std::size_t>(e.u)].push_back(e.v);
    adjacency_[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

bool Graph::has_edge(int a, int b) const {
  if (a == b || a < 0 || b < 0 || a >= n_ || b >= n_) return false;
  return std::binary_search(edges_.begin(), edges_.end(), Edge(a, b));
}

Eigen::MatrixXd laplacian(const Graph& g) {
  const int n = g.n_vertices();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    l(e.u, e.v) = -1.0;
    l(e.v, e.u) = -1.0;
    l(e.u, e.u) += 1.0;
    l(e.v, e.v) += 1.0;
  }
  return l;
}

Eigen::MatrixXi incidence(const Graph& g) {
  Eigen::MatrixXi b = Eigen::MatrixXi::Zero(g.n_vertices(), g.n_edges());
  for (int k = 0; k < g.n_edges(); ++k) {
    const auto& e = g.edges()[static_cast<std::size_t>(k)];
    b(e.u, k) = 1;
    b(e.v, k) = -1;
  }
  return b;
}

bool is_connected(const Graph& g) {
  const int n = g.n_vertices();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : g.neighbours(v)) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++visited;
        stack.push_back(w);
      }
    }
  }
  return visited == n;
}

double algebraic_connectivity(const Graph& g) {
  if (g.n_vertices() < 2) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian(g), Eigen::EigenvaluesOnly);
  const double lambda2 = solver.eigenvalues()(1);
  return lambda2 < 1e-9 ? 0.0 : lambda2;
}

namespace {

Graph erdos_renyi(int n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < kErdosRenyiRetries; ++attempt) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (unit(rng) < p) edges.emplace_back(i, j);
      }
    }
    Graph g(n, std::move(edges));
    if (is_connected(g)) return g;
  }
  throw GraphError("erdos_renyi: no connected graph after " + std::to_string(kErdosRenyiRetries) +
                   " draws (p = " + std::to_string(p) + " too small for N = " + std::to_string(n) + ")");
}

}  // namespace

Graph generate_topology(const Topology& topology, int n) {
  if (n < 2) throw InvalidArgument("topology needs n >= 2, got " + std::to_string(n));
  std::vector<Edge> edges;
  switch (topology.kind) {
    case TopologyKind::complete:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
      break;
    case TopologyKind::star:
      for (int i = 1; i < n; ++i) edges.emplace_back(0, i);
      break;
    case TopologyKind::path:
      for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      break;
    case TopologyKind::ring:
      if (n == 2) throw InvalidArgument("ring needs n >= 3");
      for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
      break;
    case TopologyKind::nearest_neighbours: {
      const int l = topology.neighbours;
      if (l < 1 || l > (n - 1) / 2) {
        throw InvalidArgument("nearest_neighbours needs 1 <= l <= floor((n-1)/2), got l = " +
                              std::to_string(l) + " for n = " + std::to_string(n));
      }
      for (int i = 0; i < n; ++i)
        for (int k = 1; k <= l; ++k) edges.emplace_back(i, (i + k) % n);
      break;
    }
    case TopologyKind::erdos_renyi:
      if (!(topology.probability > 0.0 && topology.probability < 1.0)) {
        throw InvalidArgument("erdos_renyi needs 0 < p < 1, got " + std::to_string(topology.probability));
      }
      return erdos_renyi(n, topology.probability, topology.seed);
  }
  return Graph(n, std::move(edges));
}

std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::complete: return "complete";
    case TopologyKind::star: return "star";
    case TopologyKind::path: return "path";
    case TopologyKind::ring: return "ring";
    case TopologyKind::nearest_neighbours: return "nearest_neighbours";
    case TopologyKind::erdos_renyi: return "erdos_renyi";
  }
  return "unknown";
}

TopologyKind topology_kind_from_string(const std::string& name) {
  for (auto kind : {TopologyKind::complete, TopologyKind::star, TopologyKind::path, TopologyKind::ring,
                    TopologyKind::nearest_neighbours, TopologyKind::erdos_renyi}) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidArgument("unknown topology kind '" + name + "'");
}

Graph read_graph(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw GraphError("graph file: missing vertex count");
  int n = 0;
  {
    std::istringstream ss(line);
    std::string rest;
    if (!(ss >> n) || (ss >> rest)) throw GraphError("graph file line 1: expected vertex count");
  }
  std::vector<Edge> edges;
  while (next_line()) {
    std::istringstream ss(line);
    int i = 0;
    int j = 0;
    std::string rest;
    if (!(ss >> i >> j) || (ss >> rest)) {
      throw GraphError("graph file line " + std::to_string(line_no) + ": expected 'i j'");
    }
    if (i >= j) {
      throw GraphError("graph file line " + std::to_string(line_no) + ": edge must satisfy i < j");
    }
    edges.emplace_back(i, j);
  }
  return Graph(n, std::move(edges));
}

Graph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open graph file '" + path + "'");
  return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.n_vertices() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_graph_file(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw GraphError("cannot write graph file '" + path + "'");
  write_graph(out, g);
}

std::uint64_t graph_hash(const Graph& g) {
  std::ostringstream ss;
  write_graph(ss, g);
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : ss.str()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Graph remove_edges(const Graph& g, std::span<const Edge> to_remove) {
  std::vector<Edge> drop(to_remove.begin(), to_remove.end());
  std::sort(drop.begin(), drop.end());
  for (const auto& e : drop) {
    if (!g.has_edge(e.u, e.v)) {
      throw GraphError("cannot remove missing edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
    }
  }
  std::vector<Edge> kept;
  std::set_difference(g.edges().begin(), g.edges().end(), drop.begin(), drop.end(), std::back_inserter(kept));
  return Graph(g.n_vertices(), std::move(kept));
}

}  // namespace pwsync
