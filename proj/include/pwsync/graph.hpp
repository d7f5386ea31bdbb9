#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace pwsync {

/// Undirected edge stored with `u < v`.
struct Edge {
  int u = 0;
  int v = 0;

  Edge() = default;
  Edge(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected, unweighted simple graph on vertices 0..N-1.
///
/// Edges are kept sorted lexicographically; that order fixes the column
/// order of the incidence matrix.
class Graph {
public:
  /// Throws GraphError on self-loops, duplicates, or out-of-range endpoints.
  explicit Graph(int n_vertices, std::vector<Edge> edges = {});

  int n_vertices() const noexcept { return n_; }
  int n_edges() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<int>& neighbours(int v) const { return adjacency_.at(static_cast<std::size_t>(v)); }
  int degree(int v) const { return static_cast<int>(neighbours(v).size()); }
  bool has_edge(int a, int b) const;

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

Eigen::MatrixXd laplacian(const Graph& g);

/// N x N_E signed incidence matrix: column k has +1 at the smaller endpoint
/// of edge k and -1 at the larger one.
Eigen::MatrixXi incidence(const Graph& g);

bool is_connected(const Graph& g);

/// Second-smallest Laplacian eigenvalue (0 for a single vertex).
double algebraic_connectivity(const Graph& g);

enum class TopologyKind { complete, star, path, ring, nearest_neighbours, erdos_renyi };

struct Topology {
  TopologyKind kind = TopologyKind::ring;
  int neighbours = 1;       // l, for nearest_neighbours
  double probability = 0.2; // p, for erdos_renyi
  std::uint64_t seed = 0;   // erdos_renyi only

  static Topology complete() { return {TopologyKind::complete}; }
  static Topology star() { return {TopologyKind::star}; }
  static Topology path() { return {TopologyKind::path}; }
  static Topology ring() { return {TopologyKind::ring}; }
  static Topology nearest_neighbours(int l) { return {TopologyKind::nearest_neighbours, l}; }
  static Topology erdos_renyi(double p, std::uint64_t seed) {
    return {TopologyKind::erdos_renyi, 1, p, seed};
  }
};

inline constexpr int kErdosRenyiRetries = 1000;

/// Named topologies. Star uses vertex 0 as hub; nearest_neighbours(l) links
/// each vertex to the l following ones around a ring. Erdos-Renyi draws are
/// repeated until the result is connected (at most kErdosRenyiRetries draws).
Graph generate_topology(const Topology& topology, int n);

std::string to_string(TopologyKind kind);
TopologyKind topology_kind_from_string(const std::string& name);

/// Plain-text graph format: first line N, then one "i j" pair per line.
Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Graph& g);
void write_graph_file(const std::string& path, const Graph& g);

/// 64-bit FNV-1a hash of the canonical text serialization.
std::uint64_t graph_hash(const Graph& g);

/// Copy of `g` without the listed edges. Throws GraphError if one is absent.
Graph remove_edges(const Graph& g, std::span<const Edge> to_remove);

}  // namespace pwsync
