#include "pwsync/star_oracle.hpp"

#include <cmath>
#include <random>
#include <string>

#include "pwsync/error.hpp"

namespace pwsync {

namespace {

const Graph& graph_of(const StarFunctionParams& params) {
  if (params.graph == nullptr) throw InvalidArgument("star function needs a graph");
  if (params.a1 < 0.0 || params.a2 < 0.0) throw InvalidArgument("star function needs a1, a2 >= 0");
  return *params.graph;
}

bool induces_connected(const Graph& g, const std::vector<int>& cluster, const std::vector<char>& member) {
  std::vector<char> seen(member.size(), 0);
  std::vector<int> stack{cluster.front()};
  seen[static_cast<std::size_t>(cluster.front())] = 1;
  std::size_t visited = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : g.neighbours(v)) {
      const auto ws = static_cast<std::size_t>(w);
      if (member[ws] && !seen[ws]) {
        seen[ws] = 1;
        ++visited;
        stack.push_back(w);
      }
    }
  }
  return visited == cluster.size();
}

}  // namespace

double phi(const StarFunctionParams& params, const Eigen::Ref<const Eigen::VectorXd>& e) {
  const Graph& g = graph_of(params);
  if (e.size() != g.n_vertices()) throw InvalidArgument("phi: vector has wrong dimension");
  if (std::abs(e.sum()) > kZeroSumTolerance) {
    throw InvalidArgument("phi: vector is not zero-sum (sum = " + std::to_string(e.sum()) + ")");
  }
  double edge_sum = 0.0;
  for (const auto& edge : g.edges()) edge_sum += std::abs(e(edge.u) - e(edge.v));
  return params.a1 * e.lpNorm<1>() - params.a2 * edge_sum;
}

void validate_bipartition(const Graph& g, const Bipartition& b) {
  const int n = g.n_vertices();
  if (b.cluster1.empty() || b.cluster2.empty()) throw InvalidArgument("bipartition clusters must be nonempty");
  std::vector<char> owner(static_cast<std::size_t>(n), 0);
  for (int pass = 1; pass <= 2; ++pass) {
    for (int v : pass == 1 ? b.cluster1 : b.cluster2) {
      if (v < 0 || v >= n) throw InvalidArgument("bipartition vertex " + std::to_string(v) + " out of range");
      if (owner[static_cast<std::size_t>(v)]) {
        throw InvalidArgument("bipartition vertex " + std::to_string(v) + " listed twice");
      }
      owner[static_cast<std::size_t>(v)] = static_cast<char>(pass);
    }
  }
  if (b.cluster1.size() + b.cluster2.size() != static_cast<std::size_t>(n)) {
    throw InvalidArgument("bipartition does not cover every vertex");
  }
  for (int pass = 1; pass <= 2; ++pass) {
    std::vector<char> member(static_cast<std::size_t>(n), 0);
    for (std::size_t v = 0; v < owner.size(); ++v) member[v] = owner[v] == pass;
    if (!induces_connected(g, pass == 1 ? b.cluster1 : b.cluster2, member)) {
      throw InvalidArgument("bipartition cluster " + std::to_string(pass) + " is not connected");
    }
  }
}

int crossing_edges(const Graph& g, const Bipartition& b) {
  std::vector<char> in1(static_cast<std::size_t>(g.n_vertices()), 0);
  for (int v : b.cluster1) in1[static_cast<std::size_t>(v)] = 1;
  int count = 0;
  for (const auto& e : g.edges())
    if (in1[static_cast<std::size_t>(e.u)] != in1[static_cast<std::size_t>(e.v)]) ++count;
  return count;
}

Eigen::VectorXd bipartition_generator(const Graph& g, const Bipartition& b) {
  validate_bipartition(g, b);
  const double n1 = static_cast<double>(b.cluster1.size());
  const double n2 = static_cast<double>(b.cluster2.size());
  const double eps2_ratio = -n1 / n2;
  // ||e||_2^2 = eps1^2 (N1 + N2 (N1/N2)^2) = 1
  const double eps1 = 1.0 / std::sqrt(n1 + n2 * eps2_ratio * eps2_ratio);
  Eigen::VectorXd e(g.n_vertices());
  for (int v : b.cluster1) e(v) = eps1;
  for (int v : b.cluster2) e(v) = eps2_ratio * eps1;
  return e;
}

double min_a2_for_bipartition(double a1, const Bipartition& b, const Graph& g) {
  validate_bipartition(g, b);
  const int crossing = crossing_edges(g, b);
  if (crossing == 0) throw InvalidArgument("bipartition has no crossing edge");
  const double n1 = static_cast<double>(b.cluster1.size());
  const double n2 = static_cast<double>(b.cluster2.size());
  return 2.0 * a1 * n1 * n2 / ((n1 + n2) * crossing);
}

std::vector<Bipartition> enumerate_bipartitions(const Graph& g) {
  const int n = g.n_vertices();
  if (n > 22) throw InvalidArgument("bipartition enumeration limited to N <= 22");
  std::vector<Bipartition> out;
  if (n < 2) return out;
  // vertex 0 always in cluster1; mask ranges over vertices 1..n-1 joining cluster2
  const std::uint32_t count = 1U << (n - 1);
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    Bipartition b;
    b.cluster1.push_back(0);
    for (int v = 1; v < n; ++v) ((mask >> (v - 1)) & 1U ? b.cluster2 : b.cluster1).push_back(v);
    std::vector<char> member(static_cast<std::size_t>(n), 0);
    for (int v : b.cluster1) member[static_cast<std::size_t>(v)] = 1;
    if (!induces_connected(g, b.cluster1, member)) continue;
    for (auto& m : member) m = !m;
    if (!induces_connected(g, b.cluster2, member)) continue;
    out.push_back(std::move(b));
  }
  return out;
}

double bipartition_a2_threshold(double a1, const Graph& g) {
  double best = 0.0;
  for (const auto& b : enumerate_bipartitions(g)) best = std::max(best, min_a2_for_bipartition(a1, b, g));
  return best;
}

SeminegativityCheck check_global_seminegativity(const StarFunctionParams& params, long n_samples,
                                                std::uint64_t seed) {
  const Graph& g = graph_of(params);
  if (!is_connected(g)) throw GraphError("seminegativity check needs a connected graph");
  const int n = g.n_vertices();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  SeminegativityCheck result;
  Eigen::VectorXd e(n);
  for (long s = 0; s < n_samples; ++s) {
    for (int i = 0; i < n; ++i) e(i) = gauss(rng);
    e.array() -= e.mean();
    e(n - 1) = -e.head(n - 1).sum();
    ++result.samples_checked;
    const double value = phi(params, e);
    if (value > kSeminegativityTolerance) {
      result.pass = false;
      result.violation = e;
      result.value = value;
      return result;
    }
  }
  return result;
}

}  // namespace pwsync
