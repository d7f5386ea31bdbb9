#pragma once

#include <cstdint>
#include <vector>

#include "pwsync/graph.hpp"

namespace pwsync {

/// A partition of the vertex set into V1 (side[i] == true) and V2.
struct Cut {
  std::vector<bool> side;
  int n1 = 0;
  int n2 = 0;
  int crossing = 0;  // b

  std::vector<int> part1() const;
  std::vector<int> part2() const;
  /// (N/2) * b / (n1 * n2)
  double density() const;
};

/// Builds a cut from a side assignment, counting crossing edges in `g`.
Cut make_cut(const Graph& g, std::vector<bool> side);

enum class DensityMethod { exact, heuristic, closed_form };

struct MinDensityResult {
  double delta = 0.0;
  Cut sparsest_cut;
  DensityMethod method = DensityMethod::exact;
};

const char* to_string(DensityMethod m);

inline constexpr int kExactSizeCap = 22;
inline constexpr int kHeuristicRestarts = 16;

/// Global minimum over all bipartitions by Gray-code enumeration.
///
/// Ties in density are resolved towards the smallest |V1|, then towards the
/// lexicographically smallest sorted V1 vertex list. Throws GraphError if `g`
/// is disconnected and InvalidArgument if N exceeds `size_cap` (hard limit 30).
MinDensityResult min_density_exact(const Graph& g, int size_cap = kExactSizeCap);

/// Upper bound on the minimum density from size-constrained Kernighan-Lin
/// local search, one run per split (k, N-k) for k = 1..N/2.
MinDensityResult min_density_heuristic(const Graph& g, std::uint64_t seed, int restarts = kHeuristicRestarts);

/// Exact solver up to `size_cap`, heuristic above.
MinDensityResult min_density(const Graph& g, std::uint64_t seed = 0, int size_cap = kExactSizeCap);

/// Closed-form minimum density for complete, star, path, ring and
/// nearest_neighbours topologies. Throws InvalidArgument for other kinds.
double min_density_closed_form(const Topology& topology, int n);

/// Strict weak ordering used to pick among equally sparse cuts.
/// Returns true if `a` should be preferred over `b`.
bool cut_preferred(const Cut& a, const Cut& b);

}  // namespace pwsync
