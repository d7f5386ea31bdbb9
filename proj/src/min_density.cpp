#include "pwsync/min_density.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>

#include "pwsync/error.hpp"

namespace pwsync {

std::vector<int> Cut::part1() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < side.size(); ++i)
    if (side[i]) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> Cut::part2() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < side.size(); ++i)
    if (!side[i]) out.push_back(static_cast<int>(i));
  return out;
}

double Cut::density() const {
  const double n = static_cast<double>(n1 + n2);
  return (n / 2.0) * static_cast<double>(crossing) / (static_cast<double>(n1) * static_cast<double>(n2));
}

const char* to_string(DensityMethod m) {
  switch (m) {
    case DensityMethod::exact: return "exact";
    case DensityMethod::heuristic: return "heuristic";
    case DensityMethod::closed_form: return "closed_form";
  }
  return "unknown";
}

namespace {

// V1 is the smaller side; on equal sizes it is the side holding vertex 0.
std::vector<bool> canonical_side(std::vector<bool> side) {
  const auto n1 = std::count(side.begin(), side.end(), true);
  const auto n2 = static_cast<std::ptrdiff_t>(side.size()) - n1;
  if (n1 > n2 || (n1 == n2 && !side.front())) side.flip();
  return side;
}

void require_cuttable(const Graph& g) {
  if (g.n_vertices() < 2) throw InvalidArgument("minimum density needs at least 2 vertices");
  if (!is_connected(g)) throw GraphError("minimum density undefined: graph is disconnected (a cut with b = 0 exists)");
}

}  // namespace

Cut make_cut(const Graph& g, std::vector<bool> side) {
  if (static_cast<int>(side.size()) != g.n_vertices()) {
    throw InvalidArgument("cut side assignment has wrong length");
  }
  Cut cut;
  cut.side = canonical_side(std::move(side));
  cut.n1 = static_cast<int>(std::count(cut.side.begin(), cut.side.end(), true));
  cut.n2 = g.n_vertices() - cut.n1;
  if (cut.n1 == 0) throw InvalidArgument("cut must leave both sides nonempty");
  for (const auto& e : g.edges())
    if (cut.side[static_cast<std::size_t>(e.u)] != cut.side[static_cast<std::size_t>(e.v)]) ++cut.crossing;
  return cut;
}

bool cut_preferred(const Cut& a, const Cut& b) {
  const auto lhs = static_cast<std::int64_t>(a.crossing) * b.n1 * b.n2;
  const auto rhs = static_cast<std::int64_t>(b.crossing) * a.n1 * a.n2;
  if (lhs != rhs) return lhs < rhs;
  if (a.n1 != b.n1) return a.n1 < b.n1;
  return a.part1() < b.part1();
}

MinDensityResult min_density_exact(const Graph& g, int size_cap) {
  require_cuttable(g);
  const int n = g.n_vertices();
  if (n > std::min(size_cap, 30)) {
    throw InvalidArgument("exact minimum density limited to N <= " + std::to_string(std::min(size_cap, 30)) +
                          ", got N = " + std::to_string(n));
  }
  using Mask = std::uint32_t;
  const Mask full = n == 32 ? ~Mask{0} : ((Mask{1} << n) - 1);
  std::vector<Mask> adj(static_cast<std::size_t>(n), 0);
  for (const auto& e : g.edges()) {
    adj[static_cast<std::size_t>(e.u)] |= Mask{1} << e.v;
    adj[static_cast<std::size_t>(e.v)] |= Mask{1} << e.u;
  }

  auto canonical = [full](Mask s) {
    const Mask c = full & ~s;
    const int ps = std::popcount(s);
    const int pc = std::popcount(c);
    if (ps != pc) return ps < pc ? s : c;
    return (s & 1U) ? s : c;
  };
  // same density: smaller V1 first, then the set owning the lowest differing vertex
  auto better_tie = [](Mask a, Mask b) {
    const int pa = std::popcount(a);
    const int pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    const Mask diff = a ^ b;
    return diff != 0 && (a & (diff & (~diff + 1))) != 0;
  };

  // Vertex n-1 stays in V2; Gray code walks the remaining 2^(n-1) - 1 subsets.
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  Mask s = 0;
  int crossing = 0;
  Mask best = 0;
  std::int64_t best_b = -1;
  std::int64_t best_prod = 1;
  for (std::uint64_t i = 1; i < count; ++i) {
    const int v = std::countr_zero(i);
    const Mask bit = Mask{1} << v;
    const Mask same = (s & bit) ? s : (full & ~s);
    const int same_nb = std::popcount(adj[static_cast<std::size_t>(v)] & same);
    const int other_nb = std::popcount(adj[static_cast<std::size_t>(v)]) - same_nb;
    crossing += same_nb - other_nb;
    s ^= bit;

    const std::int64_t n1 = std::popcount(s);
    const std::int64_t prod = n1 * (n - n1);
    if (best_b < 0) {
      best = canonical(s);
      best_b = crossing;
      best_prod = prod;
      continue;
    }
    const std::int64_t lhs = crossing * best_prod;
    const std::int64_t rhs = best_b * prod;
    if (lhs < rhs) {
      best = canonical(s);
      best_b = crossing;
      best_prod = prod;
    } else if (lhs == rhs) {
      const Mask c = canonical(s);
      if (better_tie(c, best)) best = c;
    }
  }

  std::vector<bool> side(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) side[static_cast<std::size_t>(v)] = (best >> v) & 1U;
  MinDensityResult result;
  result.sparsest_cut = make_cut(g, std::move(side));
  result.delta = result.sparsest_cut.density();
  result.method = DensityMethod::exact;
  return result;
}

namespace {

class KernighanLin {
public:
  explicit KernighanLin(const Graph& g) : g_(g), n_(g.n_vertices()), adj_(static_cast<std::size_t>(n_ * n_), 0) {
    for (const auto& e : g.edges()) {
      adj_[idx(e.u, e.v)] = 1;
      adj_[idx(e.v, e.u)] = 1;
    }
  }

  // Refines `side` in place keeping |V1| fixed; returns crossing count.
  int refine(std::vector<bool>& side) {
    side_ = side;
    compute_d();
    while (true) {
      const int gain = pass();
      if (gain <= 0) break;
    }
    side = side_;
    int crossing = 0;
    for (const auto& e : g_.edges())
      if (side_[static_cast<std::size_t>(e.u)] != side_[static_cast<std::size_t>(e.v)]) ++crossing;
    return crossing;
  }

private:
  std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a * n_ + b); }

  // d[v] = external - internal edges of v
  void compute_d() {
    d_.assign(static_cast<std::size_t>(n_), 0);
    for (int v = 0; v < n_; ++v) {
      for (int w : g_.neighbours(v)) d_[static_cast<std::size_t>(v)] += side_[static_cast<std::size_t>(v)] != side_[static_cast<std::size_t>(w)] ? 1 : -1;
    }
  }

  void move(int v) {
    const auto vs = static_cast<std::size_t>(v);
    for (int w : g_.neighbours(v)) {
      // after the move, w's relation to v flips
      d_[static_cast<std::size_t>(w)] += side_[static_cast<std::size_t>(w)] == side_[vs] ? 2 : -2;
    }
    d_[vs] = -d_[vs];
    side_[vs] = !side_[vs];
  }

  // One KL pass; applies the best prefix of swaps. Returns its total gain.
  int pass() {
    std::vector<char> locked(static_cast<std::size_t>(n_), 0);
    std::vector<std::pair<int, int>> swaps;
    int cumulative = 0;
    int best_gain = 0;
    std::size_t best_len = 0;
    while (true) {
      int best_a = -1;
      int best_b = -1;
      int best = 0;
      for (int a = 0; a < n_; ++a) {
        if (locked[static_cast<std::size_t>(a)] || !side_[static_cast<std::size_t>(a)]) continue;
        for (int b = 0; b < n_; ++b) {
          if (locked[static_cast<std::size_t>(b)] || side_[static_cast<std::size_t>(b)]) continue;
          const int gain = d_[static_cast<std::size_t>(a)] + d_[static_cast<std::size_t>(b)] - 2 * adj_[idx(a, b)];
          if (best_a < 0 || gain > best) {
            best = gain;
            best_a = a;
            best_b = b;
          }
        }
      }
      if (best_a < 0) break;
      move(best_a);
      move(best_b);
      locked[static_cast<std::size_t>(best_a)] = 1;
      locked[static_cast<std::size_t>(best_b)] = 1;
      swaps.emplace_back(best_a, best_b);
      cumulative += best;
      if (cumulative > best_gain) {
        best_gain = cumulative;
        best_len = swaps.size();
      }
    }
    for (std::size_t i = swaps.size(); i > best_len; --i) {
      move(swaps[i - 1].second);
      move(swaps[i - 1].first);
    }
    return best_gain;
  }

  const Graph& g_;
  int n_;
  std::vector<char> adj_;
  std::vector<bool> side_;
  std::vector<int> d_;
};

}  // namespace

MinDensityResult min_density_heuristic(const Graph& g, std::uint64_t seed, int restarts) {
  require_cuttable(g);
  if (restarts < 1) throw InvalidArgument("heuristic needs at least one restart");
  const int n = g.n_vertices();
  std::mt19937_64 rng(seed);
  KernighanLin kl(g);
  std::vector<int> order(static_cast<std::size_t>(n));

  MinDensityResult result;
  result.method = DensityMethod::heuristic;
  bool have = false;
  for (int k = 1; k <= n / 2; ++k) {
    for (int r = 0; r < restarts; ++r) {
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      std::vector<bool> side(static_cast<std::size_t>(n), false);
      for (int i = 0; i < k; ++i) side[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;
      kl.refine(side);
      Cut cut = make_cut(g, std::move(side));
      if (!have || cut_preferred(cut, result.sparsest_cut)) {
        result.sparsest_cut = std::move(cut);
        have = true;
      }
    }
  }
  result.delta = result.sparsest_cut.density();
  return result;
}

MinDensityResult min_density(const Graph& g, std::uint64_t seed, int size_cap) {
  if (g.n_vertices() <= size_cap) return min_density_exact(g, size_cap);
  return min_density_heuristic(g, seed);
}

double min_density_closed_form(const Topology& topology, int n) {
  if (n < 2) throw InvalidArgument("closed form needs n >= 2");
  const double nn = n;
  const bool even = n % 2 == 0;
  switch (topology.kind) {
    case TopologyKind::complete:
      return nn / 2.0;
    case TopologyKind::star:
      return nn / (2.0 * (nn - 1.0));
    case TopologyKind::path:
      return even ? 2.0 / nn : 2.0 * nn / (nn * nn - 1.0);
    case TopologyKind::ring:
      if (n < 3) throw InvalidArgument("ring needs n >= 3");
      return even ? 4.0 / nn : 4.0 * nn / (nn * nn - 1.0);
    case TopologyKind::nearest_neighbours: {
      const int l = topology.neighbours;
      if (l < 1 || l > (n - 1) / 2) throw InvalidArgument("nearest_neighbours needs 1 <= l <= floor((n-1)/2)");
      double sum = 0.0;
      for (int k = 0; k < l; ++k) sum += l - k;
      return even ? 4.0 * sum / nn : 4.0 * nn * sum / (nn * nn - 1.0);
    }
    case TopologyKind::erdos_renyi:
      break;
  }
  throw InvalidArgument("no closed-form minimum density for topology '" + to_string(topology.kind) + "'");
}

}  // namespace pwsync
