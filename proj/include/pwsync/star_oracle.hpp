#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "pwsync/graph.hpp"

namespace pwsync {

// Numerical counterparts of the star-function argument behind the
// discontinuous-gain threshold. The star function of a graph G is
//
//   phi_G(e) = a1 * ||e||_1 - a2 * ||B^T e||_1,   e in S = {e : sum(e) = 0},
//
// with B the incidence matrix. It is seminegative on S exactly when it is
// seminegative on all bipartition generators, i.e. when a2 >= a1 / delta_G.

struct StarFunctionParams {
  double a1 = 1.0;
  double a2 = 1.0;
  const Graph* graph = nullptr;
};

/// Two disjoint clusters covering the vertex set, each inducing a connected subgraph.
struct Bipartition {
  std::vector<int> cluster1;
  std::vector<int> cluster2;
};

inline constexpr double kZeroSumTolerance = 1e-12;
inline constexpr double kSeminegativityTolerance = 1e-10;

/// Throws InvalidArgument if sum(e) is not zero or the dimension is wrong.
double phi(const StarFunctionParams& params, const Eigen::Ref<const Eigen::VectorXd>& e);

/// Throws InvalidArgument unless `b` is a valid bipartition of `g`.
void validate_bipartition(const Graph& g, const Bipartition& b);

/// Number of edges between the two clusters.
int crossing_edges(const Graph& g, const Bipartition& b);

/// Unit-norm vector equal to eps1 > 0 on cluster1 and -(N1/N2) eps1 on cluster2.
Eigen::VectorXd bipartition_generator(const Graph& g, const Bipartition& b);

/// Smallest a2 making phi_G nonpositive on the generator of `b`:
/// 2 a1 N1 N2 / ((N1 + N2) b). Throws InvalidArgument if no edge crosses.
double min_a2_for_bipartition(double a1, const Bipartition& b, const Graph& g);

/// All bipartitions of `g` with both clusters connected (cluster1 holds
/// vertex 0). Exponential; throws InvalidArgument for N > 22.
std::vector<Bipartition> enumerate_bipartitions(const Graph& g);

/// max over all bipartitions of min_a2_for_bipartition(a1, ., g).
double bipartition_a2_threshold(double a1, const Graph& g);

struct SeminegativityCheck {
  bool pass = true;
  long samples_checked = 0;
  std::optional<Eigen::VectorXd> violation;
  double value = 0.0;  // phi at the violation
};

/// Samples Gaussian vectors projected onto S and reports the first with
/// phi > kSeminegativityTolerance.
SeminegativityCheck check_global_seminegativity(const StarFunctionParams& params, long n_samples,
                                                std::uint64_t seed);

}  // namespace pwsync
