#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pwsync/graph.hpp"
#include "pwsync/min_density.hpp"
#include "pwsync/pws_dynamics.hpp"

namespace pwsync {

enum class QuadStatus { not_checked, verified, falsified };

const char* to_string(QuadStatus s);

/// Outcome of each hypothesis of the convergence theorem.
struct HypothesisRecord {
  QuadStatus sigma_quad = QuadStatus::not_checked;  // (a)(i)
  bool diffusive_connected = false;                 // (b)
  bool discontinuous_connected = false;             // (b)
  bool mu2_lower_pgamma_positive = false;           // (a)(ii)
  bool mu_inf_lower_pgammad_positive = false;       // (a)(ii)

  bool all_hold() const {
    return sigma_quad != QuadStatus::falsified && diffusive_connected && discontinuous_connected &&
           mu2_lower_pgamma_positive && mu_inf_lower_pgammad_positive;
  }
};

struct ThresholdReport {
  double c_star = 0.0;
  double cd_star = 0.0;
  double lambda2 = 0.0;
  double delta_d = 0.0;
  double mu2_q = 0.0;
  double mu2_lower_pgamma = 0.0;
  double mu_inf_m = 0.0;
  double mu_inf_lower_pgammad = 0.0;
  HypothesisRecord hypotheses;

  /// Which solver produced delta_d. A heuristic delta is an upper bound on
  /// the true minimum density, so cd_star is then not certified sufficient.
  DensityMethod delta_method = DensityMethod::exact;
  bool delta_certified = true;
  bool lambda2_overridden = false;
  bool delta_overridden = false;
  std::optional<Cut> sparsest_cut;
};

/// c* = mu2(Q) / (lambda2 * mu2^-(P Gamma))
double critical_diffusive_gain(double mu2_q, double lambda2, double mu2_lower_pgamma);

/// c_d* = mu_inf(M) / (delta * mu_inf^-(P Gamma_d))
double critical_discontinuous_gain(double mu_inf_m, double delta, double mu_inf_lower_pgammad);

inline constexpr double kHypothesisTolerance = 1e-12;

struct ThresholdOptions {
  int exact_cap = kExactSizeCap;
  std::uint64_t heuristic_seed = 0;
  /// Replace the computed algebraic connectivity / minimum density.
  std::optional<double> lambda2_override;
  std::optional<double> delta_override;
  /// When set, the certificate is checked against this vector field.
  const PwsVectorField* field = nullptr;
  long quad_samples = 100000;
  double quad_radius = 10.0;
  std::uint64_t quad_seed = 1;
};

/// Critical coupling gains and every intermediate quantity.
/// Throws HypothesisError naming the violated clause when a layer is
/// disconnected or mu2^-(P Gamma), mu_inf^-(P Gamma_d) is not positive.
/// A falsified sigma-QUAD check is recorded but does not throw.
ThresholdReport compute_thresholds(const SigmaQuadCertificate& cert, const Eigen::MatrixXd& gamma,
                                   const Eigen::MatrixXd& gamma_d, const Graph& diffusive,
                                   const Graph& discontinuous, const ThresholdOptions& options = {});

struct ResilienceRow {
  std::size_t scenario = 0;
  std::string name;
  int edges_removed = 0;
  bool ok = false;
  std::string error;
  double delta = 0.0;
  double cd_star = 0.0;
  DensityMethod method = DensityMethod::exact;
};

struct RemovalScenario {
  std::string name;
  std::vector<Edge> edges;
};

/// Minimum density and c_d* after each edge-removal scenario, sorted by
/// c_d* (failed scenarios last, in input order).
std::vector<ResilienceRow> resilience_report(const Graph& base, const std::vector<RemovalScenario>& scenarios,
                                             const SigmaQuadCertificate& cert, const Eigen::MatrixXd& gamma_d,
                                             const ThresholdOptions& options = {});

/// Picks `count` edges crossing `cut` (inter-cluster) uniformly at random.
/// Throws InvalidArgument if the cut has fewer crossing edges.
std::vector<Edge> pick_inter_cluster_edges(const Graph& g, const Cut& cut, int count, std::uint64_t seed);

/// Picks `count` edges inside the clusters of `cut`, alternating between the
/// two sides (as evenly as their edge counts allow).
std::vector<Edge> pick_intra_cluster_edges(const Graph& g, const Cut& cut, int count, std::uint64_t seed);

}  // namespace pwsync
