#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "pwsync/graph.hpp"
#include "pwsync/pws_dynamics.hpp"

namespace pwsync {

/// Node states, one row per node.
using StateMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Uniform initial states in [-amplitude, amplitude]^n per node.
struct RandomInit {
  std::uint64_t seed = 0;
  double amplitude = 5.0;
};

struct ExactSign {};
/// sign(x) replaced by tanh(x / epsilon).
struct SmoothedSign {
  double epsilon = 1e-3;
};
using SignMode = std::variant<ExactSign, SmoothedSign>;

struct SimConfig {
  PwsVectorField field;
  Graph diffusive;
  Graph discontinuous;
  double c = 0.0;
  double c_d = 0.0;
  Eigen::MatrixXd gamma;
  Eigen::MatrixXd gamma_d;
  double dt = 1e-3;
  double t_end = 5.0;
  std::variant<RandomInit, StateMatrix> initial = RandomInit{};
  SignMode sign_mode = ExactSign{};
  /// Full states are stored every `decimation` steps (0 disables storage).
  int decimation = 10;
  /// Per-node error norms are stored alongside e_tot at every recorded step.
  bool record_node_errors = false;

  int n_nodes() const { return diffusive.n_vertices(); }
  /// Throws InvalidArgument describing the first inconsistency.
  void validate() const;
};

struct ErrorMetrics {
  double e_tot = 0.0;
  Eigen::VectorXd node_errors;  // ||x_i - mean(x)||_2
  Eigen::RowVectorXd average;
};

ErrorMetrics error_metrics(const Eigen::Ref<const StateMatrix>& states);

/// Control input of every node:
///   u_i = -c sum_j L_ij Gamma (x_j - x_i) - c_d sum_j Ld_ij Gamma_d sign(x_j - x_i)
StateMatrix coupling(const Eigen::Ref<const StateMatrix>& states, const SimConfig& config);

struct SimulationRun {
  std::vector<double> times;
  std::vector<double> e_tot;
  /// Per-node error norms, parallel to `times` (empty unless requested).
  std::vector<Eigen::VectorXd> node_errors;
  StateMatrix initial_states;
  StateMatrix final_states;
  std::vector<double> trajectory_times;
  std::vector<StateMatrix> trajectory;
  bool diverged = false;
  /// Upper estimate of the chattering band left by the discrete sign law: 2 c_d dmax dt ||Gamma_d||_inf.
  double chattering_band = 0.0;
};

StateMatrix initial_states(const SimConfig& config);

/// Explicit Euler integration with step dt up to t_end. Stops early, setting
/// `diverged`, if a state becomes non-finite.
SimulationRun simulate(const SimConfig& config);

/// CSV with header `t,e_tot[,e_node_0,...]`, one row every `decimation` steps
/// (plus the final step). Numbers use shortest round-trip formatting.
void write_csv(std::ostream& out, const SimulationRun& run, int decimation = 1);

/// Shortest decimal string that parses back to `x`.
std::string format_double(double x);

}  // namespace pwsync
