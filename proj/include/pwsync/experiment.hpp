#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pwsync/graph.hpp"
#include "pwsync/pws_dynamics.hpp"
#include "pwsync/simulator.hpp"
#include "pwsync/thresholds.hpp"

namespace pwsync {

inline constexpr int kExperimentSchemaVersion = 1;
inline constexpr double kAutoGainFactor = 1.05;

/// A coupling layer given either as a named topology or as a graph file.
struct LayerSpec {
  std::optional<Topology> topology;
  std::string file;
  Eigen::MatrixXd gamma;  // inner coupling matrix
};

/// Parsed experiment document (JSON).
///
///   {
///     "schema_version": 1,
///     "system": {"A": [[..]], "d": [..], "switches": [{"gain": [..], "coordinate": 0}],
///                "P": [[..]], "M": [[..]]},
///     "layers": {"n": 30, "diffusive": {"topology": "ring", "gamma": [[..]]},
///                "discontinuous": {"topology": "erdos_renyi", "p": 0.2, "seed": 3} | {"file": "g.txt"}},
///     "gains": {"c": 51 | "auto", "c_d": 3.2 | "auto"},
///     "thresholds": {"exact_cap": 22, "seed": 0, "lambda2": 1.0, "delta": 1.29, "quad_samples": 100000},
///     "sim": {"dt": 0.001, "t_end": 5, "seed": 1, "init_amplitude": 5, "sign_mode": "exact" | "smoothed",
///             "epsilon": 0.001},
///     "output": {"directory": "out", "decimation": 10, "node_errors": false},
///     "resilience": {"scenarios": [{"name": "A", "remove": [[2, 9], [5, 9]]}]}
///   }
///
/// Everything but "system.A" and "layers" has a default. Graph file paths are
/// resolved relative to the document's directory.
struct ExperimentConfig {
  PwsVectorField field{Eigen::MatrixXd::Identity(1, 1), Eigen::VectorXd::Zero(1)};
  Eigen::MatrixXd p;
  std::optional<Eigen::MatrixXd> m_override;

  int n_nodes = 0;
  LayerSpec diffusive;
  LayerSpec discontinuous;

  std::optional<double> c;    // nullopt = auto
  std::optional<double> c_d;  // nullopt = auto

  int exact_cap = kExactSizeCap;
  std::uint64_t density_seed = 0;
  std::optional<double> lambda2_override;
  std::optional<double> delta_override;
  long quad_samples = 100000;

  double dt = 1e-3;
  double t_end = 5.0;
  std::uint64_t seed = 0;
  double init_amplitude = 5.0;
  SignMode sign_mode = ExactSign{};

  std::string output_dir = "out";
  int decimation = 10;
  bool node_errors = false;

  std::vector<RemovalScenario> scenarios;
};

/// Throws ConfigError naming the offending field.
ExperimentConfig parse_experiment(std::string_view json_text, const std::string& base_dir = ".");
ExperimentConfig load_experiment(const std::string& path);

Graph build_layer(const LayerSpec& layer, int n_nodes);

/// Constructive certificate (Q = P A, M = diag(|P| m)), with M replaced by
/// the document's override when present.
SigmaQuadCertificate experiment_certificate(const ExperimentConfig& cfg);

ThresholdOptions experiment_threshold_options(const ExperimentConfig& cfg);

/// Gains resolved for simulation; "auto" entries become kAutoGainFactor times
/// the thresholds and require every theorem hypothesis to hold.
struct ResolvedGains {
  double c = 0.0;
  double c_d = 0.0;
  std::optional<ThresholdReport> report;
};

ResolvedGains resolve_gains(const ExperimentConfig& cfg, const Graph& diffusive, const Graph& discontinuous);

SimConfig make_sim_config(const ExperimentConfig& cfg, const Graph& diffusive, const Graph& discontinuous,
                          double c, double c_d);

}  // namespace pwsync
