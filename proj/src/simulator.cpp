#include "pwsync/simulator.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <random>
#include <string>

#include "pwsync/error.hpp"
#include "pwsync/matrix_measures.hpp"

namespace pwsync {

void SimConfig::validate() const {
  const int n = field.dimension();
  if (diffusive.n_vertices() != discontinuous.n_vertices()) {
    throw InvalidArgument("diffusive and discontinuous layers must have the same number of vertices");
  }
  if (gamma.rows() != n || gamma.cols() != n) throw InvalidArgument("Gamma must be " + std::to_string(n) + "x" + std::to_string(n));
  if (gamma_d.rows() != n || gamma_d.cols() != n) {
    throw InvalidArgument("Gamma_d must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (!(c >= 0.0) || !(c_d >= 0.0)) throw InvalidArgument("coupling gains must be nonnegative");
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (!(t_end > dt)) throw InvalidArgument("t_end must exceed dt");
  if (decimation < 0) throw InvalidArgument("decimation must be nonnegative");
  if (const auto* m = std::get_if<StateMatrix>(&initial)) {
    if (m->rows() != n_nodes() || m->cols() != n) {
      throw InvalidArgument("initial states must be " + std::to_string(n_nodes()) + "x" + std::to_string(n));
    }
  }
  if (const auto* s = std::get_if<SmoothedSign>(&sign_mode); s && !(s->epsilon > 0.0)) {
    throw InvalidArgument("smoothed sign epsilon must be positive");
  }
}

ErrorMetrics error_metrics(const Eigen::Ref<const StateMatrix>& states) {
  ErrorMetrics m;
  const auto n_nodes = states.rows();
  m.node_errors = Eigen::VectorXd::Zero(n_nodes);
  if (n_nodes == 0) return m;
  m.average = states.colwise().mean();
  for (Eigen::Index i = 0; i < n_nodes; ++i) m.node_errors(i) = (states.row(i) - m.average).norm();
  m.e_tot = m.node_errors.mean();
  return m;
}

StateMatrix coupling(const Eigen::Ref<const StateMatrix>& states, const SimConfig& config) {
  const auto n_nodes = states.rows();
  const auto dim = states.cols();
  StateMatrix diffusive = StateMatrix::Zero(n_nodes, dim);
  StateMatrix switching = StateMatrix::Zero(n_nodes, dim);

  // -sum_j L_ij (x_j - x_i) = sum over neighbours j of (x_j - x_i)
  if (config.c != 0.0) {
    for (const auto& e : config.diffusive.edges()) {
      const Eigen::RowVectorXd diff = states.row(e.v) - states.row(e.u);
      diffusive.row(e.u) += diff;
      diffusive.row(e.v) -= diff;
    }
  }
  if (config.c_d != 0.0) {
    const auto* smooth = std::get_if<SmoothedSign>(&config.sign_mode);
    for (const auto& e : config.discontinuous.edges()) {
      Eigen::RowVectorXd s = states.row(e.v) - states.row(e.u);
      if (smooth) {
        s = s.unaryExpr([eps = smooth->epsilon](double x) { return std::tanh(x / eps); });
      } else {
        s = s.unaryExpr([](double x) { return sign(x); });
      }
      switching.row(e.u) += s;
      switching.row(e.v) -= s;
    }
  }
  StateMatrix u = StateMatrix::Zero(n_nodes, dim);
  if (config.c != 0.0) u += config.c * diffusive * config.gamma.transpose();
  if (config.c_d != 0.0) u += config.c_d * switching * config.gamma_d.transpose();
  return u;
}

StateMatrix initial_states(const SimConfig& config) {
  if (const auto* m = std::get_if<StateMatrix>(&config.initial)) return *m;
  const auto& init = std::get<RandomInit>(config.initial);
  std::mt19937_64 rng(init.seed);
  std::uniform_real_distribution<double> dist(-init.amplitude, init.amplitude);
  StateMatrix x(config.n_nodes(), config.field.dimension());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index h = 0; h < x.cols(); ++h) x(i, h) = dist(rng);
  return x;
}

SimulationRun simulate(const SimConfig& config) {
  config.validate();
  SimulationRun run;
  StateMatrix x = initial_states(config);
  run.initial_states = x;

  int max_degree = 0;
  for (int v = 0; v < config.discontinuous.n_vertices(); ++v) max_degree = std::max(max_degree, config.discontinuous.degree(v));
  run.chattering_band = 2.0 * config.c_d * max_degree * config.dt * config.gamma_d.cwiseAbs().rowwise().sum().maxCoeff();

  const long steps = std::lround(config.t_end / config.dt);
  run.times.reserve(static_cast<std::size_t>(steps) + 1);
  run.e_tot.reserve(static_cast<std::size_t>(steps) + 1);

  auto record = [&](long k) {
    const double t = static_cast<double>(k) * config.dt;
    const auto metrics = error_metrics(x);
    run.times.push_back(t);
    run.e_tot.push_back(metrics.e_tot);
    if (config.record_node_errors) run.node_errors.push_back(metrics.node_errors);
    if (config.decimation > 0 && k % config.decimation == 0) {
      run.trajectory_times.push_back(t);
      run.trajectory.push_back(x);
    }
  };

  record(0);
  StateMatrix rhs(x.rows(), x.cols());
  for (long k = 1; k <= steps; ++k) {
    rhs = coupling(x, config);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      rhs.row(i) += config.field.evaluate(x.row(i).transpose(), static_cast<double>(k - 1) * config.dt).transpose();
    }
    x += config.dt * rhs;
    if (!x.allFinite()) {
      run.diverged = true;
      break;
    }
    record(k);
  }
  run.final_states = x;
  return run;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const SimulationRun& run, int decimation) {
  if (decimation < 1) decimation = 1;
  const bool nodes = !run.node_errors.empty();
  out << "t,e_tot";
  if (nodes) {
    for (Eigen::Index i = 0; i < run.node_errors.front().size(); ++i) out << ",e_node_" << i;
  }
  out << '\n';
  const std::size_t rows = run.times.size();
  for (std::size_t k = 0; k < rows; ++k) {
    if (k % static_cast<std::size_t>(decimation) != 0 && k + 1 != rows) continue;
    out << format_double(run.times[k]) << ',' << format_double(run.e_tot[k]);
    if (nodes) {
      for (Eigen::Index i = 0; i < run.node_errors[k].size(); ++i) out << ',' << format_double(run.node_errors[k](i));
    }
    out << '\n';
  }
}

}  // namespace pwsync
