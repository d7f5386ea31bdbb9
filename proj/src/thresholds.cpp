#include "pwsync/thresholds.hpp"

#include <algorithm>
#include <random>

#include "pwsync/error.hpp"
#include "pwsync/matrix_measures.hpp"

namespace pwsync {

const char* to_string(QuadStatus s) {
  switch (s) {
    case QuadStatus::not_checked: return "not_checked";
    case QuadStatus::verified: return "verified";
    case QuadStatus::falsified: return "falsified";
  }
  return "unknown";
}

double critical_diffusive_gain(double mu2_q, double lambda2, double mu2_lower_pgamma) {
  return mu2_q / (lambda2 * mu2_lower_pgamma);
}

double critical_discontinuous_gain(double mu_inf_m, double delta, double mu_inf_lower_pgammad) {
  return mu_inf_m / (delta * mu_inf_lower_pgammad);
}

namespace {

void check_dimensions(const SigmaQuadCertificate& cert, const Eigen::MatrixXd& gamma, const char* name) {
  const auto n = cert.p.rows();
  if (cert.p.cols() != n || cert.q.rows() != n || cert.q.cols() != n || cert.m.rows() != n || cert.m.cols() != n) {
    throw InvalidArgument("certificate matrices P, Q, M must share one square dimension");
  }
  if (gamma.rows() != n || gamma.cols() != n) {
    throw InvalidArgument(std::string(name) + " must be " + std::to_string(n) + "x" + std::to_string(n));
  }
}

double discontinuous_measure(const SigmaQuadCertificate& cert, const Eigen::MatrixXd& gamma_d) {
  const double value = mu_inf_lower(cert.p * gamma_d);
  if (!(value > kHypothesisTolerance)) {
    throw HypothesisError("(a)(ii)", "mu_inf^-(P Gamma_d) = " + std::to_string(value) + " is not positive");
  }
  return value;
}

}  // namespace

ThresholdReport compute_thresholds(const SigmaQuadCertificate& cert, const Eigen::MatrixXd& gamma,
                                   const Eigen::MatrixXd& gamma_d, const Graph& diffusive,
                                   const Graph& discontinuous, const ThresholdOptions& options) {
  check_dimensions(cert, gamma, "Gamma");
  check_dimensions(cert, gamma_d, "Gamma_d");
  require_positive_definite(cert.p);
  if (diffusive.n_vertices() != discontinuous.n_vertices()) {
    throw InvalidArgument("diffusive and discontinuous layers must have the same number of vertices");
  }

  ThresholdReport report;
  auto& hyp = report.hypotheses;
  hyp.diffusive_connected = is_connected(diffusive);
  hyp.discontinuous_connected = is_connected(discontinuous);
  if (!hyp.diffusive_connected) throw HypothesisError("(b)", "diffusive layer graph is not connected");
  if (!hyp.discontinuous_connected) throw HypothesisError("(b)", "discontinuous layer graph is not connected");

  report.mu2_lower_pgamma = mu2_lower(cert.p * gamma);
  hyp.mu2_lower_pgamma_positive = report.mu2_lower_pgamma > kHypothesisTolerance;
  if (!hyp.mu2_lower_pgamma_positive) {
    throw HypothesisError("(a)(ii)", "mu2^-(P Gamma) = " + std::to_string(report.mu2_lower_pgamma) +
                                         " is not positive");
  }
  report.mu_inf_lower_pgammad = discontinuous_measure(cert, gamma_d);
  hyp.mu_inf_lower_pgammad_positive = true;

  if (options.field != nullptr) {
    const auto check =
        verify_sigma_quad(*options.field, cert, options.quad_samples, options.quad_radius, options.quad_seed);
    hyp.sigma_quad = check.holds ? QuadStatus::verified : QuadStatus::falsified;
  }

  report.mu2_q = mu2(cert.q);
  report.mu_inf_m = mu_inf(cert.m);

  if (options.lambda2_override) {
    report.lambda2 = *options.lambda2_override;
    report.lambda2_overridden = true;
  } else {
    report.lambda2 = algebraic_connectivity(diffusive);
  }

  if (options.delta_override) {
    report.delta_d = *options.delta_override;
    report.delta_overridden = true;
    report.delta_method = DensityMethod::closed_form;
    report.delta_certified = false;
  } else {
    auto md = min_density(discontinuous, options.heuristic_seed, options.exact_cap);
    report.delta_d = md.delta;
    report.delta_method = md.method;
    report.delta_certified = md.method == DensityMethod::exact;
    report.sparsest_cut = std::move(md.sparsest_cut);
  }

  report.c_star = critical_diffusive_gain(report.mu2_q, report.lambda2, report.mu2_lower_pgamma);
  report.cd_star = critical_discontinuous_gain(report.mu_inf_m, report.delta_d, report.mu_inf_lower_pgammad);
  return report;
}

std::vector<ResilienceRow> resilience_report(const Graph& base, const std::vector<RemovalScenario>& scenarios,
                                             const SigmaQuadCertificate& cert, const Eigen::MatrixXd& gamma_d,
                                             const ThresholdOptions& options) {
  check_dimensions(cert, gamma_d, "Gamma_d");
  const double gamma_measure = discontinuous_measure(cert, gamma_d);
  const double m_measure = mu_inf(cert.m);

  std::vector<ResilienceRow> rows;
  rows.reserve(scenarios.size());
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    ResilienceRow row;
    row.scenario = i;
    row.name = scenarios[i].name;
    row.edges_removed = static_cast<int>(scenarios[i].edges.size());
    try {
      const Graph g = remove_edges(base, scenarios[i].edges);
      if (!is_connected(g)) throw GraphError("scenario disconnects the graph");
      const auto md = min_density(g, options.heuristic_seed, options.exact_cap);
      row.delta = md.delta;
      row.method = md.method;
      row.cd_star = critical_discontinuous_gain(m_measure, md.delta, gamma_measure);
      row.ok = true;
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ResilienceRow& a, const ResilienceRow& b) {
    if (a.ok != b.ok) return a.ok;
    return a.ok && a.cd_star < b.cd_star;
  });
  return rows;
}

namespace {

std::vector<Edge> sample(std::vector<Edge> pool, int count, std::mt19937_64& rng) {
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(static_cast<std::size_t>(count));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

std::vector<Edge> pick_inter_cluster_edges(const Graph& g, const Cut& cut, int count, std::uint64_t seed) {
  std::vector<Edge> crossing;
  for (const auto& e : g.edges())
    if (cut.side[static_cast<std::size_t>(e.u)] != cut.side[static_cast<std::size_t>(e.v)]) crossing.push_back(e);
  if (static_cast<int>(crossing.size()) < count) {
    throw InvalidArgument("cut has only " + std::to_string(crossing.size()) + " crossing edges, " +
                          std::to_string(count) + " requested");
  }
  std::mt19937_64 rng(seed);
  return sample(std::move(crossing), count, rng);
}

std::vector<Edge> pick_intra_cluster_edges(const Graph& g, const Cut& cut, int count, std::uint64_t seed) {
  std::vector<Edge> inside1;
  std::vector<Edge> inside2;
  for (const auto& e : g.edges()) {
    const bool s = cut.side[static_cast<std::size_t>(e.u)];
    if (s != cut.side[static_cast<std::size_t>(e.v)]) continue;
    (s ? inside1 : inside2).push_back(e);
  }
  if (static_cast<int>(inside1.size() + inside2.size()) < count) {
    throw InvalidArgument("clusters hold only " + std::to_string(inside1.size() + inside2.size()) +
                          " internal edges, " + std::to_string(count) + " requested");
  }
  int from1 = std::min<int>(count / 2, static_cast<int>(inside1.size()));
  int from2 = std::min<int>(count - from1, static_cast<int>(inside2.size()));
  from1 = count - from2;
  std::mt19937_64 rng(seed);
  auto picked = sample(std::move(inside1), from1, rng);
  auto more = sample(std::move(inside2), from2, rng);
  picked.insert(picked.end(), more.begin(), more.end());
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace pwsync
