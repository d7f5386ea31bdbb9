#include "pwsync/pws_dynamics.hpp"

#include <cmath>
#include <random>
#include <string>

#include "pwsync/error.hpp"
#include "pwsync/matrix_measures.hpp"

namespace pwsync {

PwsVectorField::PwsVectorField(Eigen::MatrixXd a, Eigen::VectorXd d, std::vector<SwitchTerm> switches)
    : a_(std::move(a)), d_(std::move(d)), switches_(std::move(switches)) {
  if (a_.rows() != a_.cols() || a_.rows() == 0) throw InvalidArgument("system matrix A must be square and nonempty");
  if (d_.size() == 0) d_ = Eigen::VectorXd::Zero(a_.rows());
  if (d_.size() != a_.rows()) throw InvalidArgument("offset d has wrong dimension");
  for (std::size_t k = 0; k < switches_.size(); ++k) {
    const auto& s = switches_[k];
    if (s.gain.size() != a_.rows()) {
      throw InvalidArgument("switch term " + std::to_string(k) + ": gain has wrong dimension");
    }
    if (s.coordinate < 0 || s.coordinate >= a_.rows()) {
      throw InvalidArgument("switch term " + std::to_string(k) + ": coordinate out of range");
    }
  }
}

Eigen::VectorXd PwsVectorField::evaluate(const Eigen::Ref<const Eigen::VectorXd>& x, double /*t*/) const {
  if (x.size() != a_.rows()) {
    throw InvalidArgument("state has dimension " + std::to_string(x.size()) + ", expected " +
                          std::to_string(a_.rows()));
  }
  Eigen::VectorXd out = a_ * x + d_;
  for (const auto& s : switches_) out -= s.gain * sign(x(s.coordinate));
  return out;
}

Eigen::VectorXd PwsVectorField::switching_bound() const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(a_.rows());
  for (const auto& s : switches_) m += 2.0 * s.gain.cwiseAbs();
  return m;
}

PwsVectorField relay_system() {
  Eigen::MatrixXd a(3, 3);
  a << 1.51, 1.0, 0.0,  //
      -99.922, 0.0, 1.0,  //
      -5.0, 0.0, 0.0;
  Eigen::VectorXd b(3);
  b << 1.0, -2.0, 1.0;
  return PwsVectorField(a, Eigen::VectorXd::Zero(3), {SwitchTerm{b, 0}});
}

void require_positive_definite(const Eigen::Ref<const Eigen::MatrixXd>& p) {
  if (p.rows() != p.cols()) throw InvalidArgument("P must be square");
  const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
  if ((p - p.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw InvalidArgument("P must be symmetric");
  if (!(mu2_lower(p) > 0.0)) throw InvalidArgument("P must be positive definite");
}

SigmaQuadCertificate certificate_from_decomposition(const PwsVectorField& f, const Eigen::MatrixXd& p) {
  if (p.rows() != f.dimension()) throw InvalidArgument("P has wrong dimension");
  require_positive_definite(p);
  SigmaQuadCertificate cert;
  cert.p = p;
  cert.q = p * f.linear();
  cert.m = (p.cwiseAbs() * f.switching_bound()).asDiagonal();
  return cert;
}

SigmaQuadCheck verify_sigma_quad(const PwsVectorField& f, const SigmaQuadCertificate& cert, long n_samples,
                                 double radius, std::uint64_t seed) {
  const int n = f.dimension();
  if (n_samples < 1) throw InvalidArgument("verify_sigma_quad needs n_samples >= 1");
  if (cert.p.rows() != n || cert.q.rows() != n || cert.m.rows() != n) {
    throw InvalidArgument("certificate dimensions do not match the vector field");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto ball = [&]() {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = gauss(rng);
    const double norm = v.norm();
    if (norm == 0.0) return Eigen::VectorXd(Eigen::VectorXd::Zero(n));
    return Eigen::VectorXd(v * (radius * std::pow(unit(rng), 1.0 / n) / norm));
  };

  const auto& switches = f.switches();
  SigmaQuadCheck result;
  for (long i = 0; i < n_samples; ++i) {
    Eigen::VectorXd x1 = ball();
    Eigen::VectorXd x2 = ball();
    if (!switches.empty() && i % 4 >= 2) {
      const int h = switches[static_cast<std::size_t>((i / 4) % static_cast<long>(switches.size()))].coordinate;
      if (i % 4 == 2) {
        // straddle the plane x_h = 0 at small distance
        x1(h) = 0.1 * radius * unit(rng);
        x2(h) = -0.1 * radius * unit(rng);
      } else {
        x1(h) = 0.0;
      }
    }
    const Eigen::VectorXd dx = x1 - x2;
    const double lhs = dx.dot(cert.p * (f.evaluate(x1) - f.evaluate(x2)));
    const double rhs = dx.dot(cert.q * dx) + dx.dot(cert.m * sign(dx));
    ++result.samples_checked;
    if (lhs - rhs > kSigmaQuadSlack) {
      result.holds = false;
      result.counterexample = std::make_pair(x1, x2);
      result.violation = lhs - rhs;
      return result;
    }
  }
  return result;
}

}  // namespace pwsync
