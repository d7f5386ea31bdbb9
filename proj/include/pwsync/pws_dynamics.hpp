#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace pwsync {

/// Contributes -gain * sign(x[coordinate]) to the vector field.
struct SwitchTerm {
  Eigen::VectorXd gain;
  int coordinate = 0;
};

/// Piecewise-smooth node dynamics
///
///   f(x; t) = A x + d - sum_k B_k sign(x[h_k])
///
/// split into an affine (QUAD) part and a bounded switching part.
class PwsVectorField {
public:
  /// Throws InvalidArgument on inconsistent dimensions.
  PwsVectorField(Eigen::MatrixXd a, Eigen::VectorXd d, std::vector<SwitchTerm> switches = {});

  int dimension() const noexcept { return static_cast<int>(a_.rows()); }
  const Eigen::MatrixXd& linear() const noexcept { return a_; }
  const Eigen::VectorXd& offset() const noexcept { return d_; }
  const std::vector<SwitchTerm>& switches() const noexcept { return switches_; }

  /// The node dynamics are autonomous; `t` is accepted for interface symmetry.
  Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::VectorXd>& x, double t = 0.0) const;

  /// Elementwise bound m on |f_sigma(x1) - f_sigma(x2)|, i.e. 2 * sum_k |B_k|.
  Eigen::VectorXd switching_bound() const;

private:
  Eigen::MatrixXd a_;
  Eigen::VectorXd d_;
  std::vector<SwitchTerm> switches_;
};

/// The relay system used throughout the examples:
/// A = [[1.51, 1, 0], [-99.922, 0, 1], [-5, 0, 0]], B = (1, -2, 1), switching on x_1.
PwsVectorField relay_system();

/// (P, Q, M) such that f is sigma-QUAD(P, Q, M).
struct SigmaQuadCertificate {
  Eigen::MatrixXd p;
  Eigen::MatrixXd q;
  Eigen::MatrixXd m;
};

/// Throws InvalidArgument unless `p` is symmetric positive definite.
void require_positive_definite(const Eigen::Ref<const Eigen::MatrixXd>& p);

/// Constructive certificate from the affine + switching split:
/// Q = P A and M = diag(|P| m) with m the switching bound.
SigmaQuadCertificate certificate_from_decomposition(const PwsVectorField& f, const Eigen::MatrixXd& p);

struct SigmaQuadCheck {
  bool holds = true;
  long samples_checked = 0;
  /// First violating pair (xi1, xi2), if any.
  std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> counterexample;
  /// lhs - rhs at the counterexample (positive means violated).
  double violation = 0.0;
};

inline constexpr double kSigmaQuadSlack = 1e-9;

/// Falsification test of the sigma-QUAD inequality
///
///   (x1 - x2)^T P (f(x1) - f(x2)) <= (x1 - x2)^T Q (x1 - x2) + (x1 - x2)^T M sign(x1 - x2)
///
/// on `n_samples` random pairs from the ball of radius `radius`, plus pairs
/// straddling (and lying on) each switching plane. Passing is evidence, not a proof.
SigmaQuadCheck verify_sigma_quad(const PwsVectorField& f, const SigmaQuadCertificate& cert, long n_samples,
                                 double radius, std::uint64_t seed);

}  // namespace pwsync
