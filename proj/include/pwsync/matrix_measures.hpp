#pragma once

#include <Eigen/Dense>

namespace pwsync {

// Matrix measures (logarithmic norms) induced by the 2- and infinity-norms,
// together with their lower counterparts mu^-(A) = -mu(-A). All functions
// throw InvalidArgument for non-square input.

/// Largest eigenvalue of (A + A^T) / 2.
double mu2(const Eigen::Ref<const Eigen::MatrixXd>& a);

/// max_i (A_ii + sum_{j != i} |A_ij|)
double mu_inf(const Eigen::Ref<const Eigen::MatrixXd>& a);

/// Smallest eigenvalue of (A + A^T) / 2.
double mu2_lower(const Eigen::Ref<const Eigen::MatrixXd>& a);

/// min_i (A_ii - sum_{j != i} |A_ij|)
double mu_inf_lower(const Eigen::Ref<const Eigen::MatrixXd>& a);

/// Elementwise sign with sign(0) = 0.
inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

inline Eigen::VectorXd sign(const Eigen::Ref<const Eigen::VectorXd>& v) {
  return v.unaryExpr([](double x) { return sign(x); });
}

}  // namespace pwsync
