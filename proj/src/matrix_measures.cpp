#include "pwsync/matrix_measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pwsync/error.hpp"

namespace pwsync {

namespace {

void require_square(const Eigen::Ref<const Eigen::MatrixXd>& a, const char* who) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument(std::string(who) + ": matrix must be square, got " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()));
  }
}

double off_diagonal_abs_sum(const Eigen::Ref<const Eigen::MatrixXd>& a, Eigen::Index i) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    if (j != i) sum += std::abs(a(i, j));
  return sum;
}

Eigen::VectorXd symmetric_part_eigenvalues(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace

double mu2(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  require_square(a, "mu2");
  if (a.size() == 0) return 0.0;
  return symmetric_part_eigenvalues(a).maxCoeff();
}

double mu2_lower(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  require_square(a, "mu2_lower");
  if (a.size() == 0) return 0.0;
  return symmetric_part_eigenvalues(a).minCoeff();
}

double mu_inf(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  require_square(a, "mu_inf");
  if (a.size() == 0) return 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    best = std::max(best, a(i, i) + off_diagonal_abs_sum(a, i));
  }
  return best;
}

double mu_inf_lower(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  require_square(a, "mu_inf_lower");
  if (a.size() == 0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    best = std::min(best, a(i, i) - off_diagonal_abs_sum(a, i));
  }
  return best;
}

}  // namespace pwsync
