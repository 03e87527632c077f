#include "octo/numeric.hpp"

#include <Eigen/Dense>

namespace octo {

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve(const SymMat& m) {
  const int n = m.size();
  Eigen::MatrixXd a = Eigen::Map<const Eigen::MatrixXd>(m.data().data(), n, n);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a, Eigen::EigenvaluesOnly);
}

}  // namespace

double lambda_min(const SymMat& m) { return solve(m).eigenvalues().minCoeff(); }

double operator_norm(const SymMat& m) {
  const auto ev = solve(m).eigenvalues();
  return std::max(std::fabs(ev.minCoeff()), std::fabs(ev.maxCoeff()));
}

}  // namespace octo
