#include "diffavg/hermite.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

#include "diffavg/error.hpp"
#include "diffavg/params.hpp"

namespace diffavg::hermite {

Eigen::MatrixXd functions(int count, const Eigen::VectorXd& z) {
  if (count < 1) throw ParameterError("need at least one Hermite function");
  const Eigen::Index m = z.size();
  Eigen::MatrixXd h(m, count);
  const double norm0 = std::pow(pi, -0.25);
  for (Eigen::Index i = 0; i < m; ++i) {
    h(i, 0) = norm0 * std::exp(-0.5 * z[i] * z[i]);
  }
  if (count > 1) h.col(1) = std::sqrt(2.0) * z.cwiseProduct(h.col(0));
  for (int n = 1; n + 1 < count; ++n) {
    const double c1 = std::sqrt(2.0 / (n + 1));
    const double c0 = std::sqrt(static_cast<double>(n) / (n + 1));
    h.col(n + 1) = c1 * z.cwiseProduct(h.col(n)) - c0 * h.col(n - 1);
  }
  return h;
}

Rule gauss_rule(int points) {
  if (points < 1) throw ParameterError("Gauss-Hermite rule needs at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(points, points);
  for (int k = 1; k < points; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  Rule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights = std::sqrt(pi) * solver.eigenvectors().row(0).transpose().array().square();
  return rule;
}

}  // namespace diffavg::hermite
