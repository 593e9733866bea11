#pragma once

#include <Eigen/Dense>

namespace diffavg::hermite {

/// Orthonormal Hermite functions h_n(z) = (2^n n! sqrt(pi))^{-1/2} H_n(z) e^{-z^2/2},
/// returned as a (z.size() x count) matrix. Uses the three-term recurrence,
/// stable well past n = 100.
Eigen::MatrixXd functions(int count, const Eigen::VectorXd& z);

/// Gauss-Hermite rule for weight exp(-z^2) (Golub-Welsch).
struct Rule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
Rule gauss_rule(int points);

}  // namespace diffavg::hermite
