#pragma once

// Shared dense building blocks for the transform, density and operator code.

#include <Eigen/Dense>

#include <cmath>
#include <complex>

#include "diffavg/grid.hpp"
#include "diffavg/params.hpp"

namespace diffavg::internal {

/// G(q_i - x_j) = exp(-(pi/h)(b/a)(q_i - x_j)^2), (q.size x x.size)
inline Eigen::MatrixXd gaussian_window(const ModelParams& params, const PositionGrid& q,
                                       const PositionGrid& x) {
  const double c = pi / params.h * params.ratio(0);
  Eigen::MatrixXd g(q.size, x.size);
  for (int j = 0; j < x.size; ++j) {
    for (int i = 0; i < q.size; ++i) {
      const double d = q.at(i) - x.at(j);
      g(i, j) = std::exp(-c * d * d);
    }
  }
  return g;
}

/// exp(sign * j 2 pi p_l x_j / h), (p_size x x.size)
inline Eigen::MatrixXcd plane_waves(const PhaseGrid& grid, const PositionGrid& x, double h,
                                    int sign) {
  Eigen::MatrixXcd e(grid.p_size, x.size);
  for (int j = 0; j < x.size; ++j) {
    for (int l = 0; l < grid.p_size; ++l) {
      const double phase = sign * 2.0 * pi * grid.p_at(l) * x.at(j) / h;
      e(l, j) = std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }
  return e;
}

/// W(q, p) = dx sum_x G(q - x) psi(x) exp(-j 2 pi p x / h), the Gaussian-windowed
/// Fourier transform shared by the amplitude and density formulas.
inline Eigen::MatrixXcd windowed_transform(const ModelParams& params, const PhaseGrid& grid,
                                           const PositionGrid& x, const Eigen::VectorXcd& psi) {
  const Eigen::MatrixXcd windowed =
      gaussian_window(params, grid.q, x).cast<std::complex<double>>() * psi.asDiagonal();
  const Eigen::MatrixXcd waves = plane_waves(grid, x, params.h, -1);
  return x.step * (windowed * waves.transpose());
}

}  // namespace diffavg::internal
