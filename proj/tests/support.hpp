#pragma once

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "diffavg/grid.hpp"
#include "diffavg/params.hpp"
#include "diffavg/wavefunction.hpp"

namespace testing {

using cd = std::complex<double>;
using diffavg::pi;

inline diffavg::PositionGrid grid256() { return diffavg::PositionGrid::centered(256, 8.0); }

inline double rel(const Eigen::MatrixXcd& got, const Eigen::MatrixXcd& want) {
  return (got - want).norm() / want.norm();
}

// (4 c / 2 pi)^{1/4}-normalised exp(-c (x - x0)^2 + j 2 pi p0 x / h)
inline diffavg::WaveFunction gaussian(const diffavg::PositionGrid& g, double c, double x0 = 0.0,
                                      double p0 = 0.0, double h = 1.0) {
  Eigen::VectorXcd v(g.size);
  const double norm = std::pow(2.0 * c / pi, 0.25);
  for (int i = 0; i < g.size; ++i) {
    const double x = g.at(i);
    v[i] = norm * std::exp(-c * (x - x0) * (x - x0)) * std::polar(1.0, 2.0 * pi * p0 * x / h);
  }
  return diffavg::WaveFunction(g, v);
}

}  // namespace testing
