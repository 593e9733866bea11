#pragma once

#include <Eigen/Dense>

#include <complex>

#include "diffavg/grid.hpp"

namespace diffavg {

/// Complex samples of psi(x) on a position grid. The represented function on
/// R^n x F carries fiber index -1: psi(x, T_t xi) = psi(x, xi) exp(-j 2 pi t / h);
/// the stored values are the t = 0 slice.
struct WaveFunction {
  PositionGrid grid;
  Eigen::VectorXcd values;

  WaveFunction() = default;
  WaveFunction(PositionGrid g, Eigen::VectorXcd v);
  static WaveFunction zero(const PositionGrid& g);

  double norm_squared() const;
  double norm() const;
  WaveFunction normalized() const;
};

/// int psi1 conj(psi2) dx by the trapezoid rule (linear in the first slot).
std::complex<double> complex_inner(const WaveFunction& a, const WaveFunction& b);
/// Re int psi1 conj(psi2) dx, the pairing on H.
double real_inner(const WaveFunction& a, const WaveFunction& b);
/// ||a - b|| / ||b||; both must share a grid.
double relative_l2_error(const WaveFunction& a, const WaveFunction& b);

void require_same_grid(const PositionGrid& a, const PositionGrid& b, const char* what);

}  // namespace diffavg
