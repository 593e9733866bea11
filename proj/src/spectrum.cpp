#include "diffavg/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "diffavg/error.hpp"

namespace diffavg {

SpectralResult spectrum(const OperatorKernel& kernel, int count, bool vectors) {
  const int n = kernel.grid.size;
  if (count < 1 || count > n) throw ParameterError("eigenvalue count out of range");
  SpectralResult r;
  r.grid = kernel.grid;
  const double scale = std::max(kernel.matrix.cwiseAbs().maxCoeff(), 1e-300);
  r.imag_residue = kernel.matrix.diagonal().imag().cwiseAbs().maxCoeff() / scale;
  const Eigen::MatrixXcd herm = 0.5 * (kernel.matrix + kernel.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      herm, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("eigensolver did not converge");
  r.eigenvalues = solver.eigenvalues().head(count);
  if (vectors) {
    r.eigenvectors = solver.eigenvectors().leftCols(count) / std::sqrt(kernel.grid.step);
  }
  return r;
}

double oscillator_shift(double mass, double omega, const ModelParams& params) {
  params.validate();
  double s = 0.0;
  for (int i = 0; i < params.dim(); ++i) {
    const double a = params.a[i], b = params.b[i];
    s += params.h * (b * b + mass * mass * omega * omega * a * a) / (8.0 * pi * a * b * mass);
  }
  return s;
}

SpectralResult oscillator_spectrum(double mass, double omega, const ModelParams& params,
                                   const PositionGrid& grid, int count, bool remove_shift,
                                   bool vectors) {
  params.validate_1d();
  grid.validate();
  if (!(mass > 0.0) || !(omega > 0.0)) {
    throw ParameterError("oscillator mass and frequency must be positive");
  }
  const double hbar = params.h / (2.0 * pi);
  const int top = count - 1;
  const double turning = std::sqrt((2.0 * top + 1.0) * hbar / (mass * omega));
  const double momentum = std::sqrt((2.0 * top + 1.0) * hbar * mass * omega);
  const double nyquist = params.h / (2.0 * grid.step);
  const double need_half = 2.0 * turning;
  if (std::abs(grid.center()) + need_half > grid.half_extent() || nyquist < 2.0 * momentum) {
    const double half = std::max(grid.half_extent(), need_half + std::abs(grid.center()));
    const double step = std::min(grid.step, params.h / (4.0 * momentum));
    int suggested = 8;
    while (suggested * step < 2.0 * half) suggested *= 2;
    std::ostringstream os;
    os << "grid of " << grid.size << " points on half-width " << grid.half_extent()
       << " does not resolve " << count << " oscillator states (turning point " << turning
       << ", momentum " << momentum << "); try " << suggested << " points on half-width >= "
       << half;
    throw ResolutionError(os.str(), suggested);
  }
  const OperatorKernel k =
      kernel_by_symbol(ObservableSymbol::harmonic(mass, omega), params, grid, SymbolOrder::exact);
  SpectralResult r = spectrum(k, count, vectors);
  if (remove_shift) r.eigenvalues.array() -= oscillator_shift(mass, omega, params);
  return r;
}

}  // namespace diffavg
