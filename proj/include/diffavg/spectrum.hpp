#pragma once

#include <Eigen/Dense>

#include "diffavg/grid.hpp"
#include "diffavg/operators.hpp"
#include "diffavg/params.hpp"

namespace diffavg {

struct SpectralResult {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXcd eigenvectors;  // columns, unit grid norm; empty unless requested
  PositionGrid grid;
  /// Largest |imaginary part| of the diagonalised matrix's diagonal, relative.
  double imag_residue = 0.0;
};

/// Lowest `count` eigenvalues of a discretised Hermitian kernel (dense solve).
SpectralResult spectrum(const OperatorKernel& kernel, int count, bool vectors = false);

/// sum h (b^2 + m^2 w^2 a^2) / (8 pi a b m), the smoothing shift of the oscillator.
double oscillator_shift(double mass, double omega, const ModelParams& params);

/// Spectrum of A_f for f = p^2/2m + m w^2 q^2/2 (symbol route). Throws
/// ResolutionError with a suggested size when the grid cannot hold `count`
/// states (half-width below twice the outer turning point, or a Nyquist
/// momentum below twice the outer classical momentum).
SpectralResult oscillator_spectrum(double mass, double omega, const ModelParams& params,
                                   const PositionGrid& grid, int count,
                                   bool remove_shift = false, bool vectors = false);

}  // namespace diffavg
