#pragma once

#include <Eigen/Dense>

#include "diffavg/grid.hpp"
#include "diffavg/params.hpp"
#include "diffavg/wavefunction.hpp"

namespace diffavg {

/// Real samples on a phase grid, rows q, columns p.
struct PhaseField {
  PhaseGrid grid;
  Eigen::MatrixXd values;

  /// sum values dq dp
  double integral() const;
  double min() const { return values.minCoeff(); }
  /// int values dp, one entry per q sample.
  Eigen::VectorXd position_marginal() const;
};

/// rho~(q, p) >= 0, the observable phase-space density of a wave function.
struct PhaseSpaceDensity : PhaseField {};

/// Wigner quasidistribution; may be negative.
struct WignerDensity : PhaseField {};

/// Throws GridMismatchError unless dp <= h / (2 * range(x)) so that the
/// exp(-j 2 pi p x / h) factors (and their products) are resolved.
void require_momentum_resolution(const PhaseGrid& grid, double h);

/// rho~(q, p) = (2/h^3)^{1/2} (b/a)^{1/2} |int exp(-(pi/h)(b/a)(q - x)^2)
///              exp(-j 2 pi p x / h) psi(x) dx|^2.
/// Integrates to ||psi||^2. Nonnegative by construction.
PhaseSpaceDensity density_from_wavefunction(const WaveFunction& psi, const ModelParams& params,
                                            const PhaseGrid& grid);

/// W(q, p) = (1/h) int psi*(q + y/2) psi(q - y/2) exp(j 2 pi p y / h) dy, evaluated on
/// the q samples of psi's grid. Half-sample shifts use a 2x Fourier-interpolated psi.
WignerDensity wigner(const WaveFunction& psi, const ModelParams& params, const PhaseGrid& grid);

/// W convolved with the normalised phase-space Gaussian
/// (2/h) exp(-(2 pi / h)((b/a) dq^2 + (a/b) dp^2)), i.e. variances
/// h a / (4 pi b) in q and h b / (4 pi a) in p.
PhaseField smooth_wigner(const WignerDensity& w, const ModelParams& params);

/// ||smooth_wigner(wigner(psi)) - rho~|| / ||rho~||; zero for psi = 0.
double smoothing_check(const WaveFunction& psi, const ModelParams& params, const PhaseGrid& grid);

/// |psi|^2 convolved with the position smoothing Gaussian, on psi's grid.
Eigen::VectorXd smoothed_position_density(const WaveFunction& psi, const ModelParams& params);

}  // namespace diffavg
