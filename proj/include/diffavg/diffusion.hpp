#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "diffavg/extended.hpp"
#include "diffavg/params.hpp"
#include "diffavg/wavefunction.hpp"

namespace diffavg {

enum class Integrator { spectral_hermite, finite_difference };

/// Diffusion of the extended amplitude under Gaussian shifts with second
/// moments 2 a^2 dtau (positions) and 2 b^2 dtau (momenta).
struct DiffusionSpec {
  ModelParams params;
  Integrator integrator = Integrator::spectral_hermite;
  /// Finite-difference step; 0 picks half the stability bound.
  double dtau = 0.0;
  double tau_end = 0.5;
  /// Output times; empty means 11 equally spaced samples on [0, tau_end].
  std::vector<double> times;
  /// Hermite functions per axis for the spectral integrator.
  int hermite_count = 32;
  /// Optional overrides of the second-moment rates (default 2 a^2, 2 b^2).
  std::optional<double> position_moment_rate;
  std::optional<double> momentum_moment_rate;
  /// Reject inputs with a nonzero k = 0 mode (the mean-zero hypothesis).
  bool require_mean_zero = false;

  /// Intensities implied by the moment rates, rate = 2 a^2.
  double effective_a() const;
  double effective_b() const;
  std::vector<double> output_times() const;
  /// min(dq^2, dp^2) / (4 max(a^2, b^2))
  double stability_bound(const PhaseGrid& grid) const;
  void validate(const PhaseGrid& grid) const;
};

/// lambda_{k,n} = -(2 pi |k| a b / h)(2 n + 1)
double ladder_eigenvalue(double a, double b, double h, int k, int n);
double ladder_eigenvalue(const ModelParams& params, int k, int n);

/// Positions x_m of the mode-k x-representation, x_m = (m - Np/2) h / (|k| Np dp).
Eigen::VectorXd mode_positions(const PhaseGrid& grid, int k);

/// Expansion of every fiber mode k != 0 in the eigenfunctions of its generator:
///   phi^_k(q, x) = (1/sqrt 2) sum_n c_{k,n}(x) h_n(q - x) + residual_k(q, x),
/// where phi^_k is the partial Fourier transform of phi_k in p and h_n are the
/// Hermite functions of width sqrt(h a / (2 pi |k| b)).
struct LadderDecomposition {
  PhaseGrid grid;
  double a = 1.0, b = 1.0, h = 1.0;
  int k_trunc = 3;
  int count = 32;
  std::map<std::pair<int, int>, Eigen::VectorXcd> coeffs;
  std::map<int, Eigen::MatrixXcd> residual;
  /// The k = 0 mode, evolved separately.
  Eigen::MatrixXcd mean_mode;

  /// sqrt(sum_x |c_{k,n}(x)|^2 dx_k / 2), the norm carried by (k, n).
  double population(int k, int n) const;
  /// max_x |c_{k,count-1}| relative to max_x |c_{k,0..}| over all k.
  double truncation_error() const;
};

LadderDecomposition ladder_project(const ExtendedAmplitude& phi, double a, double b, double h,
                                   int count = 32);

/// Evolve every coefficient by exp(lambda tau) and resynthesise; residuals
/// decay with the first omitted eigenvalue.
ExtendedAmplitude ladder_synthesize(const LadderDecomposition& d, double tau);

/// Real amplitude whose modes +-k are the pure eigenfunction (k, n) with
/// envelope c(x): phi^_k = (1/sqrt 2) c(x) h_n(q - x), phi_{-k} = conj(phi_k).
ExtendedAmplitude ladder_state(const PhaseGrid& grid, const ModelParams& params, int k, int n,
                               const std::function<std::complex<double>(double)>& envelope,
                               int k_trunc = 3);

struct Trajectory {
  std::vector<double> times;
  std::vector<ExtendedAmplitude> states;
  /// Spectral integrator only: highest retained Hermite coefficient, relative.
  double truncation_error = 0.0;
};

/// Evolve phi0 under the diffusion and sample it at spec.output_times().
Trajectory evolve(const ExtendedAmplitude& phi0, const DiffusionSpec& spec);

struct DecayFit {
  double rate = 0.0;      // -d log||phi_k|| / d tau
  double residual = 0.0;  // rms of the log-norm fit
  int samples = 0;
};

/// Least-squares log-norm slope of every fiber mode present in the trajectory.
/// Throws InsufficientSignalError with fewer than 5 samples or norms <= 1e-12.
std::map<int, DecayFit> measure_decay(const Trajectory& trajectory);

/// Same, for the sampled norms of one mode.
DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& norms);

struct AsymptoticState {
  WaveFunction psi;  // c_{-1,0}(0, x)
  double rate = 0.0;  // 2 pi a b / h; the surviving amplitude decays as exp(-rate tau)
  double decay_factor(double tau) const;
};

/// Surviving sector of phi0: psi(x) = c_{-1,0}(x) on the amplitude's q grid
/// (requires a centred q grid and p_size = q.size).
AsymptoticState asymptotic_state(const ExtendedAmplitude& phi0, const DiffusionSpec& spec);

}  // namespace diffavg
