#pragma once

#include <numbers>
#include <vector>

namespace diffavg {

inline constexpr double pi = std::numbers::pi;

/// Parameters of the averaging model: Planck constant h and the per-axis
/// diffusion intensities a_i (positions) and b_i (momenta).
struct ModelParams {
  double h = 1.0;
  std::vector<double> a{1.0};
  std::vector<double> b{1.0};

  static ModelParams natural(int dim = 1);
  /// Same (a, b) on every axis.
  static ModelParams isotropic(double h, double a, double b, int dim);

  int dim() const { return static_cast<int>(a.size()); }

  /// Throws ParameterError unless h > 0, a_i > 0, b_i > 0 and the vectors agree.
  void validate() const;
  /// validate() plus dim() == 1.
  void validate_1d() const;

  double ratio(int axis) const { return b[axis] / a[axis]; }
  /// Variance of the position smoothing Gaussian, h a_i / (4 pi b_i).
  double position_variance(int axis) const;
  /// Variance of the momentum smoothing Gaussian, h b_i / (4 pi a_i).
  double momentum_variance(int axis) const;
  /// prod_i b_i / a_i
  double ratio_product() const;
  bool is_isotropic(double rel_tol = 1e-12) const;
};

/// CGS constants for the hydrogen estimate.
struct PhysicalConstants {
  double e = 4.80320e-10;        // esu
  double m = 9.10938e-28;        // g
  double hbar = 1.05457e-27;     // erg s
  double alpha = 1.0 / 137.0;
  double c = 2.99792e10;         // cm / s

  /// The snapshot used for reproducing the published estimate (alpha = 1/137).
  static PhysicalConstants reproduction();
  /// CODATA-2018 values.
  static PhysicalConstants modern();

  double h() const { return 2.0 * pi * hbar; }
  double bohr_radius() const { return hbar * hbar / (m * e * e); }
  /// Relative mismatch between alpha and e^2 / (hbar c).
  double alpha_consistency() const;
};

}  // namespace diffavg
