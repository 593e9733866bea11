#pragma once

#include <Eigen/Dense>

#include <map>
#include <vector>

#include "diffavg/grid.hpp"
#include "diffavg/params.hpp"

namespace diffavg {

/// A function phi(q, p, xi) on the extended phase space, stored through its
/// Fourier modes phi_k(q, p) along the fiber circle T = R / hZ:
///   phi(q, p, T_t xi) = sum_k phi_k(q, p) exp(j 2 pi k t / h).
/// Absent modes are identically zero. Mode matrices are (q.size x p_size).
class ExtendedAmplitude {
 public:
  ExtendedAmplitude() = default;
  ExtendedAmplitude(PhaseGrid grid, int k_trunc = 3);

  const PhaseGrid& grid() const { return grid_; }
  int truncation() const { return k_trunc_; }

  bool has_mode(int k) const { return modes_.count(k) != 0; }
  /// Mode k, or a zero field when absent.
  Eigen::MatrixXcd mode(int k) const;
  const std::map<int, Eigen::MatrixXcd>& modes() const { return modes_; }
  void set_mode(int k, Eigen::MatrixXcd field);
  void erase_mode(int k) { modes_.erase(k); }

  /// Discrete L2 norm of one mode, (sum |phi_k|^2 dq dp)^{1/2}.
  double mode_norm(int k) const;
  /// Norm on E with the fiber measure normalised to one: sum over modes.
  double norm() const;
  /// Real inner product on E, Re sum_k <phi_k, psi_k>.
  friend double inner(const ExtendedAmplitude& a, const ExtendedAmplitude& b);

  /// max_k ||phi_{-k} - conj(phi_k)|| / norm(); zero for real fields.
  double reality_defect() const;

  ExtendedAmplitude& operator+=(const ExtendedAmplitude& other);
  ExtendedAmplitude& operator*=(double s);
  friend ExtendedAmplitude operator+(ExtendedAmplitude a, const ExtendedAmplitude& b) {
    return a += b;
  }
  friend ExtendedAmplitude operator-(ExtendedAmplitude a, const ExtendedAmplitude& b);
  friend ExtendedAmplitude operator*(double s, ExtendedAmplitude a) { return a *= s; }

 private:
  void check_mode_index(int k) const;
  void check_compatible(const ExtendedAmplitude& other) const;

  PhaseGrid grid_;
  int k_trunc_ = 3;
  std::map<int, Eigen::MatrixXcd> modes_;
};

/// Element G_t^H of the Heisenberg-Weyl group for H = <x, p> - <y, q> + c.
struct WeylElement {
  double x = 0.0;  // position shift direction
  double y = 0.0;  // momentum shift direction
  double t = 0.0;
  double c = 0.0;
};

/// (G_t^H phi)(q, p, xi) = phi(q + t x, p + t y, T_{t (c - <y, q>)} xi).
/// Off-lattice shifts use periodic Fourier interpolation on the phase grid.
/// Throws DomainError when a shift exceeds a quarter of the axis extent.
ExtendedAmplitude apply_weyl(const WeylElement& w, const ExtendedAmplitude& phi, double h);

/// Samples phi(q, p, T_t xi) at fiber parameters t_s, s = 0..S-1.
struct FiberSamples {
  std::vector<double> t;
  std::vector<Eigen::MatrixXcd> values;
};

/// k-th Fourier coefficient (1/h) int_0^h phi(T_t xi) exp(-j 2 pi k t / h) dt,
/// computed exactly for trigonometric polynomials by the uniform-sample rule.
/// Throws ParameterError unless the samples are uniform over one period.
Eigen::MatrixXcd fiber_project(const FiberSamples& samples, int k, double h);

/// Project every mode |k| <= k_trunc (requires at least 4 k_trunc samples).
ExtendedAmplitude fiber_decompose(const FiberSamples& samples, const PhaseGrid& grid,
                                  int k_trunc, double h);

/// sum_k phi_k exp(j 2 pi k t / h)
Eigen::MatrixXcd fiber_evaluate(const ExtendedAmplitude& phi, double t, double h);

}  // namespace diffavg
