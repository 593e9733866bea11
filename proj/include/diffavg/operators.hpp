#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "diffavg/density.hpp"
#include "diffavg/grid.hpp"
#include "diffavg/params.hpp"
#include "diffavg/wavefunction.hpp"

namespace diffavg {

/// coeff * q^q_power * p^p_power
struct Monomial {
  double coeff = 1.0;
  int q_power = 0;
  int p_power = 0;
};

/// A classical observable f(q, p): a real polynomial, an arbitrary callable,
/// the 3D Coulomb potential -e^2 / r, or samples on a phase grid.
///
/// For sampled symbols the Fourier transform
///   f^(u, v) = (1/2 pi) int f(q, p) exp(j (q v + p u)) dq dp
/// is computed once at construction and shared between copies.
class ObservableSymbol {
 public:
  enum class Kind { polynomial, function, coulomb, sampled };

  static ObservableSymbol polynomial(std::vector<Monomial> terms);
  static ObservableSymbol monomial(int q_power, int p_power, double coeff = 1.0);
  static ObservableSymbol constant(double c) { return monomial(0, 0, c); }
  /// p^2 / 2m + m w^2 q^2 / 2
  static ObservableSymbol harmonic(double mass, double omega);
  /// Any real f(q, p); `name` is used in diagnostics.
  static ObservableSymbol function(std::function<double(double, double)> f, std::string name);
  /// A callable V(q) with no momentum dependence.
  static ObservableSymbol potential(std::function<double(double)> v, std::string name);
  /// -charge_sq / r in three isotropic dimensions (position-only).
  static ObservableSymbol coulomb(double charge_sq);
  static ObservableSymbol sampled(PhaseField samples);

  /// Parses "q^2+p^2", "0.5*p^2 - 3*q*p", "harmonic:m,omega", "coulomb:e2".
  static ObservableSymbol parse(const std::string& spec);

  Kind kind() const { return data_->kind; }
  const std::string& name() const { return data_->name; }
  /// f(q, p) for polynomial and callable symbols.
  double operator()(double q, double p) const;
  bool depends_on_momentum() const;
  const std::vector<Monomial>& terms() const;
  double charge_sq() const;
  const PhaseField& samples() const;
  /// Frequencies and values of f^ for sampled symbols, u conjugate to p
  /// (columns) and v conjugate to q (rows), both centred.
  const Eigen::VectorXd& fourier_u() const;
  const Eigen::VectorXd& fourier_v() const;
  const Eigen::MatrixXcd& fourier() const;

  ObservableSymbol operator+(const ObservableSymbol& other) const;

 private:
  struct Data {
    Kind kind = Kind::polynomial;
    std::string name;
    std::vector<Monomial> terms;
    std::function<double(double, double)> fn;
    bool position_only = false;
    double charge_sq = 0.0;
    PhaseField samples;
    Eigen::VectorXd u, v;
    Eigen::MatrixXcd fhat;
  };
  explicit ObservableSymbol(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  std::shared_ptr<const Data> data_;
};

/// f_h(u, v) = f^(u, v) exp(-(h / 8 pi)((a/b) v^2 + (b/a) u^2)) on the grid of
/// a sampled symbol's transform.
struct SmoothedSymbol {
  Eigen::VectorXd u, v;
  Eigen::MatrixXcd values;
};
SmoothedSymbol smoothed_symbol(const ObservableSymbol& f, const ModelParams& params);

/// A_f = mult(x^2 coefficient, x coefficient) + first * d/dx + second * d^2/dx^2
///       + constant.
struct DifferentialForm {
  double x2 = 0.0;
  double x1 = 0.0;
  std::complex<double> first{0.0, 0.0};
  double second = 0.0;
  double constant = 0.0;
  /// Part of `constant` produced by the smoothing (e.g. h b / (4 pi a)).
  double smoothing_shift = 0.0;

  /// Second-order finite-difference realisation on `grid` (Dirichlet ends).
  Eigen::MatrixXcd matrix(const PositionGrid& grid, bool remove_shift = false) const;
};

/// Discretised A_f(x_i, x_j) with the quadrature weight dx folded in, so that
/// (A psi)_i = sum_j matrix(i, j) psi_j.
struct OperatorKernel {
  PositionGrid grid;
  Eigen::MatrixXcd matrix;
  std::optional<DifferentialForm> form;

  /// ||A - A^dagger||_F / ||A||_F
  double hermiticity_defect() const;
};

enum class SymbolOrder { zero, exact };

/// Direct (q, p) quadrature of
///   A_f(x, x') = (2/h^3)^{1/2} (b/a)^{1/2} int int f(q, p)
///       exp(-(pi/h)(b/a)((q - x)^2 + (q - x')^2)) exp(j 2 pi p (x - x') / h) dq dp
/// on the momentum grid conjugate to `grid`. Throws DivergenceError when f
/// outgrows the Gaussian weights.
OperatorKernel kernel_by_quadrature(const ObservableSymbol& f, const ModelParams& params,
                                    const PositionGrid& grid);

/// The smoothed-symbol route A_f(x, x') = (1/h) int f_h(2 pi (x - x') / h, v)
/// exp(-j v (x + x') / 2) dv. Polynomials use closed-form Gaussian moments,
/// sampled symbols their discrete transform. order = zero replaces f_h by f^.
OperatorKernel kernel_by_symbol(const ObservableSymbol& f, const ModelParams& params,
                                const PositionGrid& grid, SymbolOrder order = SymbolOrder::exact);

/// Closed form of A_f for real polynomials of degree <= 2 without q p terms;
/// UnsupportedSymbolError otherwise.
DifferentialForm closed_form(const ObservableSymbol& f, const ModelParams& params);

/// Multiplication field V-bar = V convolved with the Gaussian of variance
/// h a / (4 pi b), for a position-only symbol on a 1D grid.
Eigen::VectorXd position_observable(const ObservableSymbol& v, const ModelParams& params,
                                    const PositionGrid& grid);

/// Gaussian-smoothed Coulomb potential -(e^2 / r) erf(r / (sigma sqrt 2)).
double smoothed_coulomb(double r, double charge_sq, double sigma);

/// Smoothed Coulomb field at radii r (3D, requires isotropic params).
Eigen::VectorXd position_observable_coulomb(const ObservableSymbol& v, const ModelParams& params,
                                            const Eigen::VectorXd& radii);

WaveFunction apply(const OperatorKernel& kernel, const WaveFunction& psi);

/// <psi, A psi> = int psi* (A psi) dx
std::complex<double> expectation(const OperatorKernel& kernel, const WaveFunction& psi);

/// int f rho dq dp over the density's grid.
double phase_average(const ObservableSymbol& f, const PhaseField& rho);

}  // namespace diffavg
