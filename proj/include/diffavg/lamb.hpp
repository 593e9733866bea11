#pragma once

#include <string>

#include "diffavg/operators.hpp"
#include "diffavg/params.hpp"

namespace diffavg::lamb {

double mhz_to_erg(double mhz, const PhysicalConstants& c);
double erg_to_mhz(double erg, const PhysicalConstants& c);

/// dE_n = (a/b) m^3 alpha^4 c^4 / (n^3 hbar), in erg. a/b = 0 gives 0.
double forward(double a_over_b, const PhysicalConstants& c, int n);

struct Estimate {
  double delta_e_erg = 0.0;
  double delta_e_mhz = 0.0;
  double a_over_b = 0.0;  // s / g
  double delta_q = 0.0;   // cm, sqrt(a hbar / (2 b))
  int n = 2;
  PhysicalConstants constants;
};

/// a/b = dE n^3 hbar / (m^3 alpha^4 c^4) and the matching position spread.
Estimate inverse(double delta_e_erg, const PhysicalConstants& c, int n);

/// ModelParams in CGS for three isotropic axes: h = 2 pi hbar, a = a/b, b = 1.
ModelParams model_params(double a_over_b, const PhysicalConstants& c);

/// Closed-form hydrogen states with n <= 2 (1s, 2s, 2p).
struct HydrogenState {
  int n = 1;
  int l = 0;
  double bohr_radius = 0.0;

  static HydrogenState make(int n, int l, const PhysicalConstants& c);
  /// |psi(r)|^2 averaged over angles, R_nl(r)^2 / (4 pi).
  double density(double r) const;
};

struct ShiftResult {
  double quadrature = 0.0;   // int rho (V-bar - V) d^3x
  double closed_form = 0.0;  // (a h e^2 / 2b) rho(0)
  double sigma = 0.0;
  bool regime_ok = true;     // sigma * 100 <= Bohr radius
  std::string warning;
};

/// First-order shift of a hydrogen level by the smoothed Coulomb potential,
/// by adaptive radial quadrature against the delta-function closed form.
ShiftResult perturbative_shift(const HydrogenState& state, const ObservableSymbol& coulomb,
                               const ModelParams& params);

}  // namespace diffavg::lamb
