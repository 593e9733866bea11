#include "diffavg/lamb.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "diffavg/error.hpp"

namespace diffavg::lamb {

double mhz_to_erg(double mhz, const PhysicalConstants& c) { return mhz * 1e6 * c.h(); }

double erg_to_mhz(double erg, const PhysicalConstants& c) { return erg / c.h() / 1e6; }

namespace {

double scale(const PhysicalConstants& c, int n) {
  if (n < 1) throw ParameterError("principal quantum number must be >= 1");
  return std::pow(c.m, 3) * std::pow(c.alpha, 4) * std::pow(c.c, 4) /
         (std::pow(n, 3) * c.hbar);
}

}  // namespace

double forward(double a_over_b, const PhysicalConstants& c, int n) {
  if (a_over_b < 0.0 || !std::isfinite(a_over_b)) {
    throw ParameterError("a/b must be a non-negative number");
  }
  return a_over_b * scale(c, n);
}

Estimate inverse(double delta_e_erg, const PhysicalConstants& c, int n) {
  if (!(delta_e_erg > 0.0) || !std::isfinite(delta_e_erg)) {
    throw ParameterError("the energy increment must be positive");
  }
  Estimate e;
  e.n = n;
  e.constants = c;
  e.delta_e_erg = delta_e_erg;
  e.delta_e_mhz = erg_to_mhz(delta_e_erg, c);
  e.a_over_b = delta_e_erg / scale(c, n);
  e.delta_q = std::sqrt(e.a_over_b * c.hbar / 2.0);
  return e;
}

ModelParams model_params(double a_over_b, const PhysicalConstants& c) {
  if (!(a_over_b > 0.0)) throw ParameterError("a/b must be positive");
  return ModelParams::isotropic(c.h(), a_over_b, 1.0, 3);
}

HydrogenState HydrogenState::make(int n, int l, const PhysicalConstants& c) {
  if (!((n == 1 && l == 0) || (n == 2 && (l == 0 || l == 1)))) {
    throw ParameterError("closed-form hydrogen states are available for 1s, 2s and 2p");
  }
  return HydrogenState{n, l, c.bohr_radius()};
}

double HydrogenState::density(double r) const {
  const double a = bohr_radius;
  const double x = r / a;
  double radial = 0.0;
  if (n == 1) {
    radial = 2.0 * std::pow(a, -1.5) * std::exp(-x);
  } else if (l == 0) {
    radial = std::pow(a, -1.5) / (2.0 * std::sqrt(2.0)) * (2.0 - x) * std::exp(-0.5 * x);
  } else {
    radial = std::pow(a, -1.5) / (2.0 * std::sqrt(6.0)) * x * std::exp(-0.5 * x);
  }
  return radial * radial / (4.0 * pi);
}

ShiftResult perturbative_shift(const HydrogenState& state, const ObservableSymbol& coulomb,
                               const ModelParams& params) {
  params.validate();
  if (params.dim() != 3 || !params.is_isotropic()) {
    throw ParameterError("the hydrogen shift needs isotropic three-dimensional parameters");
  }
  const double e2 = coulomb.charge_sq();
  ShiftResult r;
  r.sigma = std::sqrt(params.position_variance(0));
  r.regime_ok = 100.0 * r.sigma <= state.bohr_radius;
  if (!r.regime_ok) {
    std::ostringstream os;
    os << "smoothing width " << r.sigma << " is not small against the Bohr radius "
       << state.bohr_radius << "; the delta-function estimate does not apply";
    r.warning = os.str();
  }
  // V-bar - V = (e^2 / r) erfc(r / (sigma sqrt 2))
  const double s2 = r.sigma * std::sqrt(2.0);
  auto integrand = [&](double rad) {
    return 4.0 * pi * rad * state.density(rad) * e2 * std::erfc(rad / s2);
  };
  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  const double edges[] = {0.0, r.sigma, 4.0 * r.sigma, 12.0 * r.sigma, 40.0 * r.sigma};
  for (int i = 0; i < 4; ++i) {
    total += gauss_kronrod<double, 61>::integrate(integrand, edges[i], edges[i + 1], 10, 1e-13);
  }
  r.quadrature = total;
  r.closed_form = params.a[0] * params.h * e2 / (2.0 * params.b[0]) * state.density(0.0);
  return r;
}

}  // namespace diffavg::lamb
