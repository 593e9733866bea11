#include "diffavg/params.hpp"

#include <cmath>
#include <sstream>

#include "diffavg/error.hpp"

namespace diffavg {

ModelParams ModelParams::natural(int dim) { return isotropic(1.0, 1.0, 1.0, dim); }

ModelParams ModelParams::isotropic(double h, double a, double b, int dim) {
  ModelParams p;
  p.h = h;
  p.a.assign(dim, a);
  p.b.assign(dim, b);
  p.validate();
  return p;
}

void ModelParams::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ParameterError("model parameter h must be positive and finite");
  }
  if (a.empty()) throw ParameterError("model dimension must be at least 1");
  if (a.size() != b.size()) {
    throw ParameterError("intensity vectors a and b differ in length");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0.0) || !(b[i] > 0.0) || !std::isfinite(a[i]) || !std::isfinite(b[i])) {
      std::ostringstream os;
      os << "diffusion intensities must be positive (axis " << i << ": a=" << a[i]
         << ", b=" << b[i] << ")";
      throw ParameterError(os.str());
    }
  }
}

void ModelParams::validate_1d() const {
  validate();
  if (dim() != 1) {
    throw ParameterError("grid-based operations are implemented for one configuration dimension");
  }
}

double ModelParams::position_variance(int axis) const {
  return h * a[axis] / (4.0 * pi * b[axis]);
}

double ModelParams::momentum_variance(int axis) const {
  return h * b[axis] / (4.0 * pi * a[axis]);
}

double ModelParams::ratio_product() const {
  double r = 1.0;
  for (int i = 0; i < dim(); ++i) r *= ratio(i);
  return r;
}

bool ModelParams::is_isotropic(double rel_tol) const {
  for (int i = 1; i < dim(); ++i) {
    if (std::abs(ratio(i) - ratio(0)) > rel_tol * ratio(0)) return false;
  }
  return true;
}

PhysicalConstants PhysicalConstants::reproduction() { return {}; }

PhysicalConstants PhysicalConstants::modern() {
  PhysicalConstants c;
  c.e = 4.803204712570263e-10;
  c.m = 9.1093837015e-28;
  c.hbar = 1.054571817e-27;
  c.alpha = 7.2973525693e-3;
  c.c = 2.99792458e10;
  return c;
}

double PhysicalConstants::alpha_consistency() const {
  const double derived = e * e / (hbar * c);
  return std::abs(derived - alpha) / alpha;
}

}  // namespace diffavg
