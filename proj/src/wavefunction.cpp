#include "diffavg/wavefunction.hpp"

#include <cmath>
#include <string>

#include "diffavg/error.hpp"

namespace diffavg {

WaveFunction::WaveFunction(PositionGrid g, Eigen::VectorXcd v)
    : grid(std::move(g)), values(std::move(v)) {
  grid.validate();
  if (values.size() != grid.size) {
    throw GridMismatchError("wave function sample count does not match its grid");
  }
  if (!values.allFinite()) throw ParameterError("wave function samples must be finite");
}

WaveFunction WaveFunction::zero(const PositionGrid& g) {
  return WaveFunction(g, Eigen::VectorXcd::Zero(g.size));
}

double WaveFunction::norm_squared() const { return values.squaredNorm() * grid.step; }

double WaveFunction::norm() const { return std::sqrt(norm_squared()); }

WaveFunction WaveFunction::normalized() const {
  const double n = norm();
  if (n == 0.0) throw ParameterError("cannot normalise a zero wave function");
  return WaveFunction(grid, values / n);
}

void require_same_grid(const PositionGrid& a, const PositionGrid& b, const char* what) {
  if (!a.same_as(b)) {
    throw GridMismatchError(std::string(what) + ": position grids differ (no implicit resampling)");
  }
}

std::complex<double> complex_inner(const WaveFunction& a, const WaveFunction& b) {
  require_same_grid(a.grid, b.grid, "inner product");
  return (a.values.array() * b.values.array().conjugate()).sum() * a.grid.step;
}

double real_inner(const WaveFunction& a, const WaveFunction& b) {
  return complex_inner(a, b).real();
}

double relative_l2_error(const WaveFunction& a, const WaveFunction& b) {
  require_same_grid(a.grid, b.grid, "relative error");
  const double denom = b.values.norm();
  const double num = (a.values - b.values).norm();
  if (denom == 0.0) return num;
  return num / denom;
}

}  // namespace diffavg
