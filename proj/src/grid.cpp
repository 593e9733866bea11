#include "diffavg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "diffavg/error.hpp"

namespace diffavg {

namespace {

bool close(double a, double b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

PositionGrid PositionGrid::centered(int size, double half_width) {
  PositionGrid g;
  g.size = size;
  g.step = 2.0 * half_width / size;
  g.start = -half_width;
  g.validate();
  return g;
}

Eigen::VectorXd PositionGrid::points() const {
  Eigen::VectorXd x(size);
  for (int i = 0; i < size; ++i) x[i] = at(i);
  return x;
}

void PositionGrid::validate() const {
  if (size < 8) throw ParameterError("position grid needs at least 8 samples");
  if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(start)) {
    throw ParameterError("position grid spacing must be positive and finite");
  }
}

bool PositionGrid::same_as(const PositionGrid& other, double rel_tol) const {
  return size == other.size && close(step, other.step, rel_tol) &&
         std::abs(start - other.start) <= rel_tol * std::max(1.0, std::abs(start));
}

PhaseGrid PhaseGrid::conjugate(const PositionGrid& q, double h, int oversample) {
  q.validate();
  if (oversample < 1) throw ParameterError("momentum oversampling must be >= 1");
  if (!(h > 0.0)) throw ParameterError("h must be positive");
  PhaseGrid g;
  g.q = q;
  g.p_size = oversample * q.size;
  g.p_step = h / (g.p_size * q.step);
  g.p_start = -0.5 * g.p_size * g.p_step;
  return g;
}

Eigen::VectorXd PhaseGrid::p_points() const {
  Eigen::VectorXd p(p_size);
  for (int l = 0; l < p_size; ++l) p[l] = p_at(l);
  return p;
}

void PhaseGrid::validate() const {
  q.validate();
  if (p_size < 8) throw ParameterError("momentum grid needs at least 8 samples");
  if (!(p_step > 0.0) || !std::isfinite(p_step) || !std::isfinite(p_start)) {
    throw ParameterError("momentum grid spacing must be positive and finite");
  }
}

bool PhaseGrid::is_conjugate(double h, double rel_tol) const {
  return close(p_step * p_size * q.step, h, rel_tol);
}

void PhaseGrid::require_conjugate(double h) const {
  validate();
  if (!is_conjugate(h)) {
    std::ostringstream os;
    os << "phase grid is not conjugate to its position grid: p_step * p_size * q_step = "
       << p_step * p_size * q.step << " but h = " << h;
    throw GridMismatchError(os.str());
  }
}

bool PhaseGrid::same_as(const PhaseGrid& other, double rel_tol) const {
  return q.same_as(other.q, rel_tol) && p_size == other.p_size &&
         close(p_step, other.p_step, rel_tol) &&
         std::abs(p_start - other.p_start) <= rel_tol * std::max(1.0, std::abs(p_start));
}

void require_position_coverage(const ModelParams& params, const PositionGrid& grid,
                               double sigmas) {
  const double sigma = std::sqrt(params.position_variance(0));
  if (grid.half_extent() < sigmas * sigma) {
    std::ostringstream os;
    os << "position grid half-width " << grid.half_extent() << " is below " << sigmas
       << " standard deviations (" << sigmas * sigma << ") of the smoothing Gaussian";
    throw CoverageError(os.str());
  }
  if (grid.step > sigma) {
    std::ostringstream os;
    os << "position step " << grid.step << " does not resolve the smoothing width " << sigma;
    throw CoverageError(os.str());
  }
}

void require_phase_coverage(const ModelParams& params, const PhaseGrid& grid, double sigmas) {
  require_position_coverage(params, grid.q, sigmas);
  const double sigma_p = std::sqrt(params.momentum_variance(0));
  if (0.5 * grid.p_extent() < sigmas * sigma_p) {
    std::ostringstream os;
    os << "momentum grid half-width " << 0.5 * grid.p_extent() << " is below " << sigmas
       << " standard deviations (" << sigmas * sigma_p << ") of the momentum Gaussian";
    throw CoverageError(os.str());
  }
}

}  // namespace diffavg
