#pragma once

#include <Eigen/Dense>

#include "diffavg/params.hpp"

namespace diffavg {

/// Uniform one-dimensional sample grid x_i = start + i * step, i < size.
struct PositionGrid {
  double start = -8.0;
  double step = 1.0 / 16.0;
  int size = 256;

  /// Symmetric grid [-half_width, half_width) with `size` points.
  static PositionGrid centered(int size, double half_width);

  double at(int i) const { return start + i * step; }
  double extent() const { return size * step; }
  /// Largest |x| distance from the grid centre to an edge sample.
  double half_extent() const { return 0.5 * extent(); }
  double center() const { return start + 0.5 * (size - 1) * step; }
  Eigen::VectorXd points() const;

  void validate() const;
  bool same_as(const PositionGrid& other, double rel_tol = 1e-12) const;
};

/// Product of a position grid in q and a uniform momentum grid in p.
///
/// Grids built by `conjugate` satisfy step_p * size_p * step_q = h, which makes
/// the sum over p of exp(j 2 pi p (x - x') / h) an exact discrete delta on the
/// position grid. Every transform in the library relies on that identity.
struct PhaseGrid {
  PositionGrid q;
  double p_start = -8.0;
  double p_step = 1.0 / 16.0;
  int p_size = 256;

  /// Momentum grid conjugate to `q` for Planck constant h, with
  /// p_size = oversample * q.size points centred on p = 0.
  static PhaseGrid conjugate(const PositionGrid& q, double h, int oversample = 1);

  double p_at(int l) const { return p_start + l * p_step; }
  double p_extent() const { return p_size * p_step; }
  Eigen::VectorXd p_points() const;
  double cell() const { return q.step * p_step; }

  void validate() const;
  bool is_conjugate(double h, double rel_tol = 1e-10) const;
  void require_conjugate(double h) const;
  bool same_as(const PhaseGrid& other, double rel_tol = 1e-12) const;
};

/// Throws CoverageError when the grid half-widths are below `sigmas` standard
/// deviations of the position / momentum smoothing Gaussians.
void require_position_coverage(const ModelParams& params, const PositionGrid& grid,
                               double sigmas = 6.0);
void require_phase_coverage(const ModelParams& params, const PhaseGrid& grid,
                            double sigmas = 6.0);

}  // namespace diffavg
