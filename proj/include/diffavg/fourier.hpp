#pragma once

#include <Eigen/Dense>

namespace diffavg::fourier {

/// Band-limited (periodic trigonometric) interpolation of `values` onto a grid
/// `factor` times finer; output sample factor*i coincides with input sample i.
Eigen::VectorXcd upsample(const Eigen::VectorXcd& values, int factor);

/// Evaluate the periodic band-limited interpolant of `field` at
/// (row + row_shift, col + col_shift), with shifts in units of samples.
/// The Nyquist bin is weighted by cos(pi * shift) so real fields stay real.
Eigen::MatrixXcd shift2d(const Eigen::MatrixXcd& field, double row_shift, double col_shift);

/// Signed DFT frequency index of bin k for an n-point transform.
inline int signed_index(int k, int n) { return k <= n / 2 ? k : k - n; }

}  // namespace diffavg::fourier
