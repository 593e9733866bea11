#include "diffavg/density.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "diffavg/error.hpp"
#include "diffavg/fourier.hpp"
#include "internal.hpp"

namespace diffavg {

using cd = std::complex<double>;

double PhaseField::integral() const { return values.sum() * grid.cell(); }

Eigen::VectorXd PhaseField::position_marginal() const {
  return values.rowwise().sum() * grid.p_step;
}

void require_momentum_resolution(const PhaseGrid& grid, double h) {
  grid.validate();
  const double limit = h / (2.0 * grid.q.extent());
  if (grid.p_step > limit * (1.0 + 1e-9)) {
    std::ostringstream os;
    os << "momentum step " << grid.p_step << " exceeds h / (2 range(x)) = " << limit
       << "; use at least twice as many momentum samples as position samples";
    throw GridMismatchError(os.str());
  }
}

namespace {

void check_inputs(const WaveFunction& psi, const ModelParams& params, const PhaseGrid& grid,
                  const char* what) {
  params.validate_1d();
  require_same_grid(grid.q, psi.grid, what);
  require_phase_coverage(params, grid);
  require_momentum_resolution(grid, params.h);
}

// Direct zero-padded convolution along one axis with a sampled, symmetric kernel.
Eigen::MatrixXd convolve_rows(const Eigen::MatrixXd& in, const Eigen::VectorXd& kernel) {
  const int half = static_cast<int>(kernel.size() / 2);
  const int n = static_cast<int>(in.rows());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(in.rows(), in.cols());
  for (int i = 0; i < n; ++i) {
    for (int d = -half; d <= half; ++d) {
      const int src = i - d;
      if (src < 0 || src >= n) continue;
      out.row(i) += kernel[d + half] * in.row(src);
    }
  }
  return out;
}

Eigen::VectorXd sampled_gaussian(double variance, double step, double sigmas = 12.0) {
  const int half = static_cast<int>(std::ceil(sigmas * std::sqrt(variance) / step));
  Eigen::VectorXd k(2 * half + 1);
  const double norm = step / std::sqrt(2.0 * pi * variance);
  for (int d = -half; d <= half; ++d) {
    const double u = d * step;
    k[d + half] = norm * std::exp(-0.5 * u * u / variance);
  }
  return k;
}

}  // namespace

PhaseSpaceDensity density_from_wavefunction(const WaveFunction& psi, const ModelParams& params,
                                            const PhaseGrid& grid) {
  check_inputs(psi, params, grid, "density");
  const double c8 = std::sqrt(2.0 / std::pow(params.h, 3)) * std::sqrt(params.ratio_product());
  const Eigen::MatrixXcd w = internal::windowed_transform(params, grid, psi.grid, psi.values);
  PhaseSpaceDensity out;
  out.grid = grid;
  out.values = c8 * w.cwiseAbs2();
  return out;
}

WignerDensity wigner(const WaveFunction& psi, const ModelParams& params, const PhaseGrid& grid) {
  check_inputs(psi, params, grid, "wigner");
  const int n = psi.grid.size;
  const double dx = psi.grid.step;
  const double h = params.h;
  // fine(2 i) = psi(x_i), fine(2 i + 1) interpolated
  const Eigen::VectorXcd fine = fourier::upsample(psi.values, 2);
  const int nf = static_cast<int>(fine.size());

  // correlation C(i, m) = psi*(x_i + m dx / 2) psi(x_i - m dx / 2), m in [-n, n)
  Eigen::MatrixXcd corr = Eigen::MatrixXcd::Zero(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int m = -n; m < n; ++m) {
      const int plus = 2 * i + m;
      const int minus = 2 * i - m;
      if (plus < 0 || plus >= nf || minus < 0 || minus >= nf) continue;
      corr(i, m + n) = std::conj(fine[plus]) * fine[minus];
    }
  }
  Eigen::MatrixXcd waves(2 * n, grid.p_size);
  for (int l = 0; l < grid.p_size; ++l) {
    for (int m = -n; m < n; ++m) {
      const double phase = 2.0 * pi * grid.p_at(l) * m * dx / h;
      waves(m + n, l) = cd(std::cos(phase), std::sin(phase));
    }
  }
  WignerDensity out;
  out.grid = grid;
  out.values = (dx / h) * (corr * waves).real();
  return out;
}

PhaseField smooth_wigner(const WignerDensity& w, const ModelParams& params) {
  params.validate_1d();
  const Eigen::VectorXd kq = sampled_gaussian(params.position_variance(0), w.grid.q.step);
  const Eigen::VectorXd kp = sampled_gaussian(params.momentum_variance(0), w.grid.p_step);
  PhaseField out;
  out.grid = w.grid;
  const Eigen::MatrixXd along_q = convolve_rows(w.values, kq);
  out.values = convolve_rows(along_q.transpose(), kp).transpose();
  return out;
}

double smoothing_check(const WaveFunction& psi, const ModelParams& params, const PhaseGrid& grid) {
  const PhaseSpaceDensity rho = density_from_wavefunction(psi, params, grid);
  const PhaseField smoothed = smooth_wigner(wigner(psi, params, grid), params);
  const double ref = rho.values.norm();
  const double diff = (smoothed.values - rho.values).norm();
  if (ref == 0.0) return diff;
  return diff / ref;
}

Eigen::VectorXd smoothed_position_density(const WaveFunction& psi, const ModelParams& params) {
  params.validate_1d();
  const Eigen::VectorXd k = sampled_gaussian(params.position_variance(0), psi.grid.step);
  const Eigen::MatrixXd dens = psi.values.cwiseAbs2();
  return convolve_rows(dens, k).col(0);
}

}  // namespace diffavg
