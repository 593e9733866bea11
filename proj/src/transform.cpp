#include "diffavg/transform.hpp"

#include <cmath>

#include "diffavg/error.hpp"
#include "internal.hpp"

namespace diffavg {

namespace {

double amplitude_prefactor(const ModelParams& params) {
  const double n = params.dim();
  return std::sqrt(0.5) * std::pow(2.0 / std::pow(params.h, 3), n / 4.0) *
         std::pow(params.ratio_product(), 0.25);
}

double extraction_prefactor(const ModelParams& params) {
  const double n = params.dim();
  return std::sqrt(2.0) * (1.0 / params.h) * std::pow(2.0 / std::pow(params.h, 3), n / 4.0) *
         std::pow(params.ratio_product(), 0.25);
}

}  // namespace

AveragedAmplitude synthesize(const WaveFunction& psi, const ModelParams& params,
                             const PhaseGrid& grid, int k_trunc) {
  params.validate_1d();
  grid.require_conjugate(params.h);
  require_same_grid(grid.q, psi.grid, "synthesize");
  require_phase_coverage(params, grid);

  const Eigen::MatrixXcd minus =
      amplitude_prefactor(params) * internal::windowed_transform(params, grid, psi.grid, psi.values);
  AveragedAmplitude out(grid, k_trunc);
  out.set_mode(1, minus.conjugate());
  out.set_mode(-1, minus);
  return out;
}

WaveFunction extract(const ExtendedAmplitude& phi, const ModelParams& params,
                     const PositionGrid& out_grid) {
  params.validate_1d();
  const PhaseGrid& grid = phi.grid();
  grid.require_conjugate(params.h);
  require_same_grid(grid.q, out_grid, "extract");
  require_phase_coverage(params, grid);
  if (!phi.has_mode(-1)) {
    throw ParameterError("extract needs the k = -1 fiber mode of the amplitude");
  }

  // int_0^h phi(T_t xi) e^{j 2 pi t / h} dt = h phi_{-1}
  const Eigen::MatrixXcd fiber = params.h * phi.mode(-1);
  // Y(q, x) = sum_p phi(q, p) e^{j 2 pi p x / h} dp
  const Eigen::MatrixXcd waves = internal::plane_waves(grid, out_grid, params.h, +1);
  const Eigen::MatrixXcd y = grid.p_step * (fiber * waves);
  const Eigen::MatrixXd g = internal::gaussian_window(params, grid.q, out_grid);

  Eigen::VectorXcd values(out_grid.size);
  for (int j = 0; j < out_grid.size; ++j) {
    values[j] = (g.col(j).cast<std::complex<double>>().array() * y.col(j).array()).sum();
  }
  values *= extraction_prefactor(params) * grid.q.step;
  return WaveFunction(out_grid, std::move(values));
}

AveragedAmplitude project_averaged(const ExtendedAmplitude& phi, const ModelParams& params) {
  return synthesize(extract(phi, params, phi.grid().q), params, phi.grid(), phi.truncation());
}

}  // namespace diffavg
