#include "diffavg/density.hpp"
#include "diffavg/error.hpp"
#include "diffavg/states.hpp"
#include "diffavg/transform.hpp"
#include "support.hpp"

using namespace diffavg;
using namespace testing;

namespace {

struct Fixture {
  ModelParams params = ModelParams::natural();
  PositionGrid grid = grid256();
  PhaseGrid pg = PhaseGrid::conjugate(grid, 1.0, 2);
};

// direct double sum C8 sum_x sum_x' G G psi(x) psi*(x') exp(-j 2 pi p (x - x') / h) dx dx'
double double_integral(const WaveFunction& psi, const ModelParams& params, double q, double p) {
  const double s = params.ratio(0), h = params.h;
  const double c8 = std::sqrt(2.0 / (h * h * h)) * std::sqrt(s);
  cd acc = 0.0;
  const PositionGrid& g = psi.grid;
  for (int i = 0; i < g.size; ++i) {
    const double x = g.at(i);
    const double gx = std::exp(-pi / h * s * (q - x) * (q - x));
    if (gx < 1e-18) continue;
    for (int j = 0; j < g.size; ++j) {
      const double y = g.at(j);
      const double gy = std::exp(-pi / h * s * (q - y) * (q - y));
      acc += gx * gy * psi.values[i] * std::conj(psi.values[j]) *
             std::polar(1.0, -2.0 * pi * p * (x - y) / h);
    }
  }
  return c8 * acc.real() * g.step * g.step;
}

}  // namespace

TEST_CASE_FIXTURE(Fixture, "matched Gaussian density is a normalised 2D Gaussian") {
  const WaveFunction psi = states::gaussian(grid, params);
  const PhaseSpaceDensity rho = density_from_wavefunction(psi, params, pg);
  CHECK(rho.integral() == doctest::Approx(1.0).epsilon(1e-6));
  // |phi_-1|^2 doubled: (2 / h) exp(-pi s q^2 / h ... ) with variances h a/(2 pi b), h b/(2 pi a)
  const double vq = params.h / (2.0 * pi), vp = params.h / (2.0 * pi);
  double worst = 0.0;
  for (int i = 0; i < grid.size; i += 7) {
    for (int l = 0; l < pg.p_size; l += 11) {
      const double q = grid.at(i), p = pg.p_at(l);
      const double want = std::exp(-0.5 * q * q / vq - 0.5 * p * p / vp) / (2.0 * pi * std::sqrt(vq * vp));
      worst = std::max(worst, std::abs(rho.values(i, l) - want));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE_FIXTURE(Fixture, "zero state") {
  const WaveFunction zero = WaveFunction::zero(grid);
  CHECK(density_from_wavefunction(zero, params, pg).values.norm() == 0.0);
  CHECK(wigner(zero, params, pg).values.norm() == 0.0);
  CHECK(smoothing_check(zero, params, pg) == 0.0);
}

TEST_CASE_FIXTURE(Fixture, "first excited state: nonnegative density, negative Wigner") {
  const WaveFunction psi = states::oscillator(grid, params.h, 1);
  const PhaseSpaceDensity rho = density_from_wavefunction(psi, params, pg);
  CHECK(rho.min() >= -1e-12);
  for (int i = 96; i < 160; i += 9) {
    for (int l = 200; l < 312; l += 13) {
      CHECK(rho.values(i, l) == doctest::Approx(double_integral(psi, params, grid.at(i), pg.p_at(l)))
                                    .epsilon(1e-8)
                                    .scale(1.0));
    }
  }
  // annulus: the origin is a local minimum
  CHECK(rho.values(128, 256) < 0.5 * rho.values.maxCoeff());

  const WignerDensity w = wigner(psi, params, pg);
  CHECK(w.min() < -1e-3);
  // W_1(0, 0) = -2 / h
  CHECK(w.values(128, 256) == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(w.integral() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(smoothing_check(psi, params, pg) < 1e-4);
}

TEST_CASE_FIXTURE(Fixture, "Gaussian Wigner function") {
  const double c = 3.0;
  const WaveFunction psi = gaussian(grid, c, 0.5, 1.0);
  const WignerDensity w = wigner(psi, params, pg);
  CHECK(w.min() >= -1e-12);
  // (2 / h) exp(-2 c (q - q0)^2 - (2 pi)^2 (p - p0)^2 / (2 c h^2))
  double worst = 0.0;
  for (int i = 0; i < grid.size; i += 5) {
    for (int l = 0; l < pg.p_size; l += 7) {
      const double dq = grid.at(i) - 0.5, dp = pg.p_at(l) - 1.0;
      const double want = 2.0 * std::exp(-2.0 * c * dq * dq - 4.0 * pi * pi * dp * dp / (2.0 * c));
      worst = std::max(worst, std::abs(w.values(i, l) - want));
    }
  }
  CHECK(worst < 1e-10);
  CHECK(smoothing_check(states::gaussian(grid, params), params, pg) < 1e-6);
}

TEST_CASE_FIXTURE(Fixture, "corpus invariants") {
  for (const auto& psi : states::random_corpus(grid, params.h, 5, 8)) {
    const PhaseSpaceDensity rho = density_from_wavefunction(psi, params, pg);
    CHECK(rho.min() >= -1e-12);
    CHECK(rho.integral() == doctest::Approx(psi.norm_squared()).epsilon(1e-6));
    const WignerDensity w = wigner(psi, params, pg);
    CHECK(w.integral() == doctest::Approx(psi.norm_squared()).epsilon(1e-6));
    // marginal: int rho dp = |psi|^2 smoothed with variance h a / (4 pi b)
    const Eigen::VectorXd marginal = rho.position_marginal();
    const Eigen::VectorXd want = smoothed_position_density(psi, params);
    CHECK((marginal - want).norm() / want.norm() < 1e-6);
    CHECK(smoothing_check(psi, params, pg) < 1e-4);
  }
  // the density is |phi~|^2 summed over the two fiber modes
  const WaveFunction psi = states::random_corpus(grid, params.h, 5, 1)[0];
  const PhaseGrid pg1 = PhaseGrid::conjugate(grid, 1.0, 2);
  const AveragedAmplitude phi = synthesize(psi, params, pg1);
  const Eigen::MatrixXd sum = phi.mode(-1).cwiseAbs2() + phi.mode(1).cwiseAbs2();
  CHECK((sum - density_from_wavefunction(psi, params, pg1).values).norm() < 1e-12);
}

TEST_CASE_FIXTURE(Fixture, "momentum resolution rule") {
  const WaveFunction psi = states::gaussian(grid, params);
  CHECK_THROWS_AS(density_from_wavefunction(psi, params, PhaseGrid::conjugate(grid, 1.0)),
                  GridMismatchError);
  CHECK_THROWS_AS(wigner(psi, params, PhaseGrid::conjugate(grid, 1.0)), GridMismatchError);
}
