#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "diffavg/density.hpp"
#include "diffavg/error.hpp"
#include "diffavg/operators.hpp"
#include "diffavg/states.hpp"
#include "support.hpp"

using namespace diffavg;
using namespace testing;

namespace {

struct Fixture {
  ModelParams params = ModelParams::natural();
  PositionGrid grid = grid256();
  states::PacketState packets = states::random_packets(7, 0, 1.0);
  WaveFunction psi = packets.sample(grid);

  double err(const OperatorKernel& k, const Eigen::VectorXcd& want) const {
    return (apply(k, psi).values - want).norm() / psi.values.norm();
  }
};

// <1/|r - r'|> over a 3D normal of variance sigma^2 centred at the origin,
// by the shell theorem: (1/r) int_0^r 4 pi s^2 g + int_r^inf 4 pi s g
double coulomb_oracle(double r, double sigma) {
  using boost::math::quadrature::gauss_kronrod;
  const double norm = std::pow(2.0 * pi * sigma * sigma, -1.5);
  auto g = [&](double s) { return norm * std::exp(-0.5 * s * s / (sigma * sigma)); };
  const double inner =
      gauss_kronrod<double, 61>::integrate([&](double s) { return 4.0 * pi * s * s * g(s); }, 0.0, r, 10, 1e-14);
  const double outer = gauss_kronrod<double, 61>::integrate(
      [&](double s) { return 4.0 * pi * s * g(s); }, r, r + 40.0 * sigma, 10, 1e-14);
  return inner / r + outer;
}

}  // namespace

TEST_CASE_FIXTURE(Fixture, "identity, position and momentum") {
  const Eigen::VectorXd x = grid.points();
  const OperatorKernel one = kernel_by_quadrature(ObservableSymbol::constant(1.0), params, grid);
  CHECK((one.matrix - Eigen::MatrixXcd::Identity(grid.size, grid.size)).cwiseAbs().maxCoeff() < 1e-10);

  const OperatorKernel aq = kernel_by_quadrature(ObservableSymbol::monomial(1, 0), params, grid);
  CHECK(err(aq, x.cast<cd>().cwiseProduct(psi.values)) < 1e-8);

  // A_p = -j (h / 2 pi) d/dx
  const OperatorKernel ap = kernel_by_quadrature(ObservableSymbol::monomial(0, 1), params, grid);
  const Eigen::VectorXcd d1 = packets.derivative(grid, 1).values;
  CHECK(err(ap, cd(0.0, -params.h / (2.0 * pi)) * d1) < 1e-8);

  const OperatorKernel aq2 = kernel_by_quadrature(ObservableSymbol::monomial(2, 0), params, grid);
  const Eigen::VectorXd shifted = x.array().square() + 1.0 / (4.0 * pi);
  CHECK(err(aq2, shifted.cast<cd>().cwiseProduct(psi.values)) < 1e-8);

  const OperatorKernel ap2 = kernel_by_quadrature(ObservableSymbol::monomial(0, 2), params, grid);
  const Eigen::VectorXcd d2 = packets.derivative(grid, 2).values;
  const double c = params.h / (2.0 * pi);
  CHECK(err(ap2, -c * c * d2 + psi.values / (4.0 * pi)) < 1e-8);
}

TEST_CASE("closed forms carry the smoothing constants") {
  ModelParams params = ModelParams::isotropic(0.7, 0.4, 1.3, 1);
  const double h = params.h, a = 0.4, b = 1.3;
  const DifferentialForm q2 = closed_form(ObservableSymbol::monomial(2, 0), params);
  CHECK(q2.x2 == 1.0);
  CHECK(q2.constant == doctest::Approx(h * a / (4.0 * pi * b)).epsilon(1e-14));
  const DifferentialForm p2 = closed_form(ObservableSymbol::monomial(0, 2), params);
  CHECK(p2.second == doctest::Approx(-h * h / (4.0 * pi * pi)).epsilon(1e-14));
  CHECK(p2.constant == doctest::Approx(h * b / (4.0 * pi * a)).epsilon(1e-14));

  const double m = 2.0, w = 1.5;
  const DifferentialForm osc = closed_form(ObservableSymbol::harmonic(m, w), params);
  CHECK(osc.smoothing_shift ==
        doctest::Approx(h * (b * b + m * m * w * w * a * a) / (8.0 * pi * a * b * m)).epsilon(1e-14));
  // free particle p^2 / 2m
  const DifferentialForm free = closed_form(ObservableSymbol::monomial(0, 2, 1.0 / (2.0 * m)), params);
  CHECK(free.constant == doctest::Approx(h * b / (8.0 * pi * a * m)).epsilon(1e-14));

  CHECK_THROWS_AS(closed_form(ObservableSymbol::monomial(1, 1), params), UnsupportedSymbolError);
  CHECK_THROWS_AS(closed_form(ObservableSymbol::monomial(3, 0), params), UnsupportedSymbolError);
  CHECK_THROWS_AS(
      closed_form(ObservableSymbol::function([](double q, double) { return std::cos(q); }, "cos"), params),
      UnsupportedSymbolError);
}

TEST_CASE_FIXTURE(Fixture, "quadrature and symbol routes agree up to degree four") {
  for (const char* spec : {"q^2*p^2", "q^3*p", "p^4", "q^4 - 2*q*p + 0.5*p^3", "3"}) {
    CAPTURE(spec);
    const ObservableSymbol f = ObservableSymbol::parse(spec);
    const OperatorKernel quad = kernel_by_quadrature(f, params, grid);
    const OperatorKernel sym = kernel_by_symbol(f, params, grid);
    const Eigen::VectorXcd want = apply(quad, psi).values;
    CHECK((apply(sym, psi).values - want).norm() / want.norm() < 1e-8);
    CHECK(quad.hermiticity_defect() < 1e-12);
    CHECK(sym.hermiticity_defect() < 1e-12);
  }
}

TEST_CASE_FIXTURE(Fixture, "nonnegative symbols give nonnegative operators") {
  const PositionGrid g = PositionGrid::centered(96, 5.0);
  const ObservableSymbol f = ObservableSymbol::function(
      [](double q, double p) { return std::exp(-q * q - p * p) * (1.0 + std::sin(3.0 * q * p)); }, "bump");
  const OperatorKernel k = kernel_by_quadrature(f, params, g);
  const Eigen::MatrixXcd herm = 0.5 * (k.matrix + k.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);
  CHECK(k.hermiticity_defect() < 1e-12);
  const OperatorKernel p4 = kernel_by_quadrature(ObservableSymbol::parse("q^4+p^2"), params, g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es2(0.5 * (p4.matrix + p4.matrix.adjoint()));
  CHECK(es2.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE_FIXTURE(Fixture, "expectations equal phase-space averages") {
  const PhaseGrid pg = PhaseGrid::conjugate(grid, params.h, 2);
  const PhaseSpaceDensity rho = density_from_wavefunction(psi, params, pg);
  for (const char* spec : {"q", "p", "q^2+p^2", "q*p", "p^3 - q"}) {
    CAPTURE(spec);
    const ObservableSymbol f = ObservableSymbol::parse(spec);
    const cd e = expectation(kernel_by_quadrature(f, params, grid), psi);
    CHECK(std::abs(e.imag()) < 1e-10);
    CHECK(e.real() == doctest::Approx(phase_average(f, rho)).epsilon(1e-7).scale(1.0));
  }
}

TEST_CASE_FIXTURE(Fixture, "position-only observables") {
  const double var = params.position_variance(0);
  const Eigen::VectorXd c = position_observable(ObservableSymbol::constant(2.5), params, grid);
  CHECK((c.array() - 2.5).abs().maxCoeff() < 1e-14);
  const Eigen::VectorXd q2 = position_observable(ObservableSymbol::monomial(2, 0), params, grid);
  CHECK((q2.array() - grid.points().array().square() - var).abs().maxCoeff() < 1e-12);
  // callable route against the polynomial one
  const Eigen::VectorXd q2f = position_observable(
      ObservableSymbol::potential([](double q) { return q * q; }, "q2"), params, grid);
  CHECK((q2f - q2).cwiseAbs().maxCoeff() < 1e-10);
  const Eigen::VectorXd cosf = position_observable(
      ObservableSymbol::potential([](double q) { return std::cos(q); }, "cos"), params, grid);
  CHECK(std::abs(cosf[128] - std::exp(-0.5 * var)) < 1e-12);

  CHECK_THROWS_AS(position_observable(ObservableSymbol::monomial(0, 1), params, grid),
                  UnsupportedSymbolError);
  CHECK_THROWS_AS(position_observable(ObservableSymbol::function(
                                          [](double q, double p) { return q * p; }, "qp"),
                                      params, grid),
                  UnsupportedSymbolError);
  CHECK_THROWS_AS(position_observable(ObservableSymbol::potential(
                                          [](double q) { return std::exp(q * q * 1e3); }, "wild"),
                                      params, grid),
                  DivergenceError);
}

TEST_CASE("smoothed Coulomb potential") {
  const ModelParams params = ModelParams::isotropic(1.0, 0.3, 1.0, 3);
  const double sigma = std::sqrt(params.position_variance(0));
  const ObservableSymbol v = ObservableSymbol::coulomb(1.0);
  Eigen::VectorXd radii(4);
  radii << 0.1 * sigma, sigma, 3.0 * sigma, 20.0 * sigma;
  const Eigen::VectorXd got = position_observable_coulomb(v, params, radii);
  for (int i = 0; i < radii.size(); ++i) {
    const double want = -coulomb_oracle(radii[i], sigma);
    CHECK(got[i] == doctest::Approx(want).epsilon(1e-8));
  }
  // finite at the origin: -e^2 sqrt(2 / pi) / sigma
  CHECK(smoothed_coulomb(0.0, 1.0, sigma) == doctest::Approx(-std::sqrt(2.0 / pi) / sigma));
  CHECK_THROWS_AS(position_observable_coulomb(v, ModelParams::natural(), radii), ParameterError);
  ModelParams aniso = params;
  aniso.a[2] = 0.5;
  CHECK_THROWS_AS(position_observable_coulomb(v, aniso, radii), ParameterError);
}

TEST_CASE_FIXTURE(Fixture, "sampled symbols") {
  const PhaseGrid pg = PhaseGrid::conjugate(grid, params.h, 1);
  auto bump = [](double q, double p) { return std::exp(-0.5 * (q - 0.5) * (q - 0.5) - 0.3 * p * p); };
  PhaseField samples{pg, Eigen::MatrixXd(grid.size, pg.p_size)};
  for (int i = 0; i < grid.size; ++i) {
    for (int l = 0; l < pg.p_size; ++l) samples.values(i, l) = bump(grid.at(i), pg.p_at(l));
  }
  const ObservableSymbol f = ObservableSymbol::sampled(samples);

  // real symbol: f^(-u, -v) = conj f^(u, v) on the centred grid
  const Eigen::MatrixXcd& fh = f.fourier();
  const int nr = static_cast<int>(fh.rows()), nc = static_cast<int>(fh.cols());
  double worst = 0.0;
  for (int r = 1; r < nr; ++r) {
    for (int c = 1; c < nc; ++c) worst = std::max(worst, std::abs(fh(r, c) - std::conj(fh(nr - r, nc - c))));
  }
  CHECK(worst < 1e-12 * fh.cwiseAbs().maxCoeff());
  const SmoothedSymbol fs = smoothed_symbol(f, params);
  CHECK((fs.values.cwiseAbs().array() <= fh.cwiseAbs().array() + 1e-15).all());

  // sampled route against quadrature of the same function
  const OperatorKernel ref =
      kernel_by_quadrature(ObservableSymbol::function(bump, "bump"), params, grid);
  const OperatorKernel got = kernel_by_symbol(f, params, grid);
  const Eigen::VectorXcd want = apply(ref, psi).values;
  CHECK((apply(got, psi).values - want).norm() / want.norm() < 1e-8);

  CHECK_THROWS_AS(kernel_by_symbol(f, params, PositionGrid::centered(128, 8.0)), GridMismatchError);
  CHECK_THROWS_AS(kernel_by_symbol(ObservableSymbol::function(bump, "bump"), params, grid),
                  UnsupportedSymbolError);
}

TEST_CASE_FIXTURE(Fixture, "divergent symbols are rejected") {
  const ObservableSymbol wild =
      ObservableSymbol::function([](double q, double) { return std::exp(10.0 * q * q); }, "wild");
  CHECK_THROWS_AS(kernel_by_quadrature(wild, params, grid), DivergenceError);
  const ObservableSymbol inf =
      ObservableSymbol::function([](double q, double) { return 1.0 / (q - q); }, "inf");
  CHECK_THROWS_AS(kernel_by_quadrature(inf, params, grid), DivergenceError);
}

TEST_CASE("symbol parsing") {
  const ObservableSymbol f = ObservableSymbol::parse("0.5*p^2 - 3*q*p + q^2 + q^2");
  CHECK(f(2.0, 1.0) == doctest::Approx(0.5 - 6.0 + 8.0));
  CHECK(f.depends_on_momentum());
  CHECK_FALSE(ObservableSymbol::parse("q^3 - 1").depends_on_momentum());
  const ObservableSymbol h = ObservableSymbol::parse("harmonic:2,3");
  CHECK(h(1.0, 2.0) == doctest::Approx(4.0 / 4.0 + 2.0 * 9.0 / 2.0));
  CHECK(ObservableSymbol::parse("coulomb:1.5").charge_sq() == 1.5);
  CHECK_THROWS_AS(ObservableSymbol::parse(""), ParameterError);
  CHECK_THROWS_AS(ObservableSymbol::parse("q^"), ParameterError);
  CHECK_THROWS_AS(ObservableSymbol::parse("harmonic:1"), ParameterError);
  CHECK_THROWS_AS(ObservableSymbol::parse("z^2"), ParameterError);
  CHECK_THROWS_AS(ObservableSymbol::coulomb(-1.0), ParameterError);
}
