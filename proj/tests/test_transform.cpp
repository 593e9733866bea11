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
  PhaseGrid pg = PhaseGrid::conjugate(grid, 1.0);
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "matched Gaussian gives a centred phase-space Gaussian") {
  const double c = pi / params.h * params.ratio(0);
  const WaveFunction psi = gaussian(grid, c);
  const AveragedAmplitude phi = synthesize(psi, params, pg);

  // closed form: C4 N sqrt(pi / 2c) exp(-c q^2 / 2 - j pi p q / h - (2 pi p / h)^2 / (8 c))
  const double c4 = std::sqrt(0.5) * std::pow(2.0 / std::pow(params.h, 3), 0.25) *
                    std::pow(params.ratio(0), 0.25);
  const double amp = c4 * std::pow(2.0 * c / pi, 0.25) * std::sqrt(pi / (2.0 * c));
  Eigen::MatrixXcd want(grid.size, pg.p_size);
  for (int i = 0; i < grid.size; ++i) {
    for (int l = 0; l < pg.p_size; ++l) {
      const double q = grid.at(i), p = pg.p_at(l), w = 2.0 * pi * p / params.h;
      want(i, l) = amp * std::exp(-0.5 * c * q * q - w * w / (8.0 * c)) *
                   std::polar(1.0, -pi * p * q / params.h);
    }
  }
  CHECK(rel(phi.mode(-1), want) < 1e-10);
  CHECK(rel(phi.mode(1), want.conjugate()) < 1e-10);
  CHECK_FALSE(phi.has_mode(0));

  Eigen::Index qi, pi_;
  phi.mode(-1).cwiseAbs().maxCoeff(&qi, &pi_);
  CHECK(grid.at(static_cast<int>(qi)) == doctest::Approx(0.0));
  CHECK(pg.p_at(static_cast<int>(pi_)) == doctest::Approx(0.0));

  // recovered Gaussian matches the closed form pointwise
  const WaveFunction back = extract(phi, params, grid);
  CHECK((back.values - psi.values).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE_FIXTURE(Fixture, "zero maps to zero") {
  const AveragedAmplitude phi = synthesize(WaveFunction::zero(grid), params, pg);
  CHECK(phi.norm() == 0.0);
}

TEST_CASE_FIXTURE(Fixture, "shifting psi shifts |phi| in q") {
  const WaveFunction psi = states::random_packets(3, 0, 1.0).sample(grid);
  const int shift = 12;  // samples
  Eigen::VectorXcd moved = Eigen::VectorXcd::Zero(grid.size);
  moved.tail(grid.size - shift) = psi.values.head(grid.size - shift);
  const Eigen::MatrixXd a = synthesize(psi, params, pg).mode(-1).cwiseAbs();
  const Eigen::MatrixXd b = synthesize(WaveFunction(grid, moved), params, pg).mode(-1).cwiseAbs();
  const Eigen::MatrixXd want = a.topRows(grid.size - shift);
  const Eigen::MatrixXd got = b.bottomRows(grid.size - shift);
  CHECK((got - want).norm() / want.norm() < 1e-10);
}

TEST_CASE_FIXTURE(Fixture, "round trip, isometry, linearity, projector") {
  const auto corpus = states::random_corpus(grid, params.h, 11, 6);
  for (const auto& psi : corpus) {
    CHECK(relative_l2_error(extract(synthesize(psi, params, pg), params, grid), psi) < 1e-8);
  }
  for (std::size_t i = 0; i + 1 < corpus.size(); ++i) {
    const double lhs = real_inner(corpus[i], corpus[i + 1]);
    const double rhs = inner(synthesize(corpus[i], params, pg), synthesize(corpus[i + 1], params, pg));
    CHECK(std::abs(lhs - rhs) < 1e-6 * corpus[i].norm() * corpus[i + 1].norm());
  }
  const AveragedAmplitude phi0 = synthesize(corpus[0], params, pg);
  CHECK(phi0.norm() == doctest::Approx(corpus[0].norm()).epsilon(1e-10));

  const double alpha = 0.7, beta = -1.3;
  WaveFunction mix(grid, alpha * corpus[0].values + beta * corpus[1].values);
  const ExtendedAmplitude lhs = synthesize(mix, params, pg);
  const ExtendedAmplitude rhs =
      alpha * synthesize(corpus[0], params, pg) + beta * synthesize(corpus[1], params, pg);
  CHECK((lhs - rhs).norm() < 1e-13 * lhs.norm());

  // P^2 = P on a generic amplitude
  ExtendedAmplitude generic = phi0;
  Eigen::MatrixXcd bump = synthesize(corpus[2], params, pg).mode(-1).cwiseAbs().cast<cd>();
  generic.set_mode(-1, phi0.mode(-1) + bump);
  generic.set_mode(1, generic.mode(-1).conjugate());
  const ExtendedAmplitude p1 = project_averaged(generic, params);
  const ExtendedAmplitude p2 = project_averaged(p1, params);
  CHECK((p2 - p1).norm() < 1e-8 * p1.norm());
  // averaged amplitudes are fixed points
  CHECK((project_averaged(phi0, params) - phi0).norm() < 1e-8 * phi0.norm());
}

TEST_CASE_FIXTURE(Fixture, "extraction sees only the k = -1 mode") {
  ExtendedAmplitude only0(pg, 3);
  only0.set_mode(0, Eigen::MatrixXcd::Ones(grid.size, pg.p_size));
  CHECK_THROWS_AS(extract(only0, params, grid), ParameterError);
  only0.set_mode(-1, Eigen::MatrixXcd::Zero(grid.size, pg.p_size));
  CHECK(extract(only0, params, grid).norm() == 0.0);

  const AveragedAmplitude phi = synthesize(states::gaussian(grid, params), params, pg);
  CHECK_THROWS_AS(extract(phi, params, PositionGrid::centered(128, 8.0)), GridMismatchError);
}

TEST_CASE_FIXTURE(Fixture, "preconditions") {
  const WaveFunction psi = states::gaussian(grid, params);
  ModelParams bad = params;
  bad.a[0] = 0.0;
  CHECK_THROWS_AS(synthesize(psi, bad, pg), ParameterError);
  const PositionGrid narrow = PositionGrid::centered(64, 1.0);
  CHECK_THROWS_AS(synthesize(WaveFunction::zero(narrow), params, PhaseGrid::conjugate(narrow, 1.0)),
                  CoverageError);
  PhaseGrid skew = pg;
  skew.p_step *= 1.01;
  CHECK_THROWS_AS(synthesize(psi, params, skew), GridMismatchError);
}
