#include <random>

#include "diffavg/error.hpp"
#include "diffavg/extended.hpp"
#include "diffavg/fourier.hpp"
#include "diffavg/hermite.hpp"
#include "support.hpp"

using namespace diffavg;
using namespace testing;

TEST_CASE("model parameters validate and derive widths") {
  ModelParams p = ModelParams::natural();
  CHECK(p.position_variance(0) == doctest::Approx(1.0 / (4.0 * pi)));
  CHECK(p.momentum_variance(0) == doctest::Approx(1.0 / (4.0 * pi)));
  p.a[0] = 2.0;
  p.b[0] = 0.5;
  CHECK(p.position_variance(0) == doctest::Approx(1.0 / pi));
  CHECK(p.ratio_product() == doctest::Approx(0.25));

  ModelParams bad = ModelParams::natural();
  bad.h = 0.0;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = ModelParams::natural();
  bad.b[0] = -1.0;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = ModelParams::natural();
  bad.b.push_back(1.0);
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  CHECK_THROWS_AS(ModelParams::natural(2).validate_1d(), ParameterError);
}

TEST_CASE("physical constants are self-consistent") {
  CHECK(PhysicalConstants::reproduction().alpha_consistency() < 1e-3);
  CHECK(PhysicalConstants::modern().alpha_consistency() < 1e-6);
  // Bohr radius ~ 0.529e-8 cm
  CHECK(PhysicalConstants::reproduction().bohr_radius() == doctest::Approx(5.2918e-9).epsilon(1e-3));
}

TEST_CASE("grids") {
  const PositionGrid g = grid256();
  CHECK(g.at(0) == -8.0);
  CHECK(g.step == 1.0 / 16.0);
  CHECK_THROWS_AS(PositionGrid::centered(4, 1.0), ParameterError);

  const PhaseGrid pg = PhaseGrid::conjugate(g, 1.0);
  CHECK(pg.p_step * pg.p_size * g.step == doctest::Approx(1.0));
  CHECK(pg.is_conjugate(1.0));
  CHECK_THROWS_AS(pg.require_conjugate(2.0), GridMismatchError);

  // the conjugate momentum sum is an exact discrete delta
  const double d = 5 * g.step;
  cd s = 0.0;
  for (int l = 0; l < pg.p_size; ++l) s += std::polar(1.0, 2.0 * pi * pg.p_at(l) * d) * pg.p_step;
  CHECK(std::abs(s) < 1e-12);

  CHECK_THROWS_AS(require_position_coverage(ModelParams::natural(),
                                            PositionGrid::centered(64, 1.0)),
                  CoverageError);
  CHECK_NOTHROW(require_phase_coverage(ModelParams::natural(), pg));
}

TEST_CASE("band-limited interpolation") {
  const int n = 64;
  Eigen::VectorXcd v(n);
  auto f = [&](double t) { return cd(std::cos(2 * pi * 3 * t / n), std::sin(2 * pi * 5 * t / n)); };
  for (int i = 0; i < n; ++i) v[i] = f(i);
  const Eigen::VectorXcd up = fourier::upsample(v, 2);
  for (int i = 0; i < 2 * n; ++i) CHECK(std::abs(up[i] - f(0.5 * i)) < 1e-12);

  Eigen::MatrixXcd m(n, 1);
  m.col(0) = v;
  const Eigen::MatrixXcd shifted = fourier::shift2d(m, 0.3, 0.0);
  for (int i = 0; i < n; ++i) CHECK(std::abs(shifted(i, 0) - f(i + 0.3)) < 1e-12);
}

TEST_CASE("Hermite functions are orthonormal") {
  const hermite::Rule rule = hermite::gauss_rule(60);
  CHECK(rule.weights.sum() == doctest::Approx(std::sqrt(pi)));
  // int z^4 e^{-z^2} = 3 sqrt(pi) / 4
  CHECK(rule.weights.dot(rule.nodes.array().pow(4).matrix()) ==
        doctest::Approx(0.75 * std::sqrt(pi)));

  // trapezoid is spectrally accurate for these rapidly decaying functions
  const Eigen::VectorXd z = Eigen::VectorXd::LinSpaced(2401, -12.0, 12.0);
  const Eigen::MatrixXd hf = hermite::functions(20, z);
  const Eigen::MatrixXd gram = (z[1] - z[0]) * hf.transpose() * hf;
  CHECK((gram - Eigen::MatrixXd::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-10);
}

namespace {

// band-limited test field on a 64 x 64 phase grid
ExtendedAmplitude packet_amplitude(const PhaseGrid& g, int k) {
  Eigen::MatrixXcd f(g.q.size, g.p_size);
  for (int i = 0; i < g.q.size; ++i) {
    for (int l = 0; l < g.p_size; ++l) {
      const double q = g.q.at(i), p = g.p_at(l);
      f(i, l) = std::exp(-q * q - 0.5 * (p - 0.3) * (p - 0.3)) * std::polar(1.0, 0.7 * q);
    }
  }
  ExtendedAmplitude a(g, 3);
  a.set_mode(k, f);
  a.set_mode(-k, f.conjugate());
  return a;
}

PhaseGrid grid64() {
  PhaseGrid g;
  g.q = PositionGrid::centered(64, 8.0);
  g.p_size = 64;
  g.p_step = 0.25;
  g.p_start = -8.0;
  return g;
}

}  // namespace

TEST_CASE("Heisenberg-Weyl action") {
  const double h = 1.0;
  const PhaseGrid g = grid64();
  const ExtendedAmplitude phi = packet_amplitude(g, 1);

  SUBCASE("identity element") {
    const ExtendedAmplitude out = apply_weyl({1.0, 1.0, 0.0, 0.3}, phi, h);
    CHECK(rel(out.mode(1), phi.mode(1)) < 1e-14);
  }
  SUBCASE("pure q shift translates without phase") {
    const double t = 0.4;
    const ExtendedAmplitude out = apply_weyl({1.0, 0.0, t, 0.0}, phi, h);
    Eigen::MatrixXcd want(g.q.size, g.p_size);
    for (int i = 0; i < g.q.size; ++i) {
      for (int l = 0; l < g.p_size; ++l) {
        const double q = g.q.at(i) + t, p = g.p_at(l);
        want(i, l) = std::exp(-q * q - 0.5 * (p - 0.3) * (p - 0.3)) * std::polar(1.0, 0.7 * q);
      }
    }
    CHECK(rel(out.mode(1), want) < 1e-6);
  }
  SUBCASE("q and p shifts commute up to the group cocycle") {
    const double s1 = 0.5, s2 = 0.75;
    const WeylElement wq{1.0, 0.0, s1, 0.0}, wp{0.0, 1.0, s2, 0.0};
    const Eigen::MatrixXcd qp = apply_weyl(wq, apply_weyl(wp, phi, h), h).mode(1);
    const Eigen::MatrixXcd pq = apply_weyl(wp, apply_weyl(wq, phi, h), h).mode(1);
    // G_q G_p / G_p G_q = exp(-j 2 pi k s1 s2 / h)
    const cd expected = std::polar(1.0, -2.0 * pi * s1 * s2 / h);
    const double floor = 1e-3 * pq.cwiseAbs().maxCoeff();
    int compared = 0;
    for (int i = 0; i < g.q.size; ++i) {
      for (int l = 0; l < g.p_size; ++l) {
        if (std::abs(pq(i, l)) < floor) continue;
        CHECK(std::abs(qp(i, l) / pq(i, l) - expected) < 1e-6);
        ++compared;
      }
    }
    CHECK(compared > 50);
  }
  SUBCASE("norm and reality are preserved") {
    const ExtendedAmplitude out = apply_weyl({0.6, -0.4, 0.9, 0.2}, phi, h);
    CHECK(out.mode_norm(1) == doctest::Approx(phi.mode_norm(1)).epsilon(1e-6));
    CHECK(out.reality_defect() < 1e-12);
  }
  SUBCASE("large shifts are rejected") {
    CHECK_THROWS_AS(apply_weyl({1.0, 0.0, 5.0, 0.0}, phi, h), DomainError);
  }
}

TEST_CASE("fiber projection") {
  const double h = 1.0;
  const PhaseGrid g = grid64();
  const Eigen::MatrixXcd base = packet_amplitude(g, 1).mode(1);
  auto samples = [&](int count, auto&& fn) {
    FiberSamples s;
    for (int i = 0; i < count; ++i) {
      const double t = h * i / count;
      s.t.push_back(t);
      s.values.push_back(fn(t) * base);
    }
    return s;
  };

  SUBCASE("cosine carries half its amplitude in k = +-1") {
    const FiberSamples s = samples(12, [&](double t) { return cd(std::cos(2 * pi * t / h)); });
    CHECK(rel(fiber_project(s, 1, h), 0.5 * base) < 1e-14);
    CHECK(fiber_project(s, 0, h).norm() < 1e-14 * base.norm());
  }
  SUBCASE("constant lives in k = 0") {
    const FiberSamples s = samples(12, [](double) { return cd(1.0); });
    CHECK(rel(fiber_project(s, 0, h), base) < 1e-14);
    CHECK(fiber_project(s, 2, h).norm() < 1e-14 * base.norm());
  }
  SUBCASE("random trigonometric polynomial against a fine trapezoid") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n01;
    cd c[7];
    for (auto& v : c) v = cd(n01(rng), n01(rng));
    auto poly = [&](double t) {
      cd s = 0.0;
      for (int k = -3; k <= 3; ++k) s += c[k + 3] * std::polar(1.0, 2 * pi * k * t / h);
      return s;
    };
    const FiberSamples s = samples(12, poly);
    const ExtendedAmplitude d = fiber_decompose(s, g, 3, h);
    for (int k = -3; k <= 3; ++k) {
      // oracle: trapezoid on 24 samples
      cd oracle = 0.0;
      for (int i = 0; i < 24; ++i) {
        const double t = h * i / 24.0;
        oracle += poly(t) * std::polar(1.0, -2 * pi * k * t / h) / 24.0;
      }
      CHECK(rel(d.mode(k), oracle * base) < 1e-12);
    }
    // resynthesis
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      CHECK(rel(fiber_evaluate(d, s.t[i], h), s.values[i]) < 1e-10);
    }
  }
  SUBCASE("projection is idempotent") {
    const FiberSamples s = samples(12, [&](double t) { return std::polar(1.0, 2 * pi * 2 * t / h); });
    const Eigen::MatrixXcd once = fiber_project(s, 2, h);
    CHECK(rel(once, base) < 1e-14);
  }
  SUBCASE("bad sampling is rejected") {
    FiberSamples s = samples(12, [](double) { return cd(1.0); });
    s.t[3] += 0.01;
    CHECK_THROWS_AS(fiber_project(s, 0, h), ParameterError);
    const FiberSamples few = samples(8, [](double) { return cd(1.0); });
    CHECK_THROWS_AS(fiber_decompose(few, g, 3, h), ParameterError);
  }
}
