#include "diffavg/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "diffavg/density.hpp"
#include "diffavg/diffusion.hpp"
#include "diffavg/lamb.hpp"
#include "diffavg/operators.hpp"
#include "diffavg/spectrum.hpp"
#include "diffavg/states.hpp"
#include "diffavg/transform.hpp"

namespace diffavg::checks {

namespace {

using cd = std::complex<double>;
using clock_type = std::chrono::steady_clock;

PositionGrid standard_grid() { return PositionGrid::centered(256, 8.0); }

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double relative(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

CheckResult round_trip(std::uint64_t seed) {
  const auto t0 = clock_type::now();
  CheckResult r{1, "round-trip identity", false, 0.0, 1e-8, "", 0.0};
  const ModelParams params = ModelParams::natural();
  const PositionGrid grid = standard_grid();
  const PhaseGrid pg = PhaseGrid::conjugate(grid, params.h);
  for (const auto& psi : states::random_corpus(grid, params.h, seed, 20)) {
    const WaveFunction back = extract(synthesize(psi, params, pg), params, grid);
    r.measured = std::max(r.measured, relative_l2_error(back, psi));
  }
  r.seconds = seconds_since(t0);
  r.passed = r.measured < r.threshold && r.seconds < 30.0;
  r.detail = "20 states, N = 256, max relative L2 error; runtime " + sci(r.seconds) + " s (< 30)";
  return r;
}

CheckResult decay_ladder() {
  const auto t0 = clock_type::now();
  CheckResult r{2, "decay-rate ladder", false, 0.0, 0.01, "", 0.0};
  const ModelParams params = ModelParams::natural();
  const int levels[4][2] = {{1, 0}, {1, 1}, {1, 2}, {2, 0}};
  auto envelope = [](double x) { return cd(std::exp(-x * x / 0.5), 0.0); };

  const PhaseGrid spectral_grid = PhaseGrid::conjugate(PositionGrid::centered(128, 4.0), params.h);
  const PhaseGrid fd_grid = PhaseGrid::conjugate(PositionGrid::centered(128, 4.0), params.h, 2);
  double worst_spectral = 0.0, worst_fd = 0.0;
  std::ostringstream detail;
  for (const auto& kn : levels) {
    const int k = kn[0], n = kn[1];
    const double expected = 2.0 * pi * k * (2 * n + 1);
    for (int pass = 0; pass < 2; ++pass) {
      DiffusionSpec spec;
      spec.params = params;
      spec.tau_end = 0.5;
      spec.integrator = pass == 0 ? Integrator::spectral_hermite : Integrator::finite_difference;
      const PhaseGrid& g = pass == 0 ? spectral_grid : fd_grid;
      const ExtendedAmplitude phi0 = ladder_state(g, params, k, n, envelope);
      const auto fits = measure_decay(evolve(phi0, spec));
      const double err = relative(fits.at(k).rate, expected);
      (pass == 0 ? worst_spectral : worst_fd) = std::max(pass == 0 ? worst_spectral : worst_fd, err);
      detail << (pass == 0 ? " S" : " FD") << "(" << k << "," << n << ")=" << sci(fits.at(k).rate);
    }
  }
  r.seconds = seconds_since(t0);
  r.measured = worst_spectral;
  r.passed = worst_spectral < 0.01 && worst_fd < 0.03 && r.seconds < 120.0;
  r.detail = "spectral max rel err " + sci(worst_spectral) + " (< 1e-2), finite-difference " +
             sci(worst_fd) + " (< 3e-2);" + detail.str() + "; runtime " + sci(r.seconds) + " s";
  return r;
}

CheckResult ground_survival(std::uint64_t seed) {
  const auto t0 = clock_type::now();
  CheckResult r{3, "ground-mode survival", false, 0.0, 1e-4, "", 0.0};
  const ModelParams params = ModelParams::natural();
  const PositionGrid grid = standard_grid();
  const PhaseGrid pg = PhaseGrid::conjugate(grid, params.h);
  const double tau = 3.0 * params.h / (2.0 * pi * params.a[0] * params.b[0]);
  double predicted = 0.0;
  const auto corpus = states::random_corpus(grid, params.h, seed, 5);
  for (int i = 0; i < 5; ++i) {
    const ExtendedAmplitude ground = synthesize(corpus[i], params, pg);
    // orthogonal excited contamination of relative norm 1, spread over levels 1..3
    const states::PacketState env = states::random_packets(seed, 100 + i, params.h);
    ExtendedAmplitude phi0 = ground;
    for (int n = 1; n <= 3; ++n) {
      ExtendedAmplitude c = ladder_state(pg, params, 1, n, [&](double x) { return env.value(x); });
      phi0 += (ground.norm() / std::sqrt(3.0) / c.norm()) * c;
    }
    DiffusionSpec spec;
    spec.params = params;
    spec.times = {tau};
    const ExtendedAmplitude evolved = evolve(phi0, spec).states.back();
    const AsymptoticState asym = asymptotic_state(phi0, spec);
    const ExtendedAmplitude limit = synthesize(asym.psi, params, pg);
    const ExtendedAmplitude renorm = (1.0 / asym.decay_factor(tau)) * evolved;
    r.measured = std::max(r.measured, (renorm - limit).norm() / limit.norm());

    const LadderDecomposition d = ladder_project(phi0, 1.0, 1.0, params.h, 8);
    double excited = 0.0;
    for (int k : {-1, 1}) {
      for (int n = 1; n < 8; ++n) {
        const double amp = d.population(k, n) * std::exp((ladder_eigenvalue(params, k, n) -
                                                          ladder_eigenvalue(params, k, 0)) * tau);
        excited += amp * amp;
      }
    }
    predicted = std::max(predicted, std::sqrt(excited) /
                                        std::hypot(d.population(-1, 0), d.population(1, 0)));
  }
  r.seconds = seconds_since(t0);
  r.passed = r.measured < r.threshold;
  r.detail = "5 states with unit excited contamination, tau = 3h/(2 pi a b); analytic residual " +
             sci(predicted) + " = excited populations x exp(-4 pi n tau)";
  return r;
}

CheckResult exact_operators(std::uint64_t seed) {
  const auto t0 = clock_type::now();
  CheckResult r{4, "exact operator formulas", false, 0.0, 1e-6, "", 0.0};
  const ModelParams params = ModelParams::natural();
  const PositionGrid grid = standard_grid();
  const double h = params.h;
  const double sq = params.position_variance(0), sp = params.momentum_variance(0);
  const ObservableSymbol symbols[4] = {ObservableSymbol::monomial(1, 0),
                                       ObservableSymbol::monomial(0, 1),
                                       ObservableSymbol::monomial(2, 0),
                                       ObservableSymbol::monomial(0, 2)};
  const char* names[4] = {"q", "p", "q^2", "p^2"};
  OperatorKernel kernels[4];
  for (int s = 0; s < 4; ++s) kernels[s] = kernel_by_quadrature(symbols[s], params, grid);
  double worst[4] = {0, 0, 0, 0};
  const Eigen::VectorXd x = grid.points();
  for (int i = 0; i < 10; ++i) {
    const states::PacketState st = states::random_packets(seed, 1000 + i, h);
    const Eigen::VectorXcd psi = st.sample(grid).values;
    const Eigen::VectorXcd d1 = st.derivative(grid, 1).values;
    const Eigen::VectorXcd d2 = st.derivative(grid, 2).values;
    const Eigen::VectorXcd want[4] = {
        (x.cast<cd>().array() * psi.array()).matrix(),
        cd(0.0, -h / (2.0 * pi)) * d1,
        (x.array().square().cast<cd>() * psi.array()).matrix() + sq * psi,
        -(h * h / (4.0 * pi * pi)) * d2 + sp * psi};
    const WaveFunction wf(grid, psi);
    for (int s = 0; s < 4; ++s) {
      const Eigen::VectorXcd got = apply(kernels[s], wf).values;
      worst[s] = std::max(worst[s], (got - want[s]).norm() / want[s].norm());
    }
  }
  std::ostringstream detail;
  detail << "10 states, quadrature kernels vs closed forms:";
  for (int s = 0; s < 4; ++s) {
    detail << " " << names[s] << " " << sci(worst[s]);
    r.measured = std::max(r.measured, worst[s]);
  }
  r.seconds = seconds_since(t0);
  r.passed = r.measured < r.threshold;
  r.detail = detail.str();
  return r;
}

CheckResult oscillator() {
  const auto t0 = clock_type::now();
  CheckResult r{5, "oscillator spectrum", false, 0.0, 1e-4, "", 0.0};
  const ModelParams params = ModelParams::natural();
  const PositionGrid grid = PositionGrid::centered(512, 6.0);
  const SpectralResult with = oscillator_spectrum(1.0, 1.0, params, grid, 5, false);
  const SpectralResult without = oscillator_spectrum(1.0, 1.0, params, grid, 5, true);
  double w1 = 0.0, w2 = 0.0;
  std::ostringstream detail;
  for (int n = 0; n < 5; ++n) {
    const double conventional = (n + 0.5) / (2.0 * pi);
    w1 = std::max(w1, relative(with.eigenvalues[n], conventional + 1.0 / (4.0 * pi)));
    w2 = std::max(w2, relative(without.eigenvalues[n], conventional));
    detail << " " << sci(with.eigenvalues[n]);
  }
  r.measured = std::max(w1, w2);
  r.seconds = seconds_since(t0);
  r.passed = r.measured < r.threshold;
  r.detail = "N = 512; shifted max rel err " + sci(w1) + ", shift removed " + sci(w2) +
             "; eigenvalues" + detail.str();
  return r;
}

CheckResult density(std::uint64_t seed) {
  const auto t0 = clock_type::now();
  CheckResult r{6, "phase-space density", false, 0.0, 1e-4, "", 0.0};
  const ModelParams params = ModelParams::natural();
  const PositionGrid grid = standard_grid();
  const PhaseGrid pg = PhaseGrid::conjugate(grid, params.h, 2);
  double min_rho = 0.0, norm_err = 0.0, smooth = 0.0;
  for (const auto& psi : states::random_corpus(grid, params.h, seed, 20)) {
    const PhaseSpaceDensity rho = density_from_wavefunction(psi, params, pg);
    min_rho = std::min(min_rho, rho.min());
    norm_err = std::max(norm_err, relative(rho.integral(), psi.norm_squared()));
    smooth = std::max(smooth, smoothing_check(psi, params, pg));
  }
  const WaveFunction excited = states::oscillator(grid, params.h, 1);
  const double min_w = wigner(excited, params, pg).min();
  const double min_rho_excited = density_from_wavefunction(excited, params, pg).min();
  smooth = std::max(smooth, smoothing_check(excited, params, pg));
  r.measured = smooth;
  r.seconds = seconds_since(t0);
  r.passed = min_rho >= -1e-12 && norm_err < 1e-6 && min_w < -1e-3 &&
             min_rho_excited >= -1e-12 && smooth < 1e-4;
  r.detail = "smoothed-Wigner residual " + sci(smooth) + " (< 1e-4); corpus min rho " +
             sci(min_rho) + ", norm err " + sci(norm_err) + " (< 1e-6); excited state min W " +
             sci(min_w) + " (< -1e-3), min rho " + sci(min_rho_excited);
  return r;
}

CheckResult quadratic_form(std::uint64_t seed) {
  const auto t0 = clock_type::now();
  CheckResult r{7, "quadratic-form equivalence", false, 0.0, 1e-5, "", 0.0};
  const ModelParams params = ModelParams::natural();
  const PositionGrid grid = standard_grid();
  const PhaseGrid pg = PhaseGrid::conjugate(grid, params.h, 2);
  const std::vector<std::string> specs = {"1", "q", "p", "q^2", "p^2", "q^2+p^2"};
  std::vector<ObservableSymbol> symbols;
  std::vector<OperatorKernel> kernels;
  for (const auto& s : specs) {
    symbols.push_back(ObservableSymbol::parse(s));
    kernels.push_back(kernel_by_quadrature(symbols.back(), params, grid));
  }
  // |f| for the scale of sign-changing observables
  std::vector<ObservableSymbol> magnitudes;
  for (const auto& f : symbols) {
    magnitudes.push_back(ObservableSymbol::function(
        [f](double q, double p) { return std::abs(f(q, p)); }, "|" + f.name() + "|"));
  }
  std::ostringstream detail;
  for (std::size_t s = 0; s < specs.size(); ++s) {
    double worst = 0.0;
    for (const auto& psi : states::random_corpus(grid, params.h, seed, 20)) {
      const PhaseSpaceDensity rho = density_from_wavefunction(psi, params, pg);
      const double lhs = expectation(kernels[s], psi).real();
      const double rhs = phase_average(symbols[s], rho);
      const double scale = phase_average(magnitudes[s], rho);
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    detail << " " << specs[s] << " " << sci(worst);
    r.measured = std::max(r.measured, worst);
  }
  r.seconds = seconds_since(t0);
  r.passed = r.measured < r.threshold;
  r.detail = "20 states, |Re<psi,A psi> - int f rho| / int |f| rho:" + detail.str();
  return r;
}

namespace {

// Frobenius norm of M compressed to the discrete Fourier modes |m| <= N/8,
// i.e. momenta within a quarter of the Nyquist momentum.
double resolved_norm(const Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<int> keep;
  for (int k = 0; k < n; ++k) {
    const int s = k <= n / 2 ? k : k - n;
    if (std::abs(s) <= n / 8) keep.push_back(k);
  }
  Eigen::MatrixXcd f(keep.size(), n);
  for (std::size_t a = 0; a < keep.size(); ++a) {
    for (int j = 0; j < n; ++j) {
      f(a, j) = std::polar(1.0 / std::sqrt(n), -2.0 * pi * keep[a] * j / n);
    }
  }
  return (f * m * f.adjoint()).norm();
}

}  // namespace

CheckResult asymptotics() {
  const auto t0 = clock_type::now();
  CheckResult r{8, "order-0 asymptotics", false, 0.0, 0.6, "", 0.0};
  const PositionGrid grid = standard_grid();
  const ObservableSymbol f = ObservableSymbol::parse("q^2+p^2");
  std::vector<double> dist;
  for (double h : {1.0, 0.5, 0.25, 0.125}) {
    const ModelParams params = ModelParams::isotropic(h, 1.0, 1.0, 1);
    const OperatorKernel exact = kernel_by_symbol(f, params, grid, SymbolOrder::exact);
    const OperatorKernel zero = kernel_by_symbol(f, params, grid, SymbolOrder::zero);
    dist.push_back(resolved_norm(exact.matrix - zero.matrix) / resolved_norm(zero.matrix));
  }
  std::ostringstream detail;
  bool ok = true;
  double lo = 1.0, hi = 0.0;
  detail << "distances";
  for (double d : dist) detail << " " << sci(d);
  detail << "; ratios";
  for (std::size_t i = 1; i < dist.size(); ++i) {
    const double ratio = dist[i] / dist[i - 1];
    detail << " " << sci(ratio);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    ok = ok && ratio >= 0.4 && ratio <= 0.6;
  }
  r.measured = hi;
  r.seconds = seconds_since(t0);
  r.passed = ok;
  r.detail = detail.str() + " (each in [0.4, 0.6]; norm on modes |p| <= p_Nyquist / 4)";
  return r;
}

CheckResult lamb_shift() {
  const auto t0 = clock_type::now();
  CheckResult r{9, "Lamb-shift reproduction", false, 0.0, 0.01, "", 0.0};
  const PhysicalConstants c = PhysicalConstants::reproduction();
  const lamb::Estimate e = lamb::inverse(lamb::mhz_to_erg(1058.0, c), c, 2);
  const double err_ab = relative(e.a_over_b, 3.41e4);
  const double err_dq = relative(e.delta_q, 4.24e-12);

  const ObservableSymbol coulomb = ObservableSymbol::coulomb(c.e * c.e);
  const auto s2 = lamb::perturbative_shift(lamb::HydrogenState::make(2, 0, c), coulomb,
                                           lamb::model_params(e.a_over_b, c));
  const double err_2s = relative(s2.quadrature, s2.closed_form);
  // n = 1 with sigma = a0 / 200: sigma^2 = hbar (a/b) / 2
  const double sigma = c.bohr_radius() / 200.0;
  const auto s1 = lamb::perturbative_shift(lamb::HydrogenState::make(1, 0, c), coulomb,
                                           lamb::model_params(2.0 * sigma * sigma / c.hbar, c));
  const double err_1s = relative(s1.quadrature, s1.closed_form);

  r.measured = std::max(err_ab, err_dq);
  r.seconds = seconds_since(t0);
  r.passed = err_ab < 0.01 && err_dq < 0.01 && err_2s < 0.02 && err_1s < 0.02 &&
             s2.regime_ok && r.seconds < 10.0;
  r.detail = "a/b = " + sci(e.a_over_b) + " s/g (err " + sci(err_ab) + "), dq = " +
             sci(e.delta_q) + " cm (err " + sci(err_dq) + "); quadrature vs closed form 2s " +
             sci(err_2s) + ", 1s at a0/200 " + sci(err_1s) + " (< 2e-2)";
  return r;
}

std::vector<CheckResult> run_all(std::uint64_t seed) {
  return {round_trip(seed),      decay_ladder(),         ground_survival(seed),
          exact_operators(seed), oscillator(),           density(seed),
          quadratic_form(seed),  asymptotics(),          lamb_shift()};
}

std::string format(const CheckResult& r) {
  std::ostringstream os;
  os << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << ": measured "
     << sci(r.measured) << " (threshold " << sci(r.threshold) << "); " << r.detail;
  return os.str();
}

}  // namespace diffavg::checks
