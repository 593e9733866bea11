#include "diffavg/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "diffavg/error.hpp"
#include "diffavg/fourier.hpp"
#include "diffavg/hermite.hpp"

namespace diffavg {

using cd = std::complex<double>;

// ---------------------------------------------------------------- spec

double DiffusionSpec::effective_a() const {
  return position_moment_rate ? std::sqrt(*position_moment_rate / 2.0) : params.a.at(0);
}

double DiffusionSpec::effective_b() const {
  return momentum_moment_rate ? std::sqrt(*momentum_moment_rate / 2.0) : params.b.at(0);
}

std::vector<double> DiffusionSpec::output_times() const {
  if (!times.empty()) return times;
  std::vector<double> t(11);
  for (int i = 0; i < 11; ++i) t[i] = tau_end * i / 10.0;
  return t;
}

double DiffusionSpec::stability_bound(const PhaseGrid& grid) const {
  const double a = effective_a(), b = effective_b();
  const double d2 = std::min(grid.q.step * grid.q.step, grid.p_step * grid.p_step);
  return d2 / (4.0 * std::max(a * a, b * b));
}

void DiffusionSpec::validate(const PhaseGrid& grid) const {
  params.validate_1d();
  if (position_moment_rate && !(*position_moment_rate > 0.0)) {
    throw ParameterError("position moment rate must be positive");
  }
  if (momentum_moment_rate && !(*momentum_moment_rate > 0.0)) {
    throw ParameterError("momentum moment rate must be positive");
  }
  if (hermite_count < 1) throw ParameterError("hermite_count must be positive");
  for (double t : output_times()) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("output times must be >= 0");
  }
  if (integrator == Integrator::finite_difference) {
    if (dtau < 0.0) throw ParameterError("dtau must be positive");
    const double bound = stability_bound(grid);
    if (dtau > bound) {
      std::ostringstream os;
      os << "dtau = " << dtau << " exceeds the explicit stability bound " << bound;
      throw StabilityError(os.str());
    }
  }
}

double ladder_eigenvalue(double a, double b, double h, int k, int n) {
  return -(2.0 * pi * std::abs(k) * a * b / h) * (2.0 * n + 1.0);
}

double ladder_eigenvalue(const ModelParams& params, int k, int n) {
  return ladder_eigenvalue(params.a.at(0), params.b.at(0), params.h, k, n);
}

// ---------------------------------------------------------------- x-representation

Eigen::VectorXd mode_positions(const PhaseGrid& grid, int k) {
  if (k == 0) throw ParameterError("mode 0 has no x-representation");
  if (grid.p_size % 2 != 0) throw ParameterError("momentum grid size must be even");
  const int np = grid.p_size;
  // h / (np dp) is the q step of a conjugate grid; kept general here
  Eigen::VectorXd x(np);
  const double h_over = 1.0 / (std::abs(k) * np * grid.p_step);
  for (int m = 0; m < np; ++m) x[m] = (m - np / 2) * h_over;
  return x;  // multiply by h
}

namespace {

struct ModeTransform {
  Eigen::VectorXd x;
  double dx = 0.0;
  Eigen::MatrixXcd forward;  // (p_size x p_size): phi^ = phi * forward
  Eigen::MatrixXcd inverse;  // phi = phi^ * inverse
};

ModeTransform mode_transform(const PhaseGrid& grid, double h, int k) {
  ModeTransform t;
  t.x = mode_positions(grid, k) * h;
  const int np = grid.p_size;
  t.dx = h / (std::abs(k) * np * grid.p_step);
  const double scale = std::sqrt(std::abs(k) / h);
  t.forward.resize(np, np);
  t.inverse.resize(np, np);
  for (int m = 0; m < np; ++m) {
    for (int l = 0; l < np; ++l) {
      const cd e = std::polar(1.0, -2.0 * pi * k * grid.p_at(l) * t.x[m] / h);
      t.forward(l, m) = scale * grid.p_step * e;
      t.inverse(m, l) = scale * t.dx * std::conj(e);
    }
  }
  return t;
}

double hermite_scale(double a, double b, double h, int k) {
  return std::sqrt(2.0 * pi * std::abs(k) * b / (h * a));
}

// sqrt(alpha) h_n(alpha (q_i - x)), (q.size x count)
Eigen::MatrixXd hermite_basis(const PositionGrid& q, double x, double alpha, int count) {
  Eigen::VectorXd z(q.size);
  for (int i = 0; i < q.size; ++i) z[i] = alpha * (q.at(i) - x);
  return std::sqrt(alpha) * hermite::functions(count, z);
}

// Periodic heat flow exp(tau (a^2 d_qq + b^2 d_pp)) by 2D DFT.
Eigen::MatrixXcd heat_flow(const Eigen::MatrixXcd& f, const PhaseGrid& grid, double a, double b,
                           double tau) {
  const int nq = static_cast<int>(f.rows()), np = static_cast<int>(f.cols());
  Eigen::FFT<double> fft;
  Eigen::MatrixXcd spec(nq, np);
  std::vector<cd> buf, out;
  for (int l = 0; l < np; ++l) {
    buf.assign(f.col(l).data(), f.col(l).data() + nq);
    fft.fwd(out, buf);
    for (int i = 0; i < nq; ++i) spec(i, l) = out[i];
  }
  for (int i = 0; i < nq; ++i) {
    buf.resize(np);
    for (int l = 0; l < np; ++l) buf[l] = spec(i, l);
    fft.fwd(out, buf);
    const double vq = 2.0 * pi * fourier::signed_index(i, nq) / (nq * grid.q.step);
    for (int l = 0; l < np; ++l) {
      const double vp = 2.0 * pi * fourier::signed_index(l, np) / (np * grid.p_step);
      out[l] *= std::exp(-(a * a * vq * vq + b * b * vp * vp) * tau);
    }
    fft.inv(buf, out);
    for (int l = 0; l < np; ++l) spec(i, l) = buf[l];
  }
  Eigen::MatrixXcd res(nq, np);
  for (int l = 0; l < np; ++l) {
    buf.assign(spec.col(l).data(), spec.col(l).data() + nq);
    fft.inv(out, buf);
    for (int i = 0; i < nq; ++i) res(i, l) = out[i];
  }
  return res;
}

}  // namespace

double LadderDecomposition::population(int k, int n) const {
  auto it = coeffs.find({k, n});
  if (it == coeffs.end()) return 0.0;
  const double dx = h / (std::abs(k) * grid.p_size * grid.p_step);
  return std::sqrt(0.5 * it->second.squaredNorm() * dx);
}

double LadderDecomposition::truncation_error() const {
  double worst = 0.0;
  std::map<int, double> lead;
  for (const auto& [key, c] : coeffs) {
    lead[key.first] = std::max(lead[key.first], c.cwiseAbs().maxCoeff());
  }
  for (const auto& [key, c] : coeffs) {
    if (key.second != count - 1 || lead[key.first] == 0.0) continue;
    worst = std::max(worst, c.cwiseAbs().maxCoeff() / lead[key.first]);
  }
  return worst;
}

LadderDecomposition ladder_project(const ExtendedAmplitude& phi, double a, double b, double h,
                                   int count) {
  LadderDecomposition d;
  d.grid = phi.grid();
  d.a = a;
  d.b = b;
  d.h = h;
  d.k_trunc = phi.truncation();
  d.count = count;
  const PhaseGrid& g = d.grid;
  d.mean_mode = phi.mode(0);
  for (const auto& [k, field] : phi.modes()) {
    if (k == 0) continue;
    const ModeTransform t = mode_transform(g, h, k);
    const Eigen::MatrixXcd hat = field * t.forward;  // (q x m)
    const double alpha = hermite_scale(a, b, h, k);
    Eigen::MatrixXcd coeffs(count, g.p_size);
    Eigen::MatrixXcd resid = hat;
    for (int m = 0; m < g.p_size; ++m) {
      const Eigen::MatrixXd basis = hermite_basis(g.q, t.x[m], alpha, count);
      const Eigen::VectorXcd c = std::sqrt(2.0) * g.q.step * (basis.transpose() * hat.col(m));
      coeffs.col(m) = c;
      resid.col(m) -= std::sqrt(0.5) * (basis.cast<cd>() * c);
    }
    for (int n = 0; n < count; ++n) d.coeffs[{k, n}] = coeffs.row(n).transpose();
    d.residual[k] = resid;
  }
  return d;
}

ExtendedAmplitude ladder_synthesize(const LadderDecomposition& d, double tau) {
  const PhaseGrid& g = d.grid;
  ExtendedAmplitude out(g, d.k_trunc);
  if (d.mean_mode.size() != 0 && d.mean_mode.norm() > 0.0) {
    out.set_mode(0, heat_flow(d.mean_mode, g, d.a, d.b, tau));
  }
  for (const auto& [k, resid] : d.residual) {
    const ModeTransform t = mode_transform(g, d.h, k);
    const double alpha = hermite_scale(d.a, d.b, d.h, k);
    Eigen::MatrixXcd hat =
        resid * std::exp(ladder_eigenvalue(d.a, d.b, d.h, k, d.count) * tau);
    Eigen::VectorXcd decay(d.count);
    for (int n = 0; n < d.count; ++n) {
      decay[n] = std::exp(ladder_eigenvalue(d.a, d.b, d.h, k, n) * tau);
    }
    for (int m = 0; m < g.p_size; ++m) {
      Eigen::VectorXcd c(d.count);
      for (int n = 0; n < d.count; ++n) c[n] = d.coeffs.at({k, n})[m] * decay[n];
      const Eigen::MatrixXd basis = hermite_basis(g.q, t.x[m], alpha, d.count);
      hat.col(m) += std::sqrt(0.5) * (basis.cast<cd>() * c);
    }
    out.set_mode(k, hat * t.inverse);
  }
  return out;
}

ExtendedAmplitude ladder_state(const PhaseGrid& grid, const ModelParams& params, int k, int n,
                               const std::function<std::complex<double>(double)>& envelope,
                               int k_trunc) {
  params.validate_1d();
  if (k == 0) throw ParameterError("ladder states need a nonzero fiber index");
  if (n < 0) throw ParameterError("ladder level must be non-negative");
  const double h = params.h;
  const ModeTransform t = mode_transform(grid, h, k);
  const double alpha = hermite_scale(params.a[0], params.b[0], h, k);
  Eigen::MatrixXcd hat(grid.q.size, grid.p_size);
  for (int m = 0; m < grid.p_size; ++m) {
    const Eigen::MatrixXd basis = hermite_basis(grid.q, t.x[m], alpha, n + 1);
    hat.col(m) = std::sqrt(0.5) * envelope(t.x[m]) * basis.col(n).cast<cd>();
  }
  ExtendedAmplitude out(grid, k_trunc);
  const Eigen::MatrixXcd field = hat * t.inverse;
  out.set_mode(k, field);
  out.set_mode(-k, field.conjugate());
  return out;
}

// ---------------------------------------------------------------- integrators

namespace {

void check_mean_zero(const ExtendedAmplitude& phi0, const DiffusionSpec& spec) {
  if (spec.require_mean_zero && phi0.has_mode(0) && phi0.mode_norm(0) > 0.0) {
    throw ParameterError(
        "initial amplitude has a nonzero k = 0 mode but the mean-zero hypothesis was requested");
  }
}

// Dirichlet second differences along q and the gauge-covariant second
// difference along p, a^2 D_qq + b^2 D_pp^(omega).
struct FdOperator {
  const PhaseGrid& g;
  double a2, b2;
  double omega;
  Eigen::VectorXcd up, down;  // exp(-/+ j omega q_i dp)

  FdOperator(const PhaseGrid& grid, double a, double b, double h, int k)
      : g(grid), a2(a * a), b2(b * b), omega(2.0 * pi * k / h) {
    up.resize(g.q.size);
    down.resize(g.q.size);
    for (int i = 0; i < g.q.size; ++i) {
      up[i] = std::polar(1.0, -omega * g.q.at(i) * g.p_step);
      down[i] = std::conj(up[i]);
    }
  }

  // out = L f, one fused pass over the column-major field
  void apply(const Eigen::MatrixXcd& f, Eigen::MatrixXcd& out) const {
    const int nq = static_cast<int>(f.rows()), np = static_cast<int>(f.cols());
    const double cq = a2 / (g.q.step * g.q.step);
    const double cp = b2 / (g.p_step * g.p_step);
    const double diag = -2.0 * (cq + cp);
    out.resize(nq, np);
    for (int l = 0; l < np; ++l) {
      const cd* col = f.col(l).data();
      const cd* right = l + 1 < np ? f.col(l + 1).data() : nullptr;
      const cd* left = l > 0 ? f.col(l - 1).data() : nullptr;
      cd* dst = out.col(l).data();
      for (int i = 0; i < nq; ++i) {
        cd v = diag * col[i];
        if (i + 1 < nq) v += cq * col[i + 1];
        if (i > 0) v += cq * col[i - 1];
        if (right) v += cp * up[i] * right[i];
        if (left) v += cp * down[i] * left[i];
        dst[i] = v;
      }
    }
  }
};

Eigen::MatrixXcd rk4(const FdOperator& op, Eigen::MatrixXcd f, double dt, int steps) {
  Eigen::MatrixXcd k1, k2, k3, k4, tmp;
  for (int s = 0; s < steps; ++s) {
    op.apply(f, k1);
    tmp = f + 0.5 * dt * k1;
    op.apply(tmp, k2);
    tmp = f + 0.5 * dt * k2;
    op.apply(tmp, k3);
    tmp = f + dt * k3;
    op.apply(tmp, k4);
    f += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return f;
}

Trajectory evolve_fd(const ExtendedAmplitude& phi0, const DiffusionSpec& spec) {
  const PhaseGrid& g = phi0.grid();
  const double a = spec.effective_a(), b = spec.effective_b(), h = spec.params.h;
  const double dtau = spec.dtau > 0.0 ? spec.dtau : 0.5 * spec.stability_bound(g);
  Trajectory tr;
  std::map<int, Eigen::MatrixXcd> current(phi0.modes().begin(), phi0.modes().end());
  double now = 0.0;
  std::vector<double> times = spec.output_times();
  std::sort(times.begin(), times.end());
  for (double t : times) {
    const double span = t - now;
    if (span > 0.0) {
      const int steps = static_cast<int>(std::ceil(span / dtau - 1e-12));
      const double dt = span / steps;
      for (auto& [k, field] : current) field = rk4(FdOperator(g, a, b, h, k), field, dt, steps);
      now = t;
    }
    ExtendedAmplitude snap(g, phi0.truncation());
    for (const auto& [k, field] : current) snap.set_mode(k, field);
    tr.times.push_back(t);
    tr.states.push_back(std::move(snap));
  }
  return tr;
}

}  // namespace

Trajectory evolve(const ExtendedAmplitude& phi0, const DiffusionSpec& spec) {
  spec.validate(phi0.grid());
  check_mean_zero(phi0, spec);
  if (spec.integrator == Integrator::finite_difference) return evolve_fd(phi0, spec);

  const LadderDecomposition d = ladder_project(phi0, spec.effective_a(), spec.effective_b(),
                                               spec.params.h, spec.hermite_count);
  Trajectory tr;
  tr.truncation_error = d.truncation_error();
  for (double t : spec.output_times()) {
    tr.times.push_back(t);
    tr.states.push_back(ladder_synthesize(d, t));
  }
  return tr;
}

DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& norms) {
  if (times.size() != norms.size()) throw ParameterError("times and norms differ in length");
  if (times.size() < 5) throw InsufficientSignalError("decay fit needs at least 5 samples");
  const int n = static_cast<int>(times.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    if (!(norms[i] > 1e-12)) {
      throw InsufficientSignalError("mode norm fell below 1e-12; shorten the horizon");
    }
    design(i, 0) = 1.0;
    design(i, 1) = times[i];
    y[i] = std::log(norms[i]);
  }
  const Eigen::Vector2d beta = design.colPivHouseholderQr().solve(y);
  DecayFit fit;
  fit.rate = -beta[1];
  fit.residual = std::sqrt((design * beta - y).squaredNorm() / n);
  fit.samples = n;
  return fit;
}

std::map<int, DecayFit> measure_decay(const Trajectory& trajectory) {
  if (trajectory.states.size() < 5) {
    throw InsufficientSignalError("decay fit needs at least 5 samples");
  }
  std::map<int, DecayFit> out;
  for (const auto& [k, field] : trajectory.states.front().modes()) {
    (void)field;
    std::vector<double> norms;
    for (const auto& s : trajectory.states) norms.push_back(s.mode_norm(k));
    if (norms.front() == 0.0) continue;
    out[k] = fit_decay(trajectory.times, norms);
  }
  if (out.empty()) throw InsufficientSignalError("trajectory carries no signal");
  return out;
}

double AsymptoticState::decay_factor(double tau) const { return std::exp(-rate * tau); }

AsymptoticState asymptotic_state(const ExtendedAmplitude& phi0, const DiffusionSpec& spec) {
  spec.validate(phi0.grid());
  check_mean_zero(phi0, spec);
  const PhaseGrid& g = phi0.grid();
  if (g.p_size != g.q.size) {
    throw GridMismatchError("asymptotic_state needs as many momentum as position samples");
  }
  const double half = 0.5 * g.q.size * g.q.step;
  if (std::abs(g.q.start + half) > 1e-9 * std::max(1.0, half)) {
    throw GridMismatchError("asymptotic_state needs a centred position grid");
  }
  g.require_conjugate(spec.params.h);
  const double a = spec.effective_a(), b = spec.effective_b(), h = spec.params.h;

  ExtendedAmplitude sector(g, phi0.truncation());
  if (phi0.has_mode(-1)) {
    sector.set_mode(-1, phi0.mode(-1));
  } else if (phi0.has_mode(1)) {
    sector.set_mode(-1, phi0.mode(1).conjugate());
  } else {
    throw ParameterError("amplitude has no k = +-1 mode; nothing survives the averaging");
  }
  const LadderDecomposition d = ladder_project(sector, a, b, h, 1);
  AsymptoticState out;
  out.psi = WaveFunction(g.q, d.coeffs.at({-1, 0}));
  out.rate = -ladder_eigenvalue(a, b, h, 1, 0);
  return out;
}

}  // namespace diffavg
