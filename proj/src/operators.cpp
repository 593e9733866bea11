#include "diffavg/operators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "diffavg/error.hpp"
#include "diffavg/fourier.hpp"
#include "internal.hpp"

#include <unsupported/Eigen/FFT>

namespace diffavg {

using cd = std::complex<double>;

// ---------------------------------------------------------------- symbols

ObservableSymbol ObservableSymbol::polynomial(std::vector<Monomial> terms) {
  // merge equal powers so closed forms and route comparisons see one term each
  std::map<std::pair<int, int>, double> merged;
  for (const auto& t : terms) {
    if (t.q_power < 0 || t.p_power < 0) throw ParameterError("negative power in polynomial");
    if (!std::isfinite(t.coeff)) throw ParameterError("non-finite polynomial coefficient");
    merged[{t.q_power, t.p_power}] += t.coeff;
  }
  auto d = std::make_shared<Data>();
  d->kind = Kind::polynomial;
  std::ostringstream name;
  for (const auto& [pw, c] : merged) {
    if (c == 0.0) continue;
    d->terms.push_back({c, pw.first, pw.second});
    if (name.tellp() > 0) name << " + ";
    name << c;
    if (pw.first) name << "*q^" << pw.first;
    if (pw.second) name << "*p^" << pw.second;
  }
  d->name = d->terms.empty() ? "0" : name.str();
  return ObservableSymbol(std::move(d));
}

ObservableSymbol ObservableSymbol::potential(std::function<double(double)> v, std::string name) {
  if (!v) throw ParameterError("empty potential function");
  auto d = std::make_shared<Data>();
  d->kind = Kind::function;
  d->fn = [v = std::move(v)](double q, double) { return v(q); };
  d->position_only = true;
  d->name = std::move(name);
  return ObservableSymbol(std::move(d));
}

ObservableSymbol ObservableSymbol::monomial(int q_power, int p_power, double coeff) {
  return polynomial({{coeff, q_power, p_power}});
}

ObservableSymbol ObservableSymbol::harmonic(double mass, double omega) {
  if (!(mass > 0.0)) throw ParameterError("oscillator mass must be positive");
  return polynomial({{0.5 / mass, 0, 2}, {0.5 * mass * omega * omega, 2, 0}});
}

ObservableSymbol ObservableSymbol::function(std::function<double(double, double)> f,
                                            std::string name) {
  if (!f) throw ParameterError("empty observable function");
  auto d = std::make_shared<Data>();
  d->kind = Kind::function;
  d->fn = std::move(f);
  d->name = std::move(name);
  return ObservableSymbol(std::move(d));
}

ObservableSymbol ObservableSymbol::coulomb(double charge_sq) {
  if (!(charge_sq > 0.0)) throw ParameterError("Coulomb coupling e^2 must be positive");
  auto d = std::make_shared<Data>();
  d->kind = Kind::coulomb;
  d->charge_sq = charge_sq;
  d->name = "coulomb";
  return ObservableSymbol(std::move(d));
}

ObservableSymbol ObservableSymbol::sampled(PhaseField samples) {
  samples.grid.validate();
  if (samples.values.rows() != samples.grid.q.size ||
      samples.values.cols() != samples.grid.p_size) {
    throw GridMismatchError("sampled symbol does not match its phase grid");
  }
  if (!samples.values.allFinite()) throw DivergenceError("sampled symbol has non-finite values");
  auto d = std::make_shared<Data>();
  d->kind = Kind::sampled;
  d->name = "sampled";
  const PhaseGrid& g = samples.grid;
  const int nq = g.q.size, np = g.p_size;
  d->v.resize(nq);
  d->u.resize(np);
  for (int m = 0; m < nq; ++m) d->v[m] = 2.0 * pi * (m - nq / 2) / (nq * g.q.step);
  for (int k = 0; k < np; ++k) d->u[k] = 2.0 * pi * (k - np / 2) / (np * g.p_step);
  // f^(u_k, v_m) = (1/2 pi) dq dp sum_il f_il exp(j (q_i v_m + p_l u_k)), rows v, cols u
  Eigen::MatrixXcd eq(nq, nq), ep(np, np);
  for (int i = 0; i < nq; ++i) {
    for (int m = 0; m < nq; ++m) eq(m, i) = std::polar(1.0, g.q.at(i) * d->v[m]);
  }
  for (int l = 0; l < np; ++l) {
    for (int k = 0; k < np; ++k) ep(l, k) = std::polar(1.0, g.p_at(l) * d->u[k]);
  }
  d->fhat = (g.cell() / (2.0 * pi)) * (eq * samples.values.cast<cd>() * ep);
  d->samples = std::move(samples);
  return ObservableSymbol(std::move(d));
}

double ObservableSymbol::operator()(double q, double p) const {
  switch (data_->kind) {
    case Kind::polynomial: {
      double s = 0.0;
      for (const auto& t : data_->terms) {
        s += t.coeff * std::pow(q, t.q_power) * std::pow(p, t.p_power);
      }
      return s;
    }
    case Kind::function:
      return data_->fn(q, p);
    default:
      throw UnsupportedSymbolError("symbol '" + name() + "' cannot be evaluated pointwise in 1D");
  }
}

bool ObservableSymbol::depends_on_momentum() const {
  switch (data_->kind) {
    case Kind::polynomial:
      return std::any_of(data_->terms.begin(), data_->terms.end(),
                         [](const Monomial& t) { return t.p_power > 0; });
    case Kind::coulomb:
      return false;
    case Kind::function:
      return !data_->position_only;
    default:
      return true;
  }
}

const std::vector<Monomial>& ObservableSymbol::terms() const {
  if (data_->kind != Kind::polynomial) throw UnsupportedSymbolError(name() + " is not a polynomial");
  return data_->terms;
}

double ObservableSymbol::charge_sq() const {
  if (data_->kind != Kind::coulomb) throw UnsupportedSymbolError(name() + " is not Coulomb");
  return data_->charge_sq;
}

const PhaseField& ObservableSymbol::samples() const {
  if (data_->kind != Kind::sampled) throw UnsupportedSymbolError(name() + " is not sampled");
  return data_->samples;
}

const Eigen::VectorXd& ObservableSymbol::fourier_u() const {
  samples();
  return data_->u;
}

const Eigen::VectorXd& ObservableSymbol::fourier_v() const {
  samples();
  return data_->v;
}

const Eigen::MatrixXcd& ObservableSymbol::fourier() const {
  samples();
  return data_->fhat;
}

ObservableSymbol ObservableSymbol::operator+(const ObservableSymbol& other) const {
  if (kind() == Kind::polynomial && other.kind() == Kind::polynomial) {
    std::vector<Monomial> t = terms();
    t.insert(t.end(), other.terms().begin(), other.terms().end());
    return polynomial(std::move(t));
  }
  if ((kind() == Kind::polynomial || kind() == Kind::function) &&
      (other.kind() == Kind::polynomial || other.kind() == Kind::function)) {
    const ObservableSymbol a = *this, b = other;
    return function([a, b](double q, double p) { return a(q, p) + b(q, p); },
                    name() + " + " + other.name());
  }
  throw UnsupportedSymbolError("cannot add symbols '" + name() + "' and '" + other.name() + "'");
}

namespace {

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParameterError("bad number '" + item + "' in symbol spec");
    }
  }
  return out;
}

Monomial parse_term(const std::string& term) {
  Monomial m;
  std::stringstream ss(term);
  std::string factor;
  while (std::getline(ss, factor, '*')) {
    if (factor.empty()) throw ParameterError("empty factor in '" + term + "'");
    if (factor[0] == 'q' || factor[0] == 'p') {
      int power = 1;
      if (factor.size() > 1) {
        if (factor[1] != '^' || factor.size() < 3) {
          throw ParameterError("bad factor '" + factor + "'");
        }
        power = static_cast<int>(parse_numbers(factor.substr(2)).at(0));
      }
      (factor[0] == 'q' ? m.q_power : m.p_power) += power;
    } else {
      m.coeff *= parse_numbers(factor).at(0);
    }
  }
  return m;
}

}  // namespace

ObservableSymbol ObservableSymbol::parse(const std::string& spec_in) {
  std::string spec;
  for (char c : spec_in) {
    if (!std::isspace(static_cast<unsigned char>(c))) spec.push_back(c);
  }
  if (spec.empty()) throw ParameterError("empty symbol spec");
  if (spec.rfind("harmonic", 0) == 0) {
    std::vector<double> v{1.0, 1.0};
    if (spec.size() > 8) {
      if (spec[8] != ':') throw ParameterError("expected harmonic:mass,omega");
      v = parse_numbers(spec.substr(9));
      if (v.size() != 2) throw ParameterError("expected harmonic:mass,omega");
    }
    return harmonic(v[0], v[1]);
  }
  if (spec.rfind("coulomb", 0) == 0) {
    double e2 = 1.0;
    if (spec.size() > 7) {
      if (spec[7] != ':') throw ParameterError("expected coulomb:e2");
      e2 = parse_numbers(spec.substr(8)).at(0);
    }
    return coulomb(e2);
  }
  // split at +/- that are not exponent signs
  std::vector<Monomial> terms;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= spec.size(); ++i) {
    const bool end = i == spec.size();
    if (!end && (spec[i] == '+' || spec[i] == '-')) {
      const char prev = spec[i - 1];
      if (prev == 'e' || prev == 'E' || prev == '^' || prev == '*') continue;
    } else if (!end) {
      continue;
    }
    std::string term = spec.substr(start, i - start);
    double sign = 1.0;
    if (!term.empty() && (term[0] == '+' || term[0] == '-')) {
      sign = term[0] == '-' ? -1.0 : 1.0;
      term.erase(0, 1);
    }
    if (term.empty()) throw ParameterError("bad polynomial '" + spec_in + "'");
    Monomial m = parse_term(term);
    m.coeff *= sign;
    terms.push_back(m);
    start = i;
  }
  return polynomial(std::move(terms));
}

SmoothedSymbol smoothed_symbol(const ObservableSymbol& f, const ModelParams& params) {
  params.validate_1d();
  SmoothedSymbol s;
  s.u = f.fourier_u();
  s.v = f.fourier_v();
  s.values = f.fourier();
  const double r = params.ratio(0);
  for (int k = 0; k < s.u.size(); ++k) {
    for (int m = 0; m < s.v.size(); ++m) {
      const double e = params.h / (8.0 * pi) * (s.v[m] * s.v[m] / r + r * s.u[k] * s.u[k]);
      s.values(m, k) *= std::exp(-e);
    }
  }
  return s;
}

// ---------------------------------------------------------------- kernels

double OperatorKernel::hermiticity_defect() const {
  const double n = matrix.norm();
  if (n == 0.0) return 0.0;
  return (matrix - matrix.adjoint()).norm() / n;
}

namespace {

double kernel_prefactor(const ModelParams& params) {
  return std::sqrt(2.0 / std::pow(params.h, 3)) * std::sqrt(params.ratio_product());
}

// The discrete momentum sum makes every lag kernel periodic in x - x' with
// period N dx; only the primary image |d| < N/2 is physical (the half-way lag
// is shared between both images to keep the matrix Hermitian).
double image_weight(int d, int n) {
  const int a = std::abs(d);
  if (2 * a < n) return 1.0;
  return 2 * a == n ? 0.5 : 0.0;
}

// E(l, d + (N-1)) = w(d) exp(j 2 pi p_l d dx / h) dp for d in (-N, N)
Eigen::MatrixXcd lag_waves(const PhaseGrid& pg, double h) {
  const int n = pg.q.size;
  Eigen::MatrixXcd e(pg.p_size, 2 * n - 1);
  for (int d = -(n - 1); d < n; ++d) {
    const double w = image_weight(d, n) * pg.p_step;
    for (int l = 0; l < pg.p_size; ++l) {
      e(l, d + n - 1) = w * std::polar(1.0, 2.0 * pi * pg.p_at(l) * d * pg.q.step / h);
    }
  }
  return e;
}

// S_n(d) = sum_l p_l^n exp(j 2 pi p_l d dx / h) dp
Eigen::VectorXcd momentum_moment(const PhaseGrid& pg, const Eigen::MatrixXcd& waves, int power) {
  Eigen::VectorXd pw(pg.p_size);
  for (int l = 0; l < pg.p_size; ++l) pw[l] = std::pow(pg.p_at(l), power);
  return waves.transpose() * pw.cast<cd>();
}

// E[(x + xi)^m], xi ~ N(0, var)
double gaussian_moment(double x, int m, double var) {
  double s = 0.0;
  double binom = 1.0;
  double odd_fact = 1.0;  // (k-1)!! for even k
  for (int k = 0; k <= m; k += 2) {
    if (k > 0) {
      binom *= static_cast<double>(m - k + 2) * (m - k + 1) / (static_cast<double>(k - 1) * k);
      odd_fact *= (k - 1);
    }
    s += binom * std::pow(x, m - k) * odd_fact * std::pow(var, k / 2);
  }
  return s;
}

void check_symbol_1d(const ObservableSymbol& f) {
  if (f.kind() == ObservableSymbol::Kind::coulomb) {
    throw UnsupportedSymbolError(
        "the Coulomb potential is three-dimensional; use position_observable_coulomb");
  }
}

}  // namespace

OperatorKernel kernel_by_quadrature(const ObservableSymbol& f, const ModelParams& params,
                                    const PositionGrid& grid) {
  params.validate_1d();
  grid.validate();
  check_symbol_1d(f);
  require_position_coverage(params, grid);
  const int n = grid.size;
  const double h = params.h;
  const double s = params.ratio(0);
  const double sigma = std::sqrt(params.position_variance(0));

  // quadrature grid in (q, p)
  PhaseGrid pg;
  PositionGrid qg;
  Eigen::MatrixXd fv;
  if (f.kind() == ObservableSymbol::Kind::sampled) {
    pg = f.samples().grid;
    const PhaseGrid expect = PhaseGrid::conjugate(grid, h, 1);
    if (!pg.same_as(expect)) {
      throw GridMismatchError("sampled symbol must live on the phase grid conjugate to the kernel grid");
    }
    qg = grid;
    fv = f.samples().values;
  } else {
    pg = PhaseGrid::conjugate(grid, h, 1);
    const int pad = static_cast<int>(std::ceil(8.0 * sigma / grid.step));
    qg = grid;
    qg.start = grid.start - pad * grid.step;
    qg.size = n + 2 * pad;
    fv.resize(qg.size, pg.p_size);
    for (int l = 0; l < pg.p_size; ++l) {
      for (int a = 0; a < qg.size; ++a) fv(a, l) = f(qg.at(a), pg.p_at(l));
    }
    if (!fv.allFinite()) throw DivergenceError("observable '" + f.name() + "' is not finite on the grid");
    // tail test: |f| times the squared window at the outer rows against the interior
    const double lo = grid.at(0), hi = grid.at(n - 1);
    double edge = 0.0, peak = 0.0;
    for (int a = 0; a < qg.size; ++a) {
      const double q = qg.at(a);
      const double dist = q < lo ? lo - q : (q > hi ? q - hi : 0.0);
      const double w = fv.row(a).cwiseAbs().maxCoeff() * std::exp(-2.0 * pi * s * dist * dist / h);
      peak = std::max(peak, w);
      if (a == 0 || a == qg.size - 1) edge = std::max(edge, w);
    }
    if (edge > 1e-8 * peak) {
      throw DivergenceError("observable '" + f.name() +
                            "' grows faster than the Gaussian weights decay");
    }
  }

  // F(a, d) = sum_l f(q_a, p_l) exp(j 2 pi p_l d dx / h) dp
  const Eigen::MatrixXcd fl = fv.cast<cd>() * lag_waves(pg, h);
  const Eigen::MatrixXd g = internal::gaussian_window(params, qg, grid);
  const double pref = kernel_prefactor(params) * qg.step * grid.step;

  OperatorKernel k;
  k.grid = grid;
  k.matrix.resize(n, n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int col = i - j + n - 1;
      cd acc(0.0, 0.0);
      for (int a = 0; a < qg.size; ++a) acc += g(a, i) * g(a, j) * fl(a, col);
      k.matrix(i, j) = pref * acc;
    }
  }
  return k;
}

namespace {

OperatorKernel polynomial_kernel(const ObservableSymbol& f, const ModelParams& params,
                                 const PositionGrid& grid, SymbolOrder order) {
  const int n = grid.size;
  const double h = params.h;
  const double s = params.ratio(0);
  const double var = params.position_variance(0);
  const PhaseGrid pg = PhaseGrid::conjugate(grid, h, 1);
  const Eigen::MatrixXcd waves = lag_waves(pg, h);

  std::map<int, Eigen::VectorXcd> moments;
  for (const auto& t : f.terms()) {
    if (!moments.count(t.p_power)) moments[t.p_power] = momentum_moment(pg, waves, t.p_power);
  }

  OperatorKernel k;
  k.grid = grid;
  k.matrix.resize(n, n);
  const double pref = grid.step / h;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double xbar = 0.5 * (grid.at(i) + grid.at(j));
      const double delta = grid.at(i) - grid.at(j);
      const int col = i - j + n - 1;
      cd acc(0.0, 0.0);
      for (const auto& t : f.terms()) {
        const double qm = order == SymbolOrder::exact ? gaussian_moment(xbar, t.q_power, var)
                                                      : std::pow(xbar, t.q_power);
        acc += t.coeff * qm * moments.at(t.p_power)[col];
      }
      const double gu = order == SymbolOrder::exact ? std::exp(-pi * s * delta * delta / (2.0 * h))
                                                    : 1.0;
      k.matrix(i, j) = pref * gu * acc;
    }
  }
  return k;
}

// Periodic smoothing of each q-column by exp(-var v^2 / 2) in the DFT domain,
// then 2x band-limited interpolation so that fine(i + j) = f(x-bar_ij).
Eigen::MatrixXd midpoint_samples(const Eigen::MatrixXd& f, const PositionGrid& grid, double var,
                                 bool smooth) {
  const int n = static_cast<int>(f.rows());
  Eigen::FFT<double> fft;
  Eigen::MatrixXd out(2 * n, f.cols());
  std::vector<cd> buf(n), spec;
  for (int l = 0; l < f.cols(); ++l) {
    for (int i = 0; i < n; ++i) buf[i] = f(i, l);
    if (smooth) {
      fft.fwd(spec, buf);
      for (int k = 0; k < n; ++k) {
        const double v = 2.0 * pi * fourier::signed_index(k, n) / (n * grid.step);
        spec[k] *= std::exp(-0.5 * var * v * v);
      }
      fft.inv(buf, spec);
    }
    Eigen::VectorXcd col(n);
    for (int i = 0; i < n; ++i) col[i] = buf[i];
    out.col(l) = fourier::upsample(col, 2).real();
  }
  return out;
}

OperatorKernel sampled_kernel(const ObservableSymbol& f, const ModelParams& params,
                              const PositionGrid& grid, SymbolOrder order) {
  const int n = grid.size;
  const double h = params.h;
  const double s = params.ratio(0);
  const PhaseGrid& pg = f.samples().grid;
  if (!pg.same_as(PhaseGrid::conjugate(grid, h, 1))) {
    throw GridMismatchError("sampled symbol must live on the phase grid conjugate to the kernel grid");
  }
  const bool exact = order == SymbolOrder::exact;
  const Eigen::MatrixXd mid =
      midpoint_samples(f.samples().values, grid, params.position_variance(0), exact);
  const Eigen::MatrixXcd waves = lag_waves(pg, h);

  OperatorKernel k;
  k.grid = grid;
  k.matrix.resize(n, n);
  const double pref = grid.step / h;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double delta = grid.at(i) - grid.at(j);
      const int col = i - j + n - 1;
      cd acc = (mid.row(i + j).cast<cd>() * waves.col(col))(0, 0);
      const double gu = exact ? std::exp(-pi * s * delta * delta / (2.0 * h)) : 1.0;
      k.matrix(i, j) = pref * gu * acc;
    }
  }
  return k;
}

}  // namespace

OperatorKernel kernel_by_symbol(const ObservableSymbol& f, const ModelParams& params,
                                const PositionGrid& grid, SymbolOrder order) {
  params.validate_1d();
  grid.validate();
  check_symbol_1d(f);
  switch (f.kind()) {
    case ObservableSymbol::Kind::polynomial: {
      OperatorKernel k = polynomial_kernel(f, params, grid, order);
      if (order == SymbolOrder::exact) {
        try {
          k.form = closed_form(f, params);
        } catch (const UnsupportedSymbolError&) {
        }
      }
      return k;
    }
    case ObservableSymbol::Kind::sampled:
      return sampled_kernel(f, params, grid, order);
    default:
      throw UnsupportedSymbolError("symbol '" + f.name() +
                                   "' has no closed-form or sampled Fourier transform");
  }
}

DifferentialForm closed_form(const ObservableSymbol& f, const ModelParams& params) {
  params.validate_1d();
  if (f.kind() != ObservableSymbol::Kind::polynomial) {
    throw UnsupportedSymbolError("closed forms exist only for polynomial symbols");
  }
  const double h = params.h;
  DifferentialForm d;
  for (const auto& t : f.terms()) {
    if (t.q_power > 0 && t.p_power > 0) {
      throw UnsupportedSymbolError("no closed form for mixed q p terms");
    }
    if (t.q_power + t.p_power > 2) throw UnsupportedSymbolError("no closed form above degree 2");
    if (t.q_power == 2) {
      d.x2 += t.coeff;
      d.smoothing_shift += t.coeff * params.position_variance(0);
    } else if (t.q_power == 1) {
      d.x1 += t.coeff;
    } else if (t.p_power == 1) {
      d.first += t.coeff * cd(0.0, -h / (2.0 * pi));
    } else if (t.p_power == 2) {
      d.second += -t.coeff * h * h / (4.0 * pi * pi);
      d.smoothing_shift += t.coeff * params.momentum_variance(0);
    } else {
      d.constant += t.coeff;
    }
  }
  d.constant += d.smoothing_shift;
  return d;
}

Eigen::MatrixXcd DifferentialForm::matrix(const PositionGrid& grid, bool remove_shift) const {
  const int n = grid.size;
  const double dx = grid.step;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  const double c = remove_shift ? constant - smoothing_shift : constant;
  for (int i = 0; i < n; ++i) {
    const double x = grid.at(i);
    m(i, i) += x2 * x * x + x1 * x + c - 2.0 * second / (dx * dx);
    if (i > 0) m(i, i - 1) += second / (dx * dx) - first / (2.0 * dx);
    if (i + 1 < n) m(i, i + 1) += second / (dx * dx) + first / (2.0 * dx);
  }
  return m;
}

// ---------------------------------------------------------------- position observables

Eigen::VectorXd position_observable(const ObservableSymbol& v, const ModelParams& params,
                                    const PositionGrid& grid) {
  params.validate_1d();
  grid.validate();
  check_symbol_1d(v);
  if (v.depends_on_momentum()) {
    throw UnsupportedSymbolError("'" + v.name() + "' depends on momentum; use an operator kernel");
  }
  const double var = params.position_variance(0);
  Eigen::VectorXd out(grid.size);
  if (v.kind() == ObservableSymbol::Kind::polynomial) {
    for (int i = 0; i < grid.size; ++i) {
      double s = 0.0;
      for (const auto& t : v.terms()) s += t.coeff * gaussian_moment(grid.at(i), t.q_power, var);
      out[i] = s;
    }
    return out;
  }
  // trapezoid in xi over [-40 sigma, 40 sigma]
  const double sigma = std::sqrt(var);
  const int half = 320;
  const double dxi = sigma / 8.0;
  for (int i = 0; i < grid.size; ++i) {
    const double x = grid.at(i);
    double s = 0.0, peak = 0.0, tail = 0.0;
    for (int m = -half; m <= half; ++m) {
      const double xi = m * dxi;
      const double w = std::exp(-0.5 * xi * xi / var) * dxi / std::sqrt(2.0 * pi * var);
      const double term = v(x + xi, 0.0) * w;
      if (!std::isfinite(term)) {
        throw DivergenceError("'" + v.name() + "' is not integrable against the smoothing Gaussian");
      }
      s += term;
      peak = std::max(peak, std::abs(term));
      if (std::abs(m) == half) tail = std::max(tail, std::abs(term));
    }
    if (tail > 1e-12 * std::max(peak, 1e-300)) {
      throw DivergenceError("'" + v.name() + "' grows faster than the smoothing Gaussian decays");
    }
    out[i] = s;
  }
  return out;
}

double smoothed_coulomb(double r, double charge_sq, double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("smoothing width must be positive");
  r = std::abs(r);
  const double z = r / (sigma * std::sqrt(2.0));
  if (z < 1e-6) return -charge_sq * std::sqrt(2.0 / pi) / sigma * (1.0 - z * z / 3.0);
  return -charge_sq / r * std::erf(z);
}

Eigen::VectorXd position_observable_coulomb(const ObservableSymbol& v, const ModelParams& params,
                                            const Eigen::VectorXd& radii) {
  params.validate();
  if (params.dim() != 3) throw ParameterError("the Coulomb potential needs dimension 3");
  if (!params.is_isotropic()) {
    throw ParameterError("Coulomb smoothing requires a_1/b_1 = a_2/b_2 = a_3/b_3");
  }
  const double sigma = std::sqrt(params.position_variance(0));
  Eigen::VectorXd out(radii.size());
  for (int i = 0; i < radii.size(); ++i) out[i] = smoothed_coulomb(radii[i], v.charge_sq(), sigma);
  return out;
}

// ---------------------------------------------------------------- application

WaveFunction apply(const OperatorKernel& kernel, const WaveFunction& psi) {
  require_same_grid(kernel.grid, psi.grid, "apply");
  return WaveFunction(psi.grid, kernel.matrix * psi.values);
}

std::complex<double> expectation(const OperatorKernel& kernel, const WaveFunction& psi) {
  const WaveFunction a = apply(kernel, psi);
  return psi.values.dot(a.values) * psi.grid.step;  // dot conjugates the left operand
}

double phase_average(const ObservableSymbol& f, const PhaseField& rho) {
  const PhaseGrid& g = rho.grid;
  double s = 0.0;
  if (f.kind() == ObservableSymbol::Kind::sampled) {
    if (!f.samples().grid.same_as(g)) throw GridMismatchError("symbol and density grids differ");
    s = (f.samples().values.array() * rho.values.array()).sum();
  } else {
    for (int l = 0; l < g.p_size; ++l) {
      for (int i = 0; i < g.q.size; ++i) s += f(g.q.at(i), g.p_at(l)) * rho.values(i, l);
    }
  }
  return s * g.cell();
}

}  // namespace diffavg
