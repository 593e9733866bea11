#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <unistd.h>

#include "diffavg/checks.hpp"
#include "diffavg/density.hpp"
#include "diffavg/diffusion.hpp"
#include "diffavg/error.hpp"
#include "diffavg/lamb.hpp"
#include "diffavg/operators.hpp"
#include "diffavg/spectrum.hpp"
#include "diffavg/transform.hpp"

namespace diffavg::cli {

namespace {

using cd = std::complex<double>;
using nlohmann::json;

// CSV cells carry 17 significant digits.
class Table {
 public:
  explicit Table(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      os_ << (first ? "" : ",") << h;
      first = false;
    }
    os_ << '\n';
  }
  Table& row(std::initializer_list<double> cells) {
    bool first = true;
    for (double v : cells) {
      std::snprintf(buf_, sizeof buf_, "%.17g", v);
      os_ << (first ? "" : ",") << buf_;
      first = false;
    }
    os_ << '\n';
    return *this;
  }
  Table& raw(const std::string& line) {
    os_ << line << '\n';
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
  char buf_[40];
};

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

PhaseGrid phase_grid(const RunConfig& cfg, const PositionGrid& g) {
  return PhaseGrid::conjugate(g, cfg.h, cfg.effective_oversample());
}

Outcome transform(const RunConfig& cfg) {
  const ModelParams params = cfg.params();
  const WaveFunction psi = cfg.make_state();
  const PhaseGrid pg = phase_grid(cfg, psi.grid);
  const AveragedAmplitude phi = synthesize(psi, params, pg);
  const WaveFunction back = extract(phi, params, psi.grid);

  Outcome o;
  Table t{"q", "p", "re_phi_minus1", "im_phi_minus1"};
  const Eigen::MatrixXcd m = phi.mode(-1);
  for (int i = 0; i < pg.q.size; ++i) {
    for (int l = 0; l < pg.p_size; ++l) t.row({pg.q.at(i), pg.p_at(l), m(i, l).real(), m(i, l).imag()});
  }
  o.csv = t.str();
  o.summary = {{"state_norm", psi.norm()},
               {"amplitude_norm", phi.norm()},
               {"round_trip_error", relative_l2_error(back, psi)},
               {"reality_defect", phi.reality_defect()},
               {"note", "CSV holds the k = -1 fiber mode; k = +1 is its complex conjugate"}};
  return o;
}

Outcome density(const RunConfig& cfg) {
  const ModelParams params = cfg.params();
  const WaveFunction psi = cfg.make_state();
  const PhaseGrid pg = phase_grid(cfg, psi.grid);
  const PhaseSpaceDensity rho = density_from_wavefunction(psi, params, pg);
  const WignerDensity w = wigner(psi, params, pg);
  const PhaseField smoothed = smooth_wigner(w, params);

  Outcome o;
  Table t{"q", "p", "rho", "wigner"};
  for (int i = 0; i < pg.q.size; ++i) {
    for (int l = 0; l < pg.p_size; ++l) t.row({pg.q.at(i), pg.p_at(l), rho.values(i, l), w.values(i, l)});
  }
  o.csv = t.str();
  const double norm2 = psi.norm_squared();
  const double smoothing = (smoothed.values - rho.values).norm() / rho.values.norm();
  o.summary = {{"state_norm_squared", norm2},
               {"rho_integral", rho.integral()},
               {"rho_min", rho.min()},
               {"wigner_integral", w.integral()},
               {"wigner_min", w.min()},
               {"smoothing_identity_error", smoothing}};
  if (cfg.check_normalization) {
    const double err = std::abs(rho.integral() - norm2) / norm2;
    o.ok = err < 1e-6;
    o.summary["normalization_error"] = err;
    o.summary["normalization_tolerance"] = 1e-6;
    o.summary["normalization_ok"] = o.ok;
  }
  return o;
}

Outcome operator_kernel(const RunConfig& cfg) {
  const ModelParams params = cfg.params();
  const WaveFunction psi = cfg.make_state();
  const ObservableSymbol f = ObservableSymbol::parse(cfg.symbol);

  Outcome o;
  json summary = {{"symbol", cfg.symbol}, {"route", cfg.route}};
  if (f.kind() == ObservableSymbol::Kind::coulomb) {
    throw UnsupportedSymbolError("the Coulomb symbol is three-dimensional; use the lamb subcommand");
  }
  try {
    const DifferentialForm d = closed_form(f, params);
    summary["closed_form"] = {{"x2", d.x2},
                              {"x1", d.x1},
                              {"first_re", d.first.real()},
                              {"first_im", d.first.imag()},
                              {"second", d.second},
                              {"constant", d.constant},
                              {"smoothing_shift", d.smoothing_shift}};
  } catch (const UnsupportedSymbolError&) {
    summary["closed_form"] = nullptr;
  }

  OperatorKernel k;
  if (cfg.route == "quadrature") {
    k = kernel_by_quadrature(f, params, psi.grid);
  } else if (cfg.route == "symbol") {
    k = kernel_by_symbol(f, params, psi.grid, SymbolOrder::exact);
  } else if (cfg.route == "order0") {
    k = kernel_by_symbol(f, params, psi.grid, SymbolOrder::zero);
  } else {
    throw ParameterError("route must be quadrature, symbol or order0");
  }
  const cd e = expectation(k, psi);
  summary["expectation_re"] = e.real();
  summary["expectation_im"] = e.imag();
  summary["hermiticity_defect"] = k.hermiticity_defect();
  summary["note"] = "CSV entries include the quadrature weight dx: (A psi)_i = sum_j A_ij psi_j";

  Table t{"x", "x_prime", "re", "im"};
  for (int i = 0; i < k.grid.size; ++i) {
    for (int j = 0; j < k.grid.size; ++j) {
      t.row({k.grid.at(i), k.grid.at(j), k.matrix(i, j).real(), k.matrix(i, j).imag()});
    }
  }
  o.csv = t.str();
  o.summary = std::move(summary);
  return o;
}

Outcome spectrum_cmd(const RunConfig& cfg) {
  const ModelParams params = cfg.params();
  const PositionGrid grid = cfg.grid();
  Outcome o;
  SpectralResult r;
  json summary = {{"symbol", cfg.symbol}, {"count", cfg.count}};
  if (cfg.symbol.rfind("harmonic:", 0) == 0) {
    const ObservableSymbol f = ObservableSymbol::parse(cfg.symbol);
    const auto& terms = f.terms();
    double mass = 1.0, omega = 1.0;
    for (const auto& term : terms) {
      if (term.p_power == 2) mass = 0.5 / term.coeff;
    }
    for (const auto& term : terms) {
      if (term.q_power == 2) omega = std::sqrt(2.0 * term.coeff / mass);
    }
    r = oscillator_spectrum(mass, omega, params, grid, cfg.count, cfg.remove_shift);
    const double shift = oscillator_shift(mass, omega, params);
    const double hbar = cfg.h / (2.0 * pi);
    summary["smoothing_shift"] = shift;
    Table t{"n", "eigenvalue", "ladder"};
    double worst = 0.0;
    for (int n = 0; n < cfg.count; ++n) {
      const double ladder = hbar * omega * (n + 0.5) + (cfg.remove_shift ? 0.0 : shift);
      worst = std::max(worst, std::abs(r.eigenvalues[n] - ladder) / ladder);
      t.row({static_cast<double>(n), r.eigenvalues[n], ladder});
    }
    summary["max_relative_deviation"] = worst;
    o.csv = t.str();
  } else {
    const ObservableSymbol f = ObservableSymbol::parse(cfg.symbol);
    const OperatorKernel k = cfg.route == "quadrature" ? kernel_by_quadrature(f, params, grid)
                                                       : kernel_by_symbol(f, params, grid);
    r = spectrum(k, cfg.count);
    Table t{"n", "eigenvalue"};
    for (int n = 0; n < cfg.count; ++n) t.row({static_cast<double>(n), r.eigenvalues[n]});
    o.csv = t.str();
  }
  summary["eigenvalues"] = std::vector<double>(r.eigenvalues.data(), r.eigenvalues.data() + r.eigenvalues.size());
  o.summary = std::move(summary);
  return o;
}

// "averaged", "k1-ground", "k2-n1"
ExtendedAmplitude initial_amplitude(const RunConfig& cfg, const ModelParams& params, const PhaseGrid& pg) {
  if (cfg.mode == "averaged") {
    const WaveFunction psi = cfg.make_state();
    require_same_grid(psi.grid, pg.q, "diffuse");
    return synthesize(psi, params, pg);
  }
  static const std::regex pattern(R"(k(-?\d+)-(ground|n(\d+)))");
  std::smatch m;
  if (!std::regex_match(cfg.mode, m, pattern)) {
    throw ParameterError("mode must be averaged, kK-ground or kK-nN (got '" + cfg.mode + "')");
  }
  const int k = std::stoi(m[1].str());
  const int n = m[3].matched ? std::stoi(m[3].str()) : 0;
  const double w = cfg.envelope_width;
  if (!(w > 0.0)) throw ParameterError("envelope width must be positive");
  return ladder_state(pg, params, k, n, [w](double x) { return cd(std::exp(-x * x / (2.0 * w * w)), 0.0); });
}

Outcome diffuse(const RunConfig& cfg) {
  const ModelParams params = cfg.params();
  const PhaseGrid pg = phase_grid(cfg, cfg.grid());
  DiffusionSpec spec;
  spec.params = params;
  spec.tau_end = cfg.tau_end;
  spec.dtau = cfg.dtau;
  spec.hermite_count = cfg.hermite_count;
  if (cfg.integrator == "spectral") {
    spec.integrator = Integrator::spectral_hermite;
  } else if (cfg.integrator == "fd") {
    spec.integrator = Integrator::finite_difference;
  } else {
    throw ParameterError("integrator must be spectral or fd");
  }
  if (cfg.samples < 2) throw ParameterError("need at least 2 output samples");
  for (int i = 0; i < cfg.samples; ++i) spec.times.push_back(cfg.tau_end * i / (cfg.samples - 1));

  const ExtendedAmplitude phi0 = initial_amplitude(cfg, params, pg);
  const Trajectory tr = evolve(phi0, spec);

  Outcome o;
  std::vector<int> ks;
  for (const auto& [k, f] : phi0.modes()) ks.push_back(k);
  std::string header = "tau";
  for (int k : ks) header += ",norm_k" + std::to_string(k);
  std::string text = header + "\n";
  for (std::size_t s = 0; s < tr.times.size(); ++s) {
    std::string line = g17(tr.times[s]);
    for (int k : ks) line += "," + g17(tr.states[s].mode_norm(k));
    text += line + "\n";
  }
  o.csv = text;

  json summary = {{"mode", cfg.mode}, {"integrator", cfg.integrator}};
  if (spec.integrator == Integrator::spectral_hermite) summary["truncation_error"] = tr.truncation_error;
  if (cfg.fit_rate) {
    json rates = json::object();
    for (const auto& [k, fit] : measure_decay(tr)) {
      rates[std::to_string(k)] = {{"rate", fit.rate}, {"residual", fit.residual}, {"samples", fit.samples}};
    }
    summary["rates"] = rates;
    if (rates.contains("1")) summary["rate"] = rates["1"]["rate"];
    summary["ground_rate_prediction"] = -ladder_eigenvalue(params, 1, 0);
  }
  o.summary = std::move(summary);
  return o;
}

Outcome lamb_cmd(const RunConfig& cfg) {
  const PhysicalConstants c = cfg.physical_constants();
  const lamb::Estimate e = lamb::inverse(lamb::mhz_to_erg(cfg.de2_mhz, c), c, cfg.level);
  const double compton = c.hbar / (c.m * c.c);

  Outcome o;
  o.summary = {{"a_over_b_s_per_g", e.a_over_b},
               {"delta_q_cm", e.delta_q},
               {"delta_e_mhz", e.delta_e_mhz},
               {"delta_e_erg", e.delta_e_erg},
               {"level", e.n},
               {"constants", cfg.constants},
               {"compton_wavelength_cm", compton},
               {"bohr_radius_cm", c.bohr_radius()}};
  if (cfg.level <= 2) {
    const ObservableSymbol coulomb = ObservableSymbol::coulomb(c.e * c.e);
    const auto s = lamb::perturbative_shift(lamb::HydrogenState::make(cfg.level, 0, c), coulomb,
                                            lamb::model_params(e.a_over_b, c));
    o.summary["perturbative_s_shift_mhz"] = lamb::erg_to_mhz(s.quadrature, c);
    o.summary["delta_function_s_shift_mhz"] = lamb::erg_to_mhz(s.closed_form, c);
    if (!s.regime_ok) o.summary["warning"] = s.warning;
  }
  Table t{"quantity", "value", "unit"};
  t.raw("a/b," + g17(e.a_over_b) + ",s/g");
  t.raw("delta_q," + g17(e.delta_q) + ",cm");
  t.raw("delta_E," + g17(e.delta_e_mhz) + ",MHz");
  t.raw("delta_E," + g17(e.delta_e_erg) + ",erg");
  o.csv = t.str();

  std::fprintf(stderr, "  %-10s %-14s %s\n", "quantity", "value", "unit");
  std::fprintf(stderr, "  %-10s %-14.4e %s\n", "a/b", e.a_over_b, "s/g");
  std::fprintf(stderr, "  %-10s %-14.4e %s\n", "dq", e.delta_q, "cm");
  std::fprintf(stderr, "  %-10s %-14.4f %s\n", "dE", e.delta_e_mhz, "MHz");
  std::fprintf(stderr, "  %-10s %-14.4e %s\n", "dE", e.delta_e_erg, "erg");
  return o;
}

Outcome verify(const RunConfig& cfg) {
  Outcome o;
  Table t{"id", "passed", "measured", "threshold", "seconds"};
  json rows = json::array();
  for (const auto& r : checks::run_all(cfg.seed)) {
    std::printf("%s\n", checks::format(r).c_str());
    std::fflush(stdout);
    t.row({static_cast<double>(r.id), r.passed ? 1.0 : 0.0, r.measured, r.threshold, r.seconds});
    rows.push_back({{"id", r.id},
                    {"name", r.name},
                    {"passed", r.passed},
                    {"measured", r.measured},
                    {"threshold", r.threshold},
                    {"detail", r.detail}});
    o.ok = o.ok && r.passed;
  }
  o.csv = t.str();
  o.summary = {{"checks", rows}, {"all_passed", o.ok}};
  return o;
}

}  // namespace

void write_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp);
    out << text;
    out.flush();
    if (!out) throw Error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

Outcome run_command(const RunConfig& cfg) {
  if (cfg.command == "transform") return transform(cfg);
  if (cfg.command == "density") return density(cfg);
  if (cfg.command == "operator") return operator_kernel(cfg);
  if (cfg.command == "spectrum") return spectrum_cmd(cfg);
  if (cfg.command == "diffuse") return diffuse(cfg);
  if (cfg.command == "lamb") return lamb_cmd(cfg);
  if (cfg.command == "verify") return verify(cfg);
  throw ParameterError("unknown subcommand '" + cfg.command + "'");
}

}  // namespace diffavg::cli
