#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "commands.hpp"
#include "diffavg/error.hpp"

using diffavg::cli::RunConfig;

namespace {

void add_common(CLI::App* sub, RunConfig& cfg, bool& dump) {
  sub->add_option("--h", cfg.h, "Planck constant h");
  sub->add_option("--a", cfg.a, "position diffusion intensity a");
  sub->add_option("--b", cfg.b, "momentum diffusion intensity b");
  sub->add_option("--n-grid", cfg.n_grid, "position samples");
  sub->add_option("--half-width", cfg.half_width, "grid covers [-w, w)");
  sub->add_option("--oversample", cfg.oversample, "momentum samples per position sample (0 = default)");
  sub->add_option("--state", cfg.state, "gaussian | hermite-N | coherent:q0,p0 | random:I | file:path");
  sub->add_option("--seed", cfg.seed, "seed for random states and corpora");
  sub->add_option("--out", cfg.out, "write <out>.csv and <out>.json");
  sub->add_option("--config", "JSON run config (flags override it)");
  sub->add_flag("--dump-config", dump, "print the effective config as JSON and exit");
}

// --config is read before the real parse so that explicit flags win.
std::string find_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) return argv[i + 1];
    if (std::strncmp(argv[i], "--config=", 9) == 0) return argv[i] + 9;
  }
  return {};
}

void set_threads() {
#ifdef _OPENMP
  if (const char* env = std::getenv("DIFFAVG_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  try {
    const std::string path = find_config(argc, argv);
    if (!path.empty()) cfg = diffavg::cli::load_config(path);
  } catch (const diffavg::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  CLI::App app{"Diffusion-averaged quantum model: transforms, densities, operators, diffusion, Lamb estimate"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(0, 1);
  bool dump = false;
  app.add_option("--config", "JSON run config");

  auto* transform = app.add_subcommand("transform", "averaged amplitude of a wave function");
  auto* density = app.add_subcommand("density", "phase-space density and Wigner function");
  auto* op = app.add_subcommand("operator", "kernel of the operator A_f for a symbol f");
  auto* spectrum = app.add_subcommand("spectrum", "lowest eigenvalues of A_f");
  auto* diffuse = app.add_subcommand("diffuse", "diffusion of an extended amplitude");
  auto* lamb = app.add_subcommand("lamb", "a/b from the 2s level increment");
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  for (auto* sub : {transform, density, op, spectrum, diffuse, lamb, verify}) add_common(sub, cfg, dump);

  density->add_flag("--check-normalization", cfg.check_normalization,
                    "fail unless the density integrates to ||psi||^2 within 1e-6");
  for (auto* sub : {op, spectrum}) {
    sub->add_option("--symbol", cfg.symbol, "e.g. 'q^2+p^2', '0.5*p^2-3*q*p', harmonic:m,w");
    sub->add_option("--route", cfg.route, "quadrature | symbol | order0");
  }
  spectrum->add_option("--count", cfg.count, "number of eigenvalues");
  spectrum->add_flag("--remove-shift", cfg.remove_shift, "subtract the smoothing offset");
  diffuse->add_option("--mode", cfg.mode, "averaged | kK-ground | kK-nN");
  diffuse->add_option("--integrator", cfg.integrator, "spectral | fd");
  diffuse->add_option("--tau-end", cfg.tau_end, "final time");
  diffuse->add_option("--samples", cfg.samples, "output times on [0, tau_end]");
  diffuse->add_option("--dtau", cfg.dtau, "finite-difference step (0 = half the stability bound)");
  diffuse->add_option("--hermite-count", cfg.hermite_count, "Hermite functions per mode");
  diffuse->add_option("--envelope-width", cfg.envelope_width, "width of the ladder-state envelope");
  diffuse->add_flag("--fit-rate", cfg.fit_rate, "fit exponential decay rates per fiber mode");
  lamb->add_option("--dE2-mhz", cfg.de2_mhz, "measured 2s increment in MHz");
  lamb->add_option("--level", cfg.level, "principal quantum number of the increment");
  lamb->add_option("--constants", cfg.constants, "reproduction | modern");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  if (cfg.command.empty()) {
    std::fprintf(stderr, "error: no subcommand given (and none in the config)\n%s", app.help().c_str());
    return 2;
  }

  const nlohmann::json effective = cfg;
  if (dump) {
    std::printf("%s\n", effective.dump(2).c_str());
    return 0;
  }
  std::fprintf(stderr, "effective config: %s\n", effective.dump().c_str());
  set_threads();

  try {
    const diffavg::cli::Outcome o = diffavg::cli::run_command(cfg);
    nlohmann::json summary = o.summary;
    summary["config"] = effective;
    summary["ok"] = o.ok;
    if (!cfg.out.empty()) {
      diffavg::cli::write_atomic(cfg.out + ".csv", o.csv);
      diffavg::cli::write_atomic(cfg.out + ".json", summary.dump(2) + "\n");
    }
    if (cfg.command != "verify") std::printf("%s\n", summary.dump(2).c_str());
    return o.ok ? 0 : 1;
  } catch (const diffavg::ParameterError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
