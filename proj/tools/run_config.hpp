#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "diffavg/params.hpp"
#include "diffavg/wavefunction.hpp"

namespace diffavg::cli {

/// Everything a run depends on. Serialises to JSON; flags override a loaded file.
struct RunConfig {
  std::string command;

  double h = 1.0;
  double a = 1.0;
  double b = 1.0;

  int n_grid = 256;
  double half_width = 8.0;
  int oversample = 0;  // 0: the subcommand's default

  std::string state = "gaussian";
  std::uint64_t seed = 20240611;
  std::string out;

  // operator / spectrum
  std::string symbol = "harmonic:1,1";
  std::string route = "quadrature";
  int count = 10;
  bool remove_shift = false;

  // density
  bool check_normalization = false;

  // diffuse
  std::string mode = "averaged";
  std::string integrator = "spectral";
  double tau_end = 0.5;
  int samples = 11;
  double dtau = 0.0;
  int hermite_count = 32;
  double envelope_width = 0.5;
  bool fit_rate = false;

  // lamb
  double de2_mhz = 1058.0;
  int level = 2;
  std::string constants = "reproduction";

  ModelParams params() const;
  PositionGrid grid() const;
  int effective_oversample() const;
  /// Named analytic state, seeded random packets or a CSV file.
  WaveFunction make_state() const;
  PhysicalConstants physical_constants() const;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

RunConfig load_config(const std::string& path);

}  // namespace diffavg::cli
