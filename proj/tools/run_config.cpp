#include "run_config.hpp"

#include <fstream>

#include "diffavg/error.hpp"
#include "diffavg/states.hpp"

namespace diffavg::cli {

namespace {

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParameterError("bad number '" + s + "' in " + what);
}

}  // namespace

ModelParams RunConfig::params() const {
  ModelParams p = ModelParams::isotropic(h, a, b, 1);
  p.validate();
  return p;
}

PositionGrid RunConfig::grid() const {
  if (state.rfind("file:", 0) == 0) return make_state().grid;
  return PositionGrid::centered(n_grid, half_width);
}

int RunConfig::effective_oversample() const {
  if (oversample > 0) return oversample;
  if (command == "density") return 2;
  if (command == "diffuse" && integrator == "fd") return 2;
  return 1;
}

WaveFunction RunConfig::make_state() const {
  if (state.rfind("file:", 0) == 0) return states::from_csv(state.substr(5));
  const PositionGrid g = PositionGrid::centered(n_grid, half_width);
  if (state == "gaussian") return states::gaussian(g, params(), 0.0, 0.0);
  if (state.rfind("hermite-", 0) == 0) {
    const double n = parse_number(state.substr(8), "hermite-N");
    if (n < 0 || n != std::floor(n)) throw ParameterError("hermite level must be a whole number");
    return states::oscillator(g, h, static_cast<int>(n));
  }
  if (state.rfind("coherent:", 0) == 0) {
    const std::string rest = state.substr(9);
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw ParameterError("expected coherent:q0,p0");
    return states::gaussian(g, params(), parse_number(rest.substr(0, comma), "coherent q0"),
                            parse_number(rest.substr(comma + 1), "coherent p0"));
  }
  if (state.rfind("random:", 0) == 0) {
    const double idx = parse_number(state.substr(7), "random:index");
    return states::random_packets(seed, static_cast<int>(idx), h).sample(g).normalized();
  }
  throw ParameterError("unknown state '" + state +
                       "' (gaussian | hermite-N | coherent:q0,p0 | random:I | file:path)");
}

PhysicalConstants RunConfig::physical_constants() const {
  if (constants == "reproduction") return PhysicalConstants::reproduction();
  if (constants == "modern") return PhysicalConstants::modern();
  throw ParameterError("constants must be 'reproduction' or 'modern'");
}

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{{"command", c.command},
                     {"h", c.h},
                     {"a", c.a},
                     {"b", c.b},
                     {"n_grid", c.n_grid},
                     {"half_width", c.half_width},
                     {"oversample", c.oversample},
                     {"state", c.state},
                     {"seed", c.seed},
                     {"out", c.out},
                     {"symbol", c.symbol},
                     {"route", c.route},
                     {"count", c.count},
                     {"remove_shift", c.remove_shift},
                     {"check_normalization", c.check_normalization},
                     {"mode", c.mode},
                     {"integrator", c.integrator},
                     {"tau_end", c.tau_end},
                     {"samples", c.samples},
                     {"dtau", c.dtau},
                     {"hermite_count", c.hermite_count},
                     {"envelope_width", c.envelope_width},
                     {"fit_rate", c.fit_rate},
                     {"de2_mhz", c.de2_mhz},
                     {"level", c.level},
                     {"constants", c.constants}};
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  const RunConfig d = c;
  c.command = j.value("command", d.command);
  c.h = j.value("h", d.h);
  c.a = j.value("a", d.a);
  c.b = j.value("b", d.b);
  c.n_grid = j.value("n_grid", d.n_grid);
  c.half_width = j.value("half_width", d.half_width);
  c.oversample = j.value("oversample", d.oversample);
  c.state = j.value("state", d.state);
  c.seed = j.value("seed", d.seed);
  c.out = j.value("out", d.out);
  c.symbol = j.value("symbol", d.symbol);
  c.route = j.value("route", d.route);
  c.count = j.value("count", d.count);
  c.remove_shift = j.value("remove_shift", d.remove_shift);
  c.check_normalization = j.value("check_normalization", d.check_normalization);
  c.mode = j.value("mode", d.mode);
  c.integrator = j.value("integrator", d.integrator);
  c.tau_end = j.value("tau_end", d.tau_end);
  c.samples = j.value("samples", d.samples);
  c.dtau = j.value("dtau", d.dtau);
  c.hermite_count = j.value("hermite_count", d.hermite_count);
  c.envelope_width = j.value("envelope_width", d.envelope_width);
  c.fit_rate = j.value("fit_rate", d.fit_rate);
  c.de2_mhz = j.value("de2_mhz", d.de2_mhz);
  c.level = j.value("level", d.level);
  c.constants = j.value("constants", d.constants);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  RunConfig c;
  from_json(j, c);
  return c;
}

}  // namespace diffavg::cli
