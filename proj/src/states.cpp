#include "diffavg/states.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "diffavg/error.hpp"
#include "diffavg/hermite.hpp"

namespace diffavg::states {

using cd = std::complex<double>;

WaveFunction gaussian(const PositionGrid& grid, const ModelParams& params, double q0, double p0) {
  params.validate();
  const double c = pi / params.h * params.ratio(0);
  Eigen::VectorXcd v(grid.size);
  for (int i = 0; i < grid.size; ++i) {
    const double x = grid.at(i);
    const double phase = 2.0 * pi * p0 * x / params.h;
    v[i] = std::exp(-c * (x - q0) * (x - q0)) * cd(std::cos(phase), std::sin(phase));
  }
  return WaveFunction(grid, v).normalized();
}

WaveFunction oscillator(const PositionGrid& grid, double h, int n, double mass, double omega) {
  if (n < 0) throw ParameterError("oscillator level must be non-negative");
  const double hbar = h / (2.0 * pi);
  const double scale = std::sqrt(mass * omega / hbar);
  const Eigen::VectorXd z = scale * grid.points();
  const Eigen::MatrixXd hf = hermite::functions(n + 1, z);
  Eigen::VectorXcd v = (std::sqrt(scale) * hf.col(n)).cast<cd>();
  return WaveFunction(grid, v).normalized();
}

namespace {

// (d/dx)^order of exp(-(x-c)^2/(4w^2) + j k x), k = 2 pi momentum / h
cd packet_value(const Packet& pk, double h, double x, int order) {
  const double k = 2.0 * pi * pk.momentum / h;
  const double u = x - pk.center;
  const double env = std::exp(-u * u / (4.0 * pk.width * pk.width));
  const cd base = pk.weight * env * cd(std::cos(k * x), std::sin(k * x));
  const cd slope = cd(-u / (2.0 * pk.width * pk.width), k);
  switch (order) {
    case 0:
      return base;
    case 1:
      return base * slope;
    case 2:
      return base * (slope * slope - 1.0 / (2.0 * pk.width * pk.width));
    default:
      throw ParameterError("packet derivatives are available up to order 2");
  }
}

}  // namespace

cd PacketState::value(double x, int order) const {
  cd s(0.0, 0.0);
  for (const auto& pk : packets) s += packet_value(pk, h, x, order);
  return s;
}

WaveFunction PacketState::sample(const PositionGrid& grid) const { return derivative(grid, 0); }

WaveFunction PacketState::derivative(const PositionGrid& grid, int order) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(grid.size);
  for (int i = 0; i < grid.size; ++i) v[i] = value(grid.at(i), order);
  return WaveFunction(grid, v);
}

PacketState random_packets(std::uint64_t seed, int index, double h) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<int> count(3, 5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double scale = std::sqrt(h);

  PacketState state;
  state.h = h;
  const int n = count(rng);
  for (int j = 0; j < n; ++j) {
    Packet pk;
    const double re = 2.0 * unit(rng) - 1.0;
    const double im = 2.0 * unit(rng) - 1.0;
    pk.weight = cd(re, im);
    pk.center = scale * (3.0 * unit(rng) - 1.5);
    pk.width = scale * (0.3 + 0.3 * unit(rng));
    pk.momentum = scale * (4.0 * unit(rng) - 2.0);
    state.packets.push_back(pk);
  }
  return state;
}

std::vector<WaveFunction> random_corpus(const PositionGrid& grid, double h, std::uint64_t seed,
                                        int count) {
  std::vector<WaveFunction> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    out.push_back(random_packets(seed, i, h).sample(grid).normalized());
  }
  return out;
}

WaveFunction from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open state file " + path);
  std::vector<double> xs, re, im;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (char& ch : line) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream ls(line);
    double x = 0.0, r = 0.0, i = 0.0;
    if (!(ls >> x >> r)) {
      if (xs.empty()) continue;  // header
      throw ParameterError("malformed row in state file " + path);
    }
    if (!(ls >> i)) i = 0.0;
    xs.push_back(x);
    re.push_back(r);
    im.push_back(i);
  }
  if (xs.size() < 8) throw ParameterError("state file needs at least 8 samples");
  PositionGrid grid;
  grid.start = xs.front();
  grid.size = static_cast<int>(xs.size());
  grid.step = (xs.back() - xs.front()) / (grid.size - 1);
  for (int i = 0; i < grid.size; ++i) {
    if (std::abs(xs[i] - grid.at(i)) > 1e-9 * std::max(1.0, std::abs(xs[i]))) {
      throw ParameterError("state file samples are not on a uniform grid");
    }
  }
  Eigen::VectorXcd v(grid.size);
  for (int i = 0; i < grid.size; ++i) v[i] = cd(re[i], im[i]);
  return WaveFunction(grid, v);
}

}  // namespace diffavg::states
