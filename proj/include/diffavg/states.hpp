#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "diffavg/params.hpp"
#include "diffavg/wavefunction.hpp"

namespace diffavg::states {

/// Normalised Gaussian matched to the smoothing width,
/// exp(-(pi/h)(b/a)(x - q0)^2) exp(j 2 pi p0 x / h). With (q0, p0) != 0 this is
/// the coherent state at (q0, p0).
WaveFunction gaussian(const PositionGrid& grid, const ModelParams& params, double q0 = 0.0,
                      double p0 = 0.0);

/// Normalised eigenstate n of -(h^2 / 8 pi^2 m) d^2/dx^2 + m w^2 x^2 / 2.
WaveFunction oscillator(const PositionGrid& grid, double h, int n, double mass = 1.0,
                        double omega = 1.0);

/// Gaussian packet exp(-(x - center)^2 / (4 width^2)) exp(j 2 pi momentum x / h).
struct Packet {
  std::complex<double> weight{1.0, 0.0};
  double center = 0.0;
  double width = 0.5;
  double momentum = 0.0;
};

/// Superposition of packets together with its exact first and second derivative.
struct PacketState {
  std::vector<Packet> packets;
  double h = 1.0;

  std::complex<double> value(double x, int order = 0) const;
  WaveFunction sample(const PositionGrid& grid) const;
  WaveFunction derivative(const PositionGrid& grid, int order) const;
};

/// Seeded random superposition of 3-5 packets, centres in [-1.5, 1.5], widths
/// in [0.3, 0.6], momenta in [-2, 2] (natural units scaled by sqrt(h)).
/// Deterministic for a given (seed, index) on a given build.
PacketState random_packets(std::uint64_t seed, int index, double h = 1.0);

/// Corpus of `count` normalised random states.
std::vector<WaveFunction> random_corpus(const PositionGrid& grid, double h, std::uint64_t seed,
                                        int count);

/// Reads a two- or three-column CSV (x, re[, im]) on a uniform grid; a header
/// line is skipped when it does not parse as numbers.
WaveFunction from_csv(const std::string& path);

}  // namespace diffavg::states
