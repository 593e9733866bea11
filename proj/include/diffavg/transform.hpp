#pragma once

#include "diffavg/extended.hpp"
#include "diffavg/wavefunction.hpp"

namespace diffavg {

/// An extended amplitude whose only modes are k = -1 and k = +1 = conj(k = -1):
/// the image of a wave function under `synthesize`.
using AveragedAmplitude = ExtendedAmplitude;

/// psi -> averaged amplitude phi~(q, p, xi):
///   phi~ = (1/sqrt 2)(2/h^3)^{n/4} (prod b/a)^{1/4}
///          int exp(-(pi/h) sum (b_i/a_i)(q_i - x_i)^2)
///              (psi e^{-j 2 pi <p,x>/h} + psi* e^{j 2 pi <p,x>/h}) dx.
/// The fiber index -1 of psi puts the first term in mode k = -1.
///
/// Requires grid.q == psi.grid, a momentum grid conjugate to it, and 6-sigma
/// coverage of both smoothing Gaussians.
AveragedAmplitude synthesize(const WaveFunction& psi, const ModelParams& params,
                             const PhaseGrid& grid, int k_trunc = 3);

/// phi -> psi(x) = sqrt(2) (1/h) (2/h^3)^{n/4} (prod b/a)^{1/4}
///   int_0^h int phi(q, p, T_t xi) e^{j 2 pi t / h} G(q - x) e^{j 2 pi <p,x>/h} dq dp dt.
/// The fiber integral is evaluated exactly as h * phi_{-1}; every other mode
/// drops out.
///
/// Throws ParameterError when phi has no k = -1 mode and GridMismatchError when
/// out_grid differs from the amplitude's q grid.
WaveFunction extract(const ExtendedAmplitude& phi, const ModelParams& params,
                     const PositionGrid& out_grid);

/// synthesize(extract(phi)), the averaging projector onto H~.
AveragedAmplitude project_averaged(const ExtendedAmplitude& phi, const ModelParams& params);

}  // namespace diffavg
