#include "diffavg/extended.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "diffavg/error.hpp"
#include "diffavg/fourier.hpp"

namespace diffavg {

using cd = std::complex<double>;

ExtendedAmplitude::ExtendedAmplitude(PhaseGrid grid, int k_trunc)
    : grid_(std::move(grid)), k_trunc_(k_trunc) {
  grid_.validate();
  if (k_trunc_ < 1) throw ParameterError("fiber truncation order must be >= 1");
}

void ExtendedAmplitude::check_mode_index(int k) const {
  if (std::abs(k) > k_trunc_) {
    std::ostringstream os;
    os << "fiber mode " << k << " exceeds truncation order " << k_trunc_;
    throw ParameterError(os.str());
  }
}

void ExtendedAmplitude::check_compatible(const ExtendedAmplitude& other) const {
  if (!grid_.same_as(other.grid_)) {
    throw GridMismatchError("extended amplitudes live on different phase grids");
  }
}

Eigen::MatrixXcd ExtendedAmplitude::mode(int k) const {
  auto it = modes_.find(k);
  if (it != modes_.end()) return it->second;
  return Eigen::MatrixXcd::Zero(grid_.q.size, grid_.p_size);
}

void ExtendedAmplitude::set_mode(int k, Eigen::MatrixXcd field) {
  check_mode_index(k);
  if (field.rows() != grid_.q.size || field.cols() != grid_.p_size) {
    throw GridMismatchError("mode field shape does not match the phase grid");
  }
  modes_[k] = std::move(field);
}

double ExtendedAmplitude::mode_norm(int k) const {
  auto it = modes_.find(k);
  if (it == modes_.end()) return 0.0;
  return it->second.norm() * std::sqrt(grid_.cell());
}

double ExtendedAmplitude::norm() const {
  double s = 0.0;
  for (const auto& [k, f] : modes_) s += f.squaredNorm();
  return std::sqrt(s * grid_.cell());
}

double inner(const ExtendedAmplitude& a, const ExtendedAmplitude& b) {
  a.check_compatible(b);
  double s = 0.0;
  for (const auto& [k, f] : a.modes_) {
    auto it = b.modes_.find(k);
    if (it == b.modes_.end()) continue;
    s += (f.array() * it->second.array().conjugate()).sum().real();
  }
  return s * a.grid_.cell();
}

double ExtendedAmplitude::reality_defect() const {
  const double total = norm();
  if (total == 0.0) return 0.0;
  double worst = 0.0;
  for (int k = 1; k <= k_trunc_; ++k) {
    const double d = (mode(-k) - mode(k).conjugate()).norm() * std::sqrt(grid_.cell());
    worst = std::max(worst, d);
  }
  return worst / total;
}

ExtendedAmplitude& ExtendedAmplitude::operator+=(const ExtendedAmplitude& other) {
  check_compatible(other);
  for (const auto& [k, f] : other.modes_) {
    check_mode_index(k);
    auto it = modes_.find(k);
    if (it == modes_.end()) {
      modes_[k] = f;
    } else {
      it->second += f;
    }
  }
  return *this;
}

ExtendedAmplitude& ExtendedAmplitude::operator*=(double s) {
  for (auto& [k, f] : modes_) f *= s;
  return *this;
}

ExtendedAmplitude operator-(ExtendedAmplitude a, const ExtendedAmplitude& b) {
  a += (-1.0) * b;
  return a;
}

ExtendedAmplitude apply_weyl(const WeylElement& w, const ExtendedAmplitude& phi, double h) {
  const PhaseGrid& g = phi.grid();
  const double dq = w.t * w.x;
  const double dp = w.t * w.y;
  if (std::abs(dq) > 0.25 * g.q.extent()) {
    std::ostringstream os;
    os << "Weyl shift " << dq << " along the position axis exceeds the grid margin "
       << 0.25 * g.q.extent();
    throw DomainError(os.str());
  }
  if (std::abs(dp) > 0.25 * g.p_extent()) {
    std::ostringstream os;
    os << "Weyl shift " << dp << " along the momentum axis exceeds the grid margin "
       << 0.25 * g.p_extent();
    throw DomainError(os.str());
  }

  ExtendedAmplitude out(g, phi.truncation());
  for (const auto& [k, field] : phi.modes()) {
    Eigen::MatrixXcd shifted = fourier::shift2d(field, dq / g.q.step, dp / g.p_step);
    if (k != 0) {
      // fiber rotation by t (c - <y, q>) multiplies mode k by exp(j 2 pi k s / h)
      for (int i = 0; i < g.q.size; ++i) {
        const double s = w.t * (w.c - w.y * g.q.at(i));
        const double phase = 2.0 * pi * k * s / h;
        shifted.row(i) *= cd(std::cos(phase), std::sin(phase));
      }
    }
    out.set_mode(k, std::move(shifted));
  }
  return out;
}

Eigen::MatrixXcd fiber_project(const FiberSamples& samples, int k, double h) {
  const std::size_t count = samples.t.size();
  if (count == 0 || count != samples.values.size()) {
    throw ParameterError("fiber samples need matching, non-empty t and value lists");
  }
  const double step = h / static_cast<double>(count);
  for (std::size_t s = 0; s < count; ++s) {
    const double expected = samples.t[0] + s * step;
    if (std::abs(samples.t[s] - expected) > 1e-9 * h) {
      throw ParameterError("fiber sampling must be uniform over one period [t0, t0 + h)");
    }
  }
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(samples.values[0].rows(), samples.values[0].cols());
  for (std::size_t s = 0; s < count; ++s) {
    const double phase = -2.0 * pi * k * samples.t[s] / h;
    acc += samples.values[s] * cd(std::cos(phase), std::sin(phase));
  }
  return acc / static_cast<double>(count);
}

ExtendedAmplitude fiber_decompose(const FiberSamples& samples, const PhaseGrid& grid,
                                  int k_trunc, double h) {
  if (static_cast<int>(samples.t.size()) < 4 * k_trunc) {
    std::ostringstream os;
    os << "fiber decomposition to order " << k_trunc << " needs at least " << 4 * k_trunc
       << " samples, got " << samples.t.size();
    throw ParameterError(os.str());
  }
  ExtendedAmplitude out(grid, k_trunc);
  for (int k = -k_trunc; k <= k_trunc; ++k) out.set_mode(k, fiber_project(samples, k, h));
  return out;
}

Eigen::MatrixXcd fiber_evaluate(const ExtendedAmplitude& phi, double t, double h) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(phi.grid().q.size, phi.grid().p_size);
  for (const auto& [k, f] : phi.modes()) {
    const double phase = 2.0 * pi * k * t / h;
    acc += f * cd(std::cos(phase), std::sin(phase));
  }
  return acc;
}

}  // namespace diffavg
