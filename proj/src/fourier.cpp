#include "diffavg/fourier.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <vector>

#include "diffavg/error.hpp"
#include "diffavg/params.hpp"

namespace diffavg::fourier {

using cd = std::complex<double>;

Eigen::VectorXcd upsample(const Eigen::VectorXcd& values, int factor) {
  if (factor < 1) throw ParameterError("upsampling factor must be >= 1");
  const int n = static_cast<int>(values.size());
  if (factor == 1) return values;
  Eigen::FFT<double> fft;
  std::vector<cd> in(values.data(), values.data() + n), spec;
  fft.fwd(spec, in);

  const int m = n * factor;
  std::vector<cd> padded(m, cd(0.0, 0.0));
  const int half = n / 2;
  for (int k = 0; k < n; ++k) {
    const int s = signed_index(k, n);
    if (n % 2 == 0 && k == half) {
      // split the Nyquist bin evenly between +half and -half
      padded[half] += 0.5 * spec[k];
      padded[m - half] += 0.5 * spec[k];
    } else {
      padded[s >= 0 ? s : m + s] += spec[k];
    }
  }
  std::vector<cd> out;
  fft.inv(out, padded);
  Eigen::VectorXcd result(m);
  for (int i = 0; i < m; ++i) result[i] = out[i] * static_cast<double>(factor);
  return result;
}

namespace {

// Phase factors exp(j 2 pi s shift / n) applied to the DFT bins of one axis.
std::vector<cd> shift_factors(int n, double shift) {
  std::vector<cd> f(n);
  for (int k = 0; k < n; ++k) {
    if (n % 2 == 0 && k == n / 2) {
      f[k] = cd(std::cos(pi * shift), 0.0);
    } else {
      const double phase = 2.0 * pi * signed_index(k, n) * shift / n;
      f[k] = cd(std::cos(phase), std::sin(phase));
    }
  }
  return f;
}

}  // namespace

Eigen::MatrixXcd shift2d(const Eigen::MatrixXcd& field, double row_shift, double col_shift) {
  const int rows = static_cast<int>(field.rows());
  const int cols = static_cast<int>(field.cols());
  Eigen::FFT<double> fft;
  Eigen::MatrixXcd out = field;

  if (row_shift != 0.0) {
    const auto f = shift_factors(rows, row_shift);
    std::vector<cd> buf(rows), spec;
    for (int c = 0; c < cols; ++c) {
      for (int r = 0; r < rows; ++r) buf[r] = out(r, c);
      fft.fwd(spec, buf);
      for (int k = 0; k < rows; ++k) spec[k] *= f[k];
      fft.inv(buf, spec);
      for (int r = 0; r < rows; ++r) out(r, c) = buf[r];
    }
  }
  if (col_shift != 0.0) {
    const auto f = shift_factors(cols, col_shift);
    std::vector<cd> buf(cols), spec;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) buf[c] = out(r, c);
      fft.fwd(spec, buf);
      for (int k = 0; k < cols; ++k) spec[k] *= f[k];
      fft.inv(buf, spec);
      for (int c = 0; c < cols; ++c) out(r, c) = buf[c];
    }
  }
  return out;
}

}  // namespace diffavg::fourier
