#include "adjsound/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "adjsound/errors.hpp"

namespace adjsound {

std::complex<double> dft_at(std::span<const double> x, double f, double fs) {
  const double w = -2.0 * std::numbers::pi * f / fs;
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double ph = w * static_cast<double>(n);
    acc += x[n] * std::complex<double>(std::cos(ph), std::sin(ph));
  }
  return acc;
}

std::vector<SpectrumBin> band_spectrum(std::span<const double> x, double fs, double f_lo,
                                       double f_hi) {
  if (x.empty()) throw ShapeError("band_spectrum of an empty signal");
  const double df = fs / static_cast<double>(x.size());
  std::vector<SpectrumBin> out;
  for (std::size_t k = static_cast<std::size_t>(std::ceil(f_lo / df)); k * df <= f_hi; ++k) {
    out.push_back({k * df, dft_at(x, k * df, fs)});
  }
  return out;
}

double level_difference_db(std::complex<double> a, std::complex<double> b) {
  return 20.0 * std::log10(std::abs(a) / std::abs(b));
}

double phase_difference_cycles(std::complex<double> a, std::complex<double> b) {
  double c = std::arg(a / b) / (2.0 * std::numbers::pi);
  if (c <= -0.5) c += 1.0;
  return c;
}

double normalized_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("correlation of signals with different lengths");
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return ab / std::sqrt(aa * bb);
}

double max_normalized_correlation(std::span<const double> a, std::span<const double> b,
                                  int max_lag) {
  if (a.size() != b.size()) throw ShapeError("correlation of signals with different lengths");
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  double best = -1.0;
  for (int lag = -max_lag; lag <= max_lag; ++lag) {
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(0, -lag);
         i < std::min<std::ptrdiff_t>(n, n - lag); ++i) {
      ab += a[i] * b[i + lag];
      aa += a[i] * a[i];
      bb += b[i + lag] * b[i + lag];
    }
    if (aa > 0.0 && bb > 0.0) best = std::max(best, ab / std::sqrt(aa * bb));
  }
  return std::max(best, 0.0);
}

}  // namespace adjsound
