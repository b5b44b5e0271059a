#pragma once

#include <complex>
#include <span>
#include <vector>

namespace adjsound {

/// X(f) = sum_n x[n] exp(-2 pi i f n / fs).
std::complex<double> dft_at(std::span<const double> x, double frequency_hz, double sample_rate_hz);

struct SpectrumBin {
  double frequency_hz = 0.0;
  std::complex<double> value;
};

/// DFT bins k fs / N with f_lo <= f <= f_hi (N = x.size()).
std::vector<SpectrumBin> band_spectrum(std::span<const double> x, double sample_rate_hz,
                                       double f_lo_hz, double f_hi_hz);

/// 20 log10(|a| / |b|).
double level_difference_db(std::complex<double> a, std::complex<double> b);

/// arg(a / b) in cycles, wrapped to (-0.5, 0.5].
double phase_difference_cycles(std::complex<double> a, std::complex<double> b);

/// sum a b / sqrt(sum a^2 sum b^2); 0 when either is zero.
double normalized_correlation(std::span<const double> a, std::span<const double> b);

/// Largest normalized correlation over integer lags |lag| <= max_lag.
double max_normalized_correlation(std::span<const double> a, std::span<const double> b,
                                  int max_lag);

}  // namespace adjsound
