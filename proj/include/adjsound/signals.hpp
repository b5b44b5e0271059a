#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace adjsound {

enum class SignalKind { LogSweep, BandNoise, Harmonic, SamplesFromFile, Zero };

struct SignalSpec {
  SignalKind kind = SignalKind::Zero;
  double amplitude = 1.0;
  /// Sweep start / band lower edge.
  double f1_hz = 0.0;
  /// Sweep end / band upper edge.
  double f2_hz = 0.0;
  /// Harmonic frequency.
  double frequency_hz = 0.0;
  double phase_rad = 0.0;
  /// Signal is zero before delay_s; the active part lasts duration_s (0: to the end).
  double delay_s = 0.0;
  double duration_s = 0.0;
  /// Raised-cosine ramp length as a fraction of the active span.
  double ramp_fraction = 0.05;
  std::uint64_t seed = 0;
  std::string path;

  bool operator==(const SignalSpec&) const = default;
};

/// Checks band edges against (0, sample_rate / 2); ConfigError otherwise.
void validate_signal(const SignalSpec& spec, double sample_rate_hz);

/**
 * Samples at time levels 0..steps (steps + 1 values).
 *
 * log_sweep: sin of the phase of an exponential frequency ramp f1 -> f2
 * over the active span; band_noise: seeded Gaussian white noise, 4th-order
 * Butterworth high- and low-pass applied forward and backward (zero phase),
 * scaled to the given peak amplitude; harmonic: sin(2 pi f t + phase).
 * All kinds get raised-cosine ramps at both ends of the active span
 * (harmonic: onset only).
 */
std::vector<double> generate_signal(const SignalSpec& spec, std::size_t steps, double dt);

/// Log sweep instantaneous frequency at time t within the active span.
double sweep_frequency(const SignalSpec& spec, double t);

/// Second-order IIR section, direct form I.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0, a1 = 0.0, a2 = 0.0;

  static Biquad lowpass(double f_hz, double q, double sample_rate_hz);
  static Biquad highpass(double f_hz, double q, double sample_rate_hz);
  void filter_in_place(std::vector<double>& x) const;
};

/// Butterworth band-pass of order 4 per edge, applied forward then backward.
void zero_phase_bandpass(std::vector<double>& x, double f1_hz, double f2_hz, double sample_rate_hz);

}  // namespace adjsound
