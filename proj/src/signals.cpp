#include "adjsound/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "adjsound/errors.hpp"
#include "adjsound/io.hpp"

namespace adjsound {

namespace {

constexpr double kPi = std::numbers::pi;
// Pole-pair quality factors of a 4th-order Butterworth section cascade.
constexpr double kButterworthQ[2] = {0.54119610014619701, 1.3065629648763766};

double raised_cosine(double x) { return 0.5 * (1.0 - std::cos(kPi * std::clamp(x, 0.0, 1.0))); }

struct ActiveSpan {
  double start = 0.0;
  double length = 0.0;
};

ActiveSpan active_span(const SignalSpec& spec, std::size_t steps, double dt) {
  const double total = static_cast<double>(steps) * dt;
  ActiveSpan s;
  s.start = spec.delay_s;
  s.length = spec.duration_s > 0.0 ? spec.duration_s : std::max(0.0, total - spec.delay_s);
  return s;
}

double envelope(const SignalSpec& spec, const ActiveSpan& span, double t, bool tail) {
  const double tau = t - span.start;
  if (tau < 0.0 || tau > span.length) return 0.0;
  const double ramp = spec.ramp_fraction * span.length;
  if (ramp <= 0.0) return 1.0;
  double e = raised_cosine(tau / ramp);
  if (tail) e *= raised_cosine((span.length - tau) / ramp);
  return e;
}

}  // namespace

void validate_signal(const SignalSpec& spec, double sample_rate_hz) {
  const double nyquist = 0.5 * sample_rate_hz;
  auto check = [&](double f, const char* what) {
    if (!(f > 0.0)) throw ConfigError(std::string(what) + ": must be positive");
    if (!(f < nyquist)) {
      throw ConfigError(std::string(what) + ": " + std::to_string(f) +
                        " Hz is at or above the Nyquist frequency " + std::to_string(nyquist) +
                        " Hz");
    }
  };
  switch (spec.kind) {
    case SignalKind::LogSweep:
    case SignalKind::BandNoise:
      check(spec.f1_hz, "f1_hz");
      check(spec.f2_hz, "f2_hz");
      if (!(spec.f2_hz > spec.f1_hz)) throw ConfigError("f2_hz: must exceed f1_hz");
      break;
    case SignalKind::Harmonic:
      check(spec.frequency_hz, "frequency_hz");
      break;
    case SignalKind::SamplesFromFile:
      if (spec.path.empty()) throw ConfigError("path: required for samples_from_file");
      break;
    case SignalKind::Zero:
      break;
  }
  if (spec.ramp_fraction < 0.0 || spec.ramp_fraction > 0.5) {
    throw ConfigError("ramp_fraction: must lie in [0, 0.5]");
  }
}

double sweep_frequency(const SignalSpec& spec, double t) {
  const double tau = std::clamp((t - spec.delay_s) / spec.duration_s, 0.0, 1.0);
  return spec.f1_hz * std::pow(spec.f2_hz / spec.f1_hz, tau);
}

Biquad Biquad::lowpass(double f, double q, double fs) {
  const double w = 2.0 * kPi * f / fs;
  const double alpha = std::sin(w) / (2.0 * q);
  const double cw = std::cos(w);
  const double a0 = 1.0 + alpha;
  Biquad b;
  b.b0 = (1.0 - cw) / 2.0 / a0;
  b.b1 = (1.0 - cw) / a0;
  b.b2 = b.b0;
  b.a1 = -2.0 * cw / a0;
  b.a2 = (1.0 - alpha) / a0;
  return b;
}

Biquad Biquad::highpass(double f, double q, double fs) {
  const double w = 2.0 * kPi * f / fs;
  const double alpha = std::sin(w) / (2.0 * q);
  const double cw = std::cos(w);
  const double a0 = 1.0 + alpha;
  Biquad b;
  b.b0 = (1.0 + cw) / 2.0 / a0;
  b.b1 = -(1.0 + cw) / a0;
  b.b2 = b.b0;
  b.a1 = -2.0 * cw / a0;
  b.a2 = (1.0 - alpha) / a0;
  return b;
}

void Biquad::filter_in_place(std::vector<double>& x) const {
  double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
  for (double& v : x) {
    const double y = b0 * v + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
    x2 = x1;
    x1 = v;
    y2 = y1;
    y1 = y;
    v = y;
  }
}

void zero_phase_bandpass(std::vector<double>& x, double f1, double f2, double fs) {
  std::vector<Biquad> sections;
  for (double q : kButterworthQ) {
    sections.push_back(Biquad::highpass(f1, q, fs));
    sections.push_back(Biquad::lowpass(f2, q, fs));
  }
  for (const Biquad& s : sections) s.filter_in_place(x);
  std::reverse(x.begin(), x.end());
  for (const Biquad& s : sections) s.filter_in_place(x);
  std::reverse(x.begin(), x.end());
}

std::vector<double> generate_signal(const SignalSpec& spec, std::size_t steps, double dt) {
  validate_signal(spec, 1.0 / dt);
  std::vector<double> out(steps + 1, 0.0);
  const ActiveSpan span = active_span(spec, steps, dt);
  switch (spec.kind) {
    case SignalKind::Zero:
      break;
    case SignalKind::Harmonic:
      for (std::size_t n = 0; n <= steps; ++n) {
        const double t = static_cast<double>(n) * dt;
        const double e = envelope(spec, span, t, false);
        if (e > 0.0) {
          out[n] = spec.amplitude * e *
                   std::sin(2.0 * kPi * spec.frequency_hz * (t - span.start) + spec.phase_rad);
        }
      }
      break;
    case SignalKind::LogSweep: {
      const double k = std::log(spec.f2_hz / spec.f1_hz);
      for (std::size_t n = 0; n <= steps; ++n) {
        const double t = static_cast<double>(n) * dt;
        const double e = envelope(spec, span, t, true);
        if (e <= 0.0) continue;
        const double tau = (t - span.start) / span.length;
        const double phase = 2.0 * kPi * spec.f1_hz * span.length / k * (std::exp(k * tau) - 1.0);
        out[n] = spec.amplitude * e * std::sin(phase + spec.phase_rad);
      }
      break;
    }
    case SignalKind::BandNoise: {
      std::mt19937_64 rng(spec.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<double> x(steps + 1);
      for (double& v : x) v = normal(rng);
      zero_phase_bandpass(x, spec.f1_hz, spec.f2_hz, 1.0 / dt);
      for (std::size_t n = 0; n <= steps; ++n) x[n] *= envelope(spec, span, static_cast<double>(n) * dt, true);
      double peak = 0.0;
      for (double v : x) peak = std::max(peak, std::abs(v));
      if (peak > 0.0) {
        for (std::size_t n = 0; n <= steps; ++n) out[n] = spec.amplitude * x[n] / peak;
      }
      break;
    }
    case SignalKind::SamplesFromFile: {
      SignalTrace trace;
      try {
        trace = read_signal_csv(spec.path);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("path: ") + e.what());
      }
      for (std::size_t n = 0; n <= steps && n < trace.values.size(); ++n) {
        out[n] = spec.amplitude * trace.values[n];
      }
      break;
    }
  }
  return out;
}

}  // namespace adjsound
