#include "kljn/noise.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "fft.hpp"
#include "kljn/error.hpp"

namespace kljn {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double mean_square(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

// Number of DFT bins 1..K of an n-sample bit that lie at or below the cutoff.
std::size_t in_band_bins(const SimParams& params, double bandwidth) {
  const double duration = static_cast<double>(params.samples_per_bit()) * params.dt();
  const auto k = static_cast<std::size_t>(std::floor(bandwidth * duration * (1.0 + 1e-12)));
  if (k == 0) {
    throw ConfigError(fmt::format(
        "bandwidth {} Hz is below the frequency resolution {} Hz of one bit", bandwidth,
        1.0 / duration));
  }
  return k;
}

std::vector<double> spectral_flat(double target, const SimParams& params, double bandwidth,
                                  Engine& engine) {
  const std::size_t n = params.samples_per_bit();
  const std::size_t k_max = in_band_bins(params, bandwidth);
  // Unnormalized c2r gives x[n] = 2 sum_k (a_k cos - b_k sin), so each
  // coefficient needs variance target / (4 K).
  std::normal_distribution<double> normal(0.0, std::sqrt(target / (4.0 * k_max)));
  std::vector<std::complex<double>> half(n / 2 + 1);
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double re = normal(engine);
    const double im = normal(engine);
    half[k] = {re, im};
  }
  return detail::irfft(half, n);
}

std::vector<double> filtered_white(double target, const SimParams& params, double bandwidth,
                                   Engine& engine) {
  const std::size_t n = params.samples_per_bit();
  const auto sections = butterworth4_lowpass(params.sample_rate, bandwidth);

  // Expected output power at sample m from a zero-state start is
  // sum_{j<=m} h[j]^2; average it over the bit to get the gain.
  std::vector<double> impulse(n, 0.0);
  impulse[0] = 1.0;
  const auto h = filter_cascade(sections, impulse);
  double cumulative = 0.0;
  double expected = 0.0;
  for (double v : h) {
    cumulative += v * v;
    expected += cumulative;
  }
  expected /= static_cast<double>(n);

  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> white(n);
  for (auto& v : white) v = normal(engine);
  auto y = filter_cascade(sections, white);
  const double gain = std::sqrt(target / expected);
  for (auto& v : y) v *= gain;
  return y;
}

std::vector<double> multi_sine(double target, const SimParams& params, double bandwidth,
                               Engine& engine) {
  const std::size_t n = params.samples_per_bit();
  const int tones = params.tones;
  const double amplitude = std::sqrt(2.0 * target / tones);
  std::uniform_real_distribution<double> phase_dist(0.0, kTwoPi);
  std::vector<double> x(n, 0.0);
  for (int j = 1; j <= tones; ++j) {
    const double omega = kTwoPi * bandwidth * j / tones * params.dt();
    const double phase = phase_dist(engine);
    // Phasor recurrence; drift over one bit stays near machine epsilon.
    const std::complex<double> step = std::polar(1.0, omega);
    std::complex<double> z = std::polar(amplitude, phase);
    for (std::size_t m = 0; m < n; ++m) {
      x[m] += z.real();
      z *= step;
    }
  }
  return x;
}

}  // namespace

std::string_view to_string(SynthesisMode mode) {
  switch (mode) {
    case SynthesisMode::kSpectralFlat: return "spectral_flat";
    case SynthesisMode::kFilteredWhite: return "filtered_white";
    case SynthesisMode::kMultiSine: return "multi_sine";
  }
  return "unknown";
}

SynthesisMode parse_synthesis_mode(std::string_view text) {
  if (text == "spectral_flat") return SynthesisMode::kSpectralFlat;
  if (text == "filtered_white") return SynthesisMode::kFilteredWhite;
  if (text == "multi_sine") return SynthesisMode::kMultiSine;
  throw ConfigError(fmt::format("unknown synthesis mode '{}'", text));
}

void SimParams::validate() const {
  if (!(sample_rate > 0.0) || !(bandwidth > 0.0) || !(bit_duration > 0.0)) {
    throw ConfigError("sample_rate, bandwidth and bit_duration must be positive");
  }
  if (bandwidth > sample_rate / 4.0) {
    throw ConfigError(fmt::format("bandwidth {} Hz exceeds sample_rate / 4 = {} Hz", bandwidth,
                                  sample_rate / 4.0));
  }
  const double n = bit_duration * sample_rate;
  if (std::abs(n - std::round(n)) > 1e-9 * n) {
    throw ConfigError(fmt::format("bit_duration * sample_rate = {} is not an integer", n));
  }
  if (std::round(n) < 64.0) {
    throw ConfigError(fmt::format("a bit needs at least 64 samples, got {}", n));
  }
  if (synthesis_mode == SynthesisMode::kMultiSine && tones < 1) {
    throw ConfigError("multi_sine needs tones >= 1");
  }
}

std::size_t SimParams::samples_per_bit() const {
  return static_cast<std::size_t>(std::llround(bit_duration * sample_rate));
}

void Waveform::validate() const {
  if (!(dt > 0.0)) throw ConfigError("waveform dt must be positive");
  if (samples.size() < 2) throw ConfigError("waveform needs at least two samples");
}

std::array<Biquad, 2> butterworth4_lowpass(double sample_rate, double cutoff) {
  if (!(cutoff > 0.0) || !(cutoff < sample_rate / 2.0)) {
    throw ConfigError("low-pass cutoff must lie in (0, sample_rate / 2)");
  }
  const double w0 = kTwoPi * cutoff / sample_rate;
  const double cos_w0 = std::cos(w0);
  const double sin_w0 = std::sin(w0);
  const std::array<double, 2> q = {1.0 / (2.0 * std::cos(std::numbers::pi / 8.0)),
                                   1.0 / (2.0 * std::cos(3.0 * std::numbers::pi / 8.0))};
  std::array<Biquad, 2> out;
  for (std::size_t s = 0; s < 2; ++s) {
    const double alpha = sin_w0 / (2.0 * q[s]);
    const double a0 = 1.0 + alpha;
    out[s].b0 = (1.0 - cos_w0) / 2.0 / a0;
    out[s].b1 = (1.0 - cos_w0) / a0;
    out[s].b2 = out[s].b0;
    out[s].a1 = -2.0 * cos_w0 / a0;
    out[s].a2 = (1.0 - alpha) / a0;
  }
  return out;
}

std::vector<double> filter_cascade(std::span<const Biquad> sections,
                                   std::span<const double> input) {
  std::vector<double> x(input.begin(), input.end());
  for (const auto& s : sections) {
    double x1 = 0.0, x2 = 0.0, y1 = 0.0, y2 = 0.0;
    for (auto& v : x) {
      const double y = s.b0 * v + s.b1 * x1 + s.b2 * x2 - s.a1 * y1 - s.a2 * y2;
      x2 = x1;
      x1 = v;
      y2 = y1;
      y1 = y;
      v = y;
    }
  }
  return x;
}

Waveform synthesize(const NoiseSpec& spec, const SimParams& params, const StreamId& stream) {
  params.validate();
  if (spec.mean_square < 0.0 || std::isnan(spec.mean_square)) {
    throw DomainError(fmt::format("negative mean-square intensity {}", spec.mean_square));
  }
  if (!(spec.bandwidth > 0.0) || spec.bandwidth > params.sample_rate / 4.0) {
    throw ConfigError(fmt::format("noise bandwidth {} Hz outside (0, sample_rate / 4]",
                                  spec.bandwidth));
  }
  const std::size_t n = params.samples_per_bit();
  if (spec.mean_square == 0.0) return Waveform(std::vector<double>(n, 0.0), params.dt());

  Engine engine = make_engine(params.master_seed, stream);
  std::vector<double> x;
  switch (params.synthesis_mode) {
    case SynthesisMode::kSpectralFlat:
      x = spectral_flat(spec.mean_square, params, spec.bandwidth, engine);
      break;
    case SynthesisMode::kFilteredWhite:
      x = filtered_white(spec.mean_square, params, spec.bandwidth, engine);
      break;
    case SynthesisMode::kMultiSine:
      x = multi_sine(spec.mean_square, params, spec.bandwidth, engine);
      break;
  }
  if (params.normalize_per_bit) {
    const double ms = mean_square(x);
    if (ms > 0.0) {
      const double gain = std::sqrt(spec.mean_square / ms);
      for (auto& v : x) v *= gain;
    }
  }
  return Waveform(std::move(x), params.dt());
}

double psd_check(const Waveform& w, double bandwidth) {
  w.validate();
  const std::size_t n = w.size();
  if (n < 256) {
    throw DegenerateError(fmt::format("psd_check needs >= 256 samples, got {}", n));
  }
  const auto spectrum = detail::rfft(w.view());
  const double df = 1.0 / (static_cast<double>(n) * w.dt);
  double total = 0.0;
  double in_band = 0.0;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
    const double p = std::norm(spectrum[k]) * (unpaired ? 1.0 : 2.0);
    total += p;
    if (static_cast<double>(k) * df <= bandwidth * (1.0 + 1e-12)) in_band += p;
  }
  if (!(total > 0.0)) throw DomainError("psd_check of a zero-power waveform");
  return in_band / total;
}

}  // namespace kljn
