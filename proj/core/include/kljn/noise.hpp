#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kljn/rng.hpp"

namespace kljn {

enum class SynthesisMode { kSpectralFlat, kFilteredWhite, kMultiSine };

std::string_view to_string(SynthesisMode mode);
SynthesisMode parse_synthesis_mode(std::string_view text);

inline constexpr std::uint64_t kDefaultSeed = 0x4b4c4a4e2024ULL;

// Sampling, bandwidth and synthesis settings shared by every bit of a run.
struct SimParams {
  double sample_rate = 10'000.0;  // Hz
  double bandwidth = 500.0;       // Hz
  double bit_duration = 0.1;      // s
  SynthesisMode synthesis_mode = SynthesisMode::kSpectralFlat;
  int tones = 50;  // multi_sine only
  bool normalize_per_bit = false;
  std::uint64_t master_seed = kDefaultSeed;

  // Throws ConfigError when an invariant is violated:
  //   bandwidth <= sample_rate / 4, bit_duration * sample_rate an integer
  //   >= 64, tones >= 1 for multi_sine.
  void validate() const;

  std::size_t samples_per_bit() const;
  double dt() const { return 1.0 / sample_rate; }
};

// Uniformly sampled real-valued time series.
struct Waveform {
  std::vector<double> samples;
  double dt = 0.0;

  Waveform() = default;
  Waveform(std::vector<double> s, double step) : samples(std::move(s)), dt(step) {}

  std::size_t size() const { return samples.size(); }
  std::span<const double> view() const { return samples; }
  double operator[](std::size_t k) const { return samples[k]; }

  // dt > 0 and at least two samples; throws ConfigError otherwise.
  void validate() const;
};

struct NoiseSpec {
  double mean_square = 0.0;  // V^2
  double bandwidth = 0.0;    // Hz
};

// One second-order section, normalized so a0 == 1:
//   y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2]
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

// The filtered_white low-pass: a 4th-order Butterworth realized as two
// cascaded bilinear-transform biquads with pole quality factors
// 1/(2 cos(pi/8)) and 1/(2 cos(3 pi/8)). The bilinear map is prewarped so
// the -3 dB point lands exactly on `cutoff`.
std::array<Biquad, 2> butterworth4_lowpass(double sample_rate, double cutoff);

// Runs the cascade from zero initial state.
std::vector<double> filter_cascade(std::span<const Biquad> sections,
                                   std::span<const double> input);

// Draws one bit period of source noise.
//
//   spectral_flat   independent Gaussian cosine/sine coefficients on every
//                   DFT bin k = 1..K with k / bit_duration <= bandwidth;
//                   DC and all bins above the cutoff are zero, so each bit
//                   is a periodic band-limited Gaussian realization.
//   filtered_white  unit white Gaussian samples through
//                   butterworth4_lowpass, started from zero state at every
//                   bit. The startup transient is kept. The gain is chosen
//                   so the expected mean square over the whole bit,
//                   transient included, equals mean_square.
//   multi_sine      `tones` equal-amplitude cosines at j * bandwidth / tones
//                   (j = 1..tones) with independent uniform phases.
//
// With normalize_per_bit the realization is rescaled to an empirical mean
// square of exactly mean_square.
Waveform synthesize(const NoiseSpec& spec, const SimParams& params,
                    const StreamId& stream);

// Fraction of periodogram power at frequencies <= bandwidth (rectangular
// window, one-sided). Requires at least 256 samples.
double psd_check(const Waveform& w, double bandwidth);

}  // namespace kljn
