#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "kljn/noise.hpp"

namespace kljn {

// Crossing between samples `index` and `index + 1` at the linearly
// interpolated offset `frac` in [0, 1). Exact zero samples give frac == 0.
struct CrossingEvent {
  std::size_t index = 0;
  double frac = 0.0;
};

enum class SamplingMode { kInterpolate, kSampleAfter };

std::string_view to_string(SamplingMode mode);
SamplingMode parse_sampling_mode(std::string_view text);

struct CrossingStat {
  std::size_t n_crossings = 0;
  double msq_conditional = 0.0;
  SamplingMode sampling_mode = SamplingMode::kSampleAfter;

  // A bit without crossings carries no conditional sample.
  bool valid() const { return n_crossings > 0; }
};

// One event per strict sign change between consecutive samples. A run of
// exact zeros is a single event at its first sample.
std::vector<CrossingEvent> find_crossings(const Waveform& trigger);

// Mean square of `target` at the crossings of `trigger`:
//   interpolate   target blended linearly at frac
//   sample_after  target[index + 1]
// Exact-zero events read target[index] in both modes, since the trigger is
// zero at that sample itself.
CrossingStat sample_at_crossings(const Waveform& trigger, const Waveform& target,
                                 SamplingMode mode);

}  // namespace kljn
