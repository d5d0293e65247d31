#include "kljn/crossing.hpp"

#include <cmath>

#include <fmt/format.h>

#include "kljn/error.hpp"
#include "kljn/stats.hpp"

namespace kljn {

std::string_view to_string(SamplingMode mode) {
  return mode == SamplingMode::kInterpolate ? "interpolate" : "sample_after";
}

SamplingMode parse_sampling_mode(std::string_view text) {
  if (text == "interpolate") return SamplingMode::kInterpolate;
  if (text == "sample_after") return SamplingMode::kSampleAfter;
  throw ConfigError(fmt::format("unknown sampling mode '{}'", text));
}

std::vector<CrossingEvent> find_crossings(const Waveform& trigger) {
  trigger.validate();
  const auto& t = trigger.samples;
  const std::size_t n = t.size();
  std::vector<CrossingEvent> events;
  for (std::size_t k = 0; k < n; ++k) {
    if (t[k] == 0.0) {
      if (k == 0 || t[k - 1] != 0.0) events.push_back({k, 0.0});
      continue;
    }
    if (k + 1 < n && t[k + 1] != 0.0 && std::signbit(t[k]) != std::signbit(t[k + 1])) {
      double frac = t[k] / (t[k] - t[k + 1]);
      if (frac >= 1.0) frac = std::nextafter(1.0, 0.0);
      events.push_back({k, frac});
    }
  }
  return events;
}

CrossingStat sample_at_crossings(const Waveform& trigger, const Waveform& target,
                                 SamplingMode mode) {
  if (trigger.size() != target.size() || trigger.dt != target.dt) {
    throw ConfigError("trigger and target waveforms differ in shape");
  }
  const auto events = find_crossings(trigger);
  CrossingStat stat;
  stat.sampling_mode = mode;
  stat.n_crossings = events.size();
  if (events.empty()) return stat;
  CompensatedSum acc;
  for (const auto& e : events) {
    double v = 0.0;
    if (trigger[e.index] == 0.0) {
      v = target[e.index];
    } else if (mode == SamplingMode::kSampleAfter) {
      v = target[e.index + 1];
    } else {
      v = target[e.index] + e.frac * (target[e.index + 1] - target[e.index]);
    }
    acc.add(v * v);
  }
  stat.msq_conditional = acc.value() / static_cast<double>(events.size());
  return stat;
}

}  // namespace kljn
