#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kljn/crossing.hpp"
#include "kljn/error.hpp"

using namespace kljn;

namespace {

constexpr double kPi = std::numbers::pi;

// Samples at t = (n - 0.5) / fs, n = 1..N+1, so no sample hits a zero.
Waveform sine(double f, double fs, std::size_t n, double phase = 0.0) {
  std::vector<double> x(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    x[k] = std::sin(2.0 * kPi * f * (double(k + 1) - 0.5) / fs + phase);
  }
  return Waveform(std::move(x), 1.0 / fs);
}

}  // namespace

TEST(Crossing, TenHertzSineOverOneSecond) {
  EXPECT_EQ(find_crossings(sine(10.0, 1000.0, 1000)).size(), 20u);
}

TEST(Crossing, PositiveWaveformHasNone) {
  const Waveform w(std::vector<double>(500, 0.3), 1e-3);
  EXPECT_TRUE(find_crossings(w).empty());
  const auto s = sample_at_crossings(w, w, SamplingMode::kSampleAfter);
  EXPECT_FALSE(s.valid());
}

TEST(Crossing, ExactZeroRunIsOneEvent) {
  const Waveform w({1.0, 0.0, 0.0, 0.0, -1.0, -2.0}, 1.0);
  const auto ev = find_crossings(w);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].index, 1u);
  EXPECT_EQ(ev[0].frac, 0.0);
}

TEST(Crossing, SignFlipInvariance) {
  auto w = sine(37.0, 5000.0, 4000, 0.2);
  auto flipped = w;
  for (auto& x : flipped.samples) x = -x;
  const auto a = find_crossings(w), b = find_crossings(flipped);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].index, b[k].index);
    EXPECT_DOUBLE_EQ(a[k].frac, b[k].frac);
  }
}

TEST(Crossing, InterpolatedTriggerIsNearZero) {
  const auto w = sine(13.0, 2000.0, 2000, 0.1);
  const auto s = sample_at_crossings(w, w, SamplingMode::kInterpolate);
  ASSERT_TRUE(s.valid());
  EXPECT_LT(s.msq_conditional, 1e-12);
  // Sample-after reads up to one step past the zero.
  const auto after = sample_at_crossings(w, w, SamplingMode::kSampleAfter);
  EXPECT_GT(after.msq_conditional, s.msq_conditional);
}

TEST(Crossing, QuadratureSampledAtPeaks) {
  const auto trig = sine(10.0, 10'000.0, 10'000);
  const auto tgt = sine(10.0, 10'000.0, 10'000, kPi / 2.0);
  const auto s = sample_at_crossings(trig, tgt, SamplingMode::kInterpolate);
  EXPECT_EQ(s.n_crossings, 20u);
  EXPECT_NEAR(s.msq_conditional, 1.0, 1e-4);  // linear blend near a peak
}

TEST(Crossing, RiceRateOfBandLimitedNoise) {
  SimParams p;
  std::size_t count = 0;
  for (std::uint64_t b = 0; b < 1000; ++b) {
    count += find_crossings(synthesize({1.0, p.bandwidth}, p,
                                       {Purpose::kAuxiliary, b, Party::kAlice, Role::kLow}))
                 .size();
  }
  const double rate = double(count) / (1000 * p.bit_duration);
  EXPECT_NEAR(rate / (2.0 * p.bandwidth / std::sqrt(3.0)), 1.0, 0.03);
}

TEST(Crossing, ShapeMismatchRejected) {
  EXPECT_THROW(sample_at_crossings(sine(1, 100, 10), sine(1, 100, 20), SamplingMode::kInterpolate),
               ConfigError);
}

TEST(Crossing, ModeNamesRoundTrip) {
  for (auto m : {SamplingMode::kInterpolate, SamplingMode::kSampleAfter}) {
    EXPECT_EQ(parse_sampling_mode(to_string(m)), m);
  }
}
