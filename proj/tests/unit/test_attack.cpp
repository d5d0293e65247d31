#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "kljn/attack.hpp"
#include "kljn/error.hpp"
#include "kljn/harness.hpp"

using namespace kljn;

namespace {

struct Synthetic {
  std::vector<double> lh, hl;
  std::vector<LabeledStatistic> eval;
};

// Two overlapping Gaussian populations, means 1 (LH) and 1.4 (HL).
Synthetic overlapping(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 0.5);
  Synthetic s;
  for (int k = 0; k < 500; ++k) {
    s.lh.push_back(1.0 + n(rng));
    s.hl.push_back(1.4 + n(rng));
  }
  for (int k = 0; k < 1000; ++k) {
    const bool hl = k % 3 == 0;
    s.eval.push_back({hl ? Arrangement::kHL : Arrangement::kLH, (hl ? 1.4 : 1.0) + n(rng)});
  }
  return s;
}

}  // namespace

TEST(Attack, MidpointThreshold) {
  const std::vector<double> lh{0.5, 1.5}, hl{2.0, 4.0};
  const auto c = calibrate_from(lh, hl);
  EXPECT_DOUBLE_EQ(c.threshold, 2.0);
  EXPECT_EQ(c.orientation, 1);
  EXPECT_EQ(guess(c, 2.5), Arrangement::kHL);
  EXPECT_EQ(guess(c, 1.5), Arrangement::kLH);
  const auto flipped = calibrate_from(hl, lh);
  EXPECT_EQ(flipped.orientation, -1);
  EXPECT_EQ(guess(flipped, 2.5), Arrangement::kLH);
}

TEST(Attack, EmptyCalibrationIsDegenerate) {
  const std::vector<double> some{1.0}, none;
  EXPECT_THROW(calibrate_from(some, none), DegenerateError);
}

TEST(Attack, PerfectLeakScoresOne) {
  const std::vector<double> lh{1.0}, hl{3.0};
  const auto c = calibrate_from(lh, hl);
  std::vector<LabeledStatistic> eval;
  for (int k = 0; k < 200; ++k) {
    const bool hl_bit = k % 2 == 1;
    eval.push_back({hl_bit ? Arrangement::kHL : Arrangement::kLH, hl_bit ? 3.0 : 1.0});
  }
  const auto r = score(c, eval, 10);
  EXPECT_DOUBLE_EQ(r.p, 1.0);
  EXPECT_DOUBLE_EQ(r.sigma, 0.0);
  EXPECT_EQ(r.per_batch_p.size(), 10u);
}

TEST(Attack, DroppedBitsAreExcluded) {
  const std::vector<double> lh{1.0}, hl{3.0};
  const auto c = calibrate_from(lh, hl);
  std::vector<LabeledStatistic> eval;
  for (int k = 0; k < 100; ++k) {
    eval.push_back({Arrangement::kLH, k % 4 == 0 ? std::nullopt : std::optional(1.0)});
  }
  const auto r = score(c, eval, 5);
  EXPECT_EQ(r.dropped_bits, 25u);
  EXPECT_EQ(r.usable_bits, 75u);
  EXPECT_DOUBLE_EQ(r.p, 1.0);
}

TEST(Attack, RescalingLeavesScoreUnchanged) {
  auto s = overlapping(1);
  const auto base = score(calibrate_from(s.lh, s.hl), s.eval, 10);
  for (auto& v : s.lh) v *= 1e-7;
  for (auto& v : s.hl) v *= 1e-7;
  for (auto& e : s.eval) *e.value *= 1e-7;
  const auto scaled = score(calibrate_from(s.lh, s.hl), s.eval, 10);
  EXPECT_EQ(base.per_batch_p, scaled.per_batch_p);
  EXPECT_GT(base.p, 0.6);
}

TEST(Attack, LabelSwapSymmetry) {
  auto s = overlapping(2);
  const auto base = score(calibrate_from(s.lh, s.hl), s.eval, 10);
  for (auto& e : s.eval) e.truth = other(e.truth);
  const auto swapped = score(calibrate_from(s.hl, s.lh), s.eval, 10);
  EXPECT_EQ(base.per_batch_p, swapped.per_batch_p);
}

TEST(Attack, BalancedLabels) {
  const auto a = balanced_labels(3000, 5);
  EXPECT_EQ(std::count(a.begin(), a.end(), Arrangement::kLH), 1500);
  EXPECT_EQ(a, balanced_labels(3000, 5));
  EXPECT_NE(a, balanced_labels(3000, 6));
}

TEST(Attack, ConfigValidation) {
  AttackConfig c;
  EXPECT_NO_THROW(c.validate());
  c.n_eval_bits = 301;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.n_batches = 1;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_EQ(parse_direction(to_string(Direction::kVoltageAtCurrentZero)),
            Direction::kVoltageAtCurrentZero);
}

TEST(Attack, KljnIsNullAndWorkerIndependent) {
  AttackConfig cfg;
  cfg.n_calibration_bits = 200;
  cfg.n_eval_bits = 600;
  SimParams p;
  const auto one = run_attack(preset("kljn"), p, cfg, 1);
  const auto three = run_attack(preset("kljn"), p, cfg, 3);
  EXPECT_EQ(one.per_batch_p, three.per_batch_p);
  EXPECT_EQ(one.threshold, three.threshold);
  EXPECT_LE(std::abs(one.p - 0.5), null_band(one.usable_bits));
}
