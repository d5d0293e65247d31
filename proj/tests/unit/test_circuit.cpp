#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kljn/circuit.hpp"
#include "kljn/error.hpp"
#include "kljn/stats.hpp"

using namespace kljn;

TEST(Circuit, SymmetricLoopCarriesNoPower) {
  const auto m = analytic_moments({1000.0, 2.0, 1000.0, 2.0});
  EXPECT_DOUBLE_EQ(m.p_ab, 0.0);
  EXPECT_DOUBLE_EQ(m.msq_u, 1.0);
  EXPECT_DOUBLE_EQ(m.msq_i, 4.0 / 4e6);
}

TEST(Circuit, KljnLowHighExample) {
  // 1k at 1 V^2 against 10k at 10 V^2.
  const auto m = analytic_moments({1e3, 1.0, 1e4, 10.0});
  EXPECT_NEAR(m.msq_u, 1.0 / 1.1, 1e-12);
  EXPECT_NEAR(m.msq_i, 11.0 / 1.21e8, 1e-20);
  EXPECT_NEAR(m.p_ab, 0.0, 1e-20);
}

TEST(Circuit, PowerFlowsFromHotterSide) {
  EXPECT_GT(analytic_moments({1.0, 2.0, 1.0, 1.0}).p_ab, 0.0);
  EXPECT_LT(analytic_moments({1.0, 1.0, 1.0, 2.0}).p_ab, 0.0);
}

TEST(Circuit, ExchangeFlipsOnlyThePower) {
  const LoopConfig c{470.0, 3.0, 2200.0, 0.7};
  const LoopConfig s{c.r_b, c.e_b, c.r_a, c.e_a};
  const auto a = analytic_moments(c), b = analytic_moments(s);
  EXPECT_NEAR(a.msq_u, b.msq_u, 1e-15);
  EXPECT_NEAR(a.msq_i, b.msq_i, 1e-20);
  EXPECT_NEAR(a.p_ab, -b.p_ab, 1e-18);
}

TEST(Circuit, ConditionalOracleForRhoPointSix) {
  // r_a = r_b = 1, e = 1 +- rho gives correlation rho.
  const auto m = analytic_moments({1.0, 1.6, 1.0, 0.4});
  EXPECT_NEAR(m.p_ab / std::sqrt(m.msq_u * m.msq_i), 0.6, 1e-12);
  EXPECT_NEAR(conditional_msq_at_zero(m) / m.msq_i, 0.64, 1e-12);
}

TEST(Circuit, ConditionalOracleRejectsZeroVariance) {
  EXPECT_THROW(conditional_msq_at_zero({0.0, 1.0, 0.0}), DomainError);
}

TEST(Circuit, RejectionSamplingAgreesWithOracle) {
  const LoopConfig cfg{1.0, 1.9, 1.0, 0.1};  // rho = 0.9
  const auto m = analytic_moments(cfg);
  const double eps = 0.01 * std::sqrt(m.msq_u);
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> a(0.0, std::sqrt(cfg.e_a)), b(0.0, std::sqrt(cfg.e_b));
  double acc = 0.0;
  std::size_t kept = 0;
  for (int k = 0; k < 4'000'000; ++k) {
    const double ua = a(rng), ub = b(rng);
    const double i = (ua - ub) / (cfg.r_a + cfg.r_b);
    const double u = ua - i * cfg.r_a;
    if (std::abs(u) < eps) {
      acc += i * i;
      ++kept;
    }
  }
  ASSERT_GT(kept, 10000u);
  EXPECT_NEAR(acc / double(kept) / conditional_msq_at_zero(m), 1.0, 0.03);
}

TEST(Circuit, SimulatedLoopObeysKirchhoffAndMoments) {
  const LoopConfig cfg{1e3, 1.0, 1e4, 10.0};
  SimParams p;
  std::vector<double> u, i, pw;
  for (std::uint64_t b = 0; b < 600; ++b) {
    const auto ua = synthesize({cfg.e_a, p.bandwidth}, p, {Purpose::kAuxiliary, b, Party::kAlice, Role::kLow});
    const auto ub = synthesize({cfg.e_b, p.bandwidth}, p, {Purpose::kAuxiliary, b, Party::kBob, Role::kHigh});
    const auto wire = simulate_bit(cfg, ua, ub);
    EXPECT_LE(kirchhoff_residual(cfg, ua, ub, wire), 1e-12);
    const auto e = empirical_moments(wire);
    u.push_back(e.msq_u);
    i.push_back(e.msq_i);
    pw.push_back(e.p_ab);
  }
  const auto m = analytic_moments(cfg);
  const auto su = summarize(u), si = summarize(i), sp = summarize(pw);
  EXPECT_LE(std::abs(su.mean - m.msq_u), 4.0 * su.stderr_mean);
  EXPECT_LE(std::abs(si.mean - m.msq_i), 4.0 * si.stderr_mean);
  EXPECT_LE(std::abs(sp.mean - m.p_ab), 4.0 * sp.stderr_mean);
}

TEST(Circuit, RejectsInvalidLoops) {
  EXPECT_THROW(LoopConfig({0.0, 1.0, 1.0, 1.0}).validate(), ConfigError);
  EXPECT_THROW(LoopConfig({1.0, -1.0, 1.0, 1.0}).validate(), DomainError);
}
