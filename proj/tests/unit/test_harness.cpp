#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "kljn/error.hpp"
#include "kljn/harness.hpp"
#include "kljn/report.hpp"

using namespace kljn;

namespace {

ExperimentSpec small(std::vector<std::string> names) {
  ExperimentSpec spec;
  for (const auto& n : names) spec.schemes.push_back(preset(n));
  spec.runs = 100;
  spec.attack.n_calibration_bits = 100;
  spec.attack.n_eval_bits = 200;
  return spec;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST(Harness, Table1CsvHeader) {
  std::ostringstream os;
  write_table1_csv(run_table1(small({"kljn"})), os);
  EXPECT_EQ(first_line(os.str()),
            "scheme,bit,r_a_ohm,r_b_ohm,msq_u_v2,msq_i_a2,p_ab_w,msq_i_zc_a2,source");
}

TEST(Harness, Table1HasAnalyticAndEnsembleRows) {
  const auto t = run_table1(small({"kljn", "vmg2"}));
  EXPECT_EQ(t.rows.size(), 8u);
  EXPECT_LE(t.max_kirchhoff_residual, 1e-12);
  for (const auto& r : t.rows) {
    if (r.analytic) continue;
    EXPECT_GT(r.se_msq_u, 0.0);
  }
}

TEST(Harness, ZeroIntensitySchemeGivesZeroRows) {
  ExperimentSpec spec = small({});
  SchemeDef quiet;
  quiet.name = "quiet";
  quiet.kind = SchemeKind::kExplicit;
  quiet.r_ha = quiet.r_hb = 1e4;
  quiet.r_la = quiet.r_lb = 1e3;
  quiet.explicit_levels = NoiseLevels{};
  spec.schemes = {quiet};
  const auto t = run_table1(spec);
  ASSERT_FALSE(t.rows.empty());
  for (const auto& r : t.rows) {
    EXPECT_EQ(r.msq_u, 0.0);
    EXPECT_EQ(r.msq_i, 0.0);
    EXPECT_EQ(r.p_ab, 0.0);
    EXPECT_EQ(r.msq_i_zc, 0.0);
  }
}

TEST(Harness, Fig2PairsShareEdgesAndConserveCounts) {
  const auto f = run_fig2(small({"kljn", "vmg1"}));
  EXPECT_TRUE(f.conservation_ok());
  ASSERT_EQ(f.histograms.size() % 2, 0u);
  for (std::size_t k = 0; k < f.histograms.size(); k += 2) {
    EXPECT_EQ(f.histograms[k].hist.edges, f.histograms[k + 1].hist.edges);
  }
  std::ostringstream os;
  write_fig2_histograms_csv(f, os);
  EXPECT_EQ(first_line(os.str()), "scheme,statistic,bit,bin,lower,upper,count");
}

TEST(Harness, Table2FlagsEquilibriumRows) {
  const auto t = run_table2(small({"kljn", "vmg3"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_TRUE(t.rows[0].null_expected);
  EXPECT_FALSE(t.rows[1].null_expected);
  EXPECT_TRUE(t.nulls_ok());
  ASSERT_TRUE(t.rows[1].reference_p.has_value());
  EXPECT_DOUBLE_EQ(*t.rows[1].reference_p, 0.6276);
}

TEST(Harness, ConfigOverride) {
  const auto spec = apply_config_json(
      R"({"runs": 250, "schemes": ["fck1"], "mode": "multi_sine", "tones": 7, "seed": 9})",
      ExperimentSpec::defaults());
  EXPECT_EQ(spec.runs, 250u);
  ASSERT_EQ(spec.schemes.size(), 1u);
  EXPECT_EQ(spec.schemes[0].name, "fck1");
  EXPECT_EQ(spec.params.synthesis_mode, SynthesisMode::kMultiSine);
  EXPECT_EQ(spec.params.tones, 7);
  EXPECT_EQ(spec.params.master_seed, 9u);
  EXPECT_EQ(spec.params.bandwidth, 500.0);
  const auto again = apply_config_json(resolved_config_json(spec), ExperimentSpec::defaults());
  EXPECT_EQ(resolved_config_json(again), resolved_config_json(spec));
  EXPECT_THROW(apply_config_json(R"({"mode": "pink"})", ExperimentSpec::defaults()), ConfigError);
}

TEST(Harness, OutputsIndependentOfWorkers) {
  auto spec = small({"vmg2", "fck1"});
  std::ostringstream a, b;
  write_table1_csv(run_table1(spec), a);
  spec.workers = 3;
  write_table1_csv(run_table1(spec), b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Harness, SweepGridCoversAllCells) {
  const auto grid = sweep_grid();
  EXPECT_EQ(grid.size(), 16u);
  std::set<std::string> labels;
  for (const auto& c : grid) labels.insert(c.label());
  EXPECT_EQ(labels.size(), 16u);
}

TEST(Harness, NullBand) {
  EXPECT_DOUBLE_EQ(null_band(3000), 0.03);
  EXPECT_GT(null_band(100), 0.1);
}
