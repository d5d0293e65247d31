#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kljn/attack.hpp"
#include "kljn/stats.hpp"

namespace kljn {

// Published values of one scheme, used as comparison targets.
struct ReferenceValues {
  double msq_u = 0.0;          // V^2
  double msq_i = 0.0;          // A^2
  double p_ab = 0.0;           // W
  double msq_i_zc_lh = 0.0;    // A^2
  double msq_i_zc_hl = 0.0;    // A^2
  double p = 0.5;
  double sigma = 0.0;
};

// Known for the five shipped presets, empty otherwise.
std::optional<ReferenceValues> reference_values(const std::string& scheme_name);

struct ExperimentSpec {
  std::vector<SchemeDef> schemes;  // defaults to every preset
  SimParams params;
  std::size_t runs = 1000;  // bits per arrangement
  AttackConfig attack;
  std::size_t histogram_bins = 50;
  std::filesystem::path out_dir = "out";
  bool write_csv = true;
  bool write_json = false;
  unsigned workers = 1;

  static ExperimentSpec defaults();
  // runs >= 100, histogram_bins >= 10, valid params/attack/schemes.
  void validate() const;
};

// Expected LH == HL wire-process laws: zero analytic power in both
// arrangements and matching mean squares.
bool is_equilibrium(const SchemeDef& scheme, const NoiseLevels& levels);

// |mean - target| <= 3 standard errors (+1e-9 |scale| for rounding).
bool within_3se(const Summary& s, double target, double scale);

// Half-width of the band around 0.5 that counts as "no leak" for n usable
// bits: three binomial standard errors.
double null_band(std::size_t usable_bits);

// `runs` bits of each arrangement on the ensemble substreams.
struct Ensemble {
  std::vector<BitObservables> lh;
  std::vector<BitObservables> hl;

  const std::vector<BitObservables>& of(Arrangement a) const {
    return a == Arrangement::kLH ? lh : hl;
  }
  double max_kirchhoff_residual() const;
};

Ensemble simulate_ensemble(const BitSetup& setup, std::size_t runs, unsigned workers);

enum class Observable { kMsqU, kMsqI, kPower, kMsqIAtUZero, kMsqUAtIZero };
std::string_view to_string(Observable o);

// Values of one observable over an arrangement's bits, bit-index order;
// crossing statistics skip bits without crossings (`dropped` counts them).
std::vector<double> collect(const std::vector<BitObservables>& bits, Observable o,
                            std::size_t* dropped = nullptr);

// ---- Table 1 ---------------------------------------------------------------

struct Table1Row {
  std::string scheme;
  Arrangement bit = Arrangement::kLH;
  double r_a = 0.0, r_b = 0.0;
  double msq_u = 0.0, msq_i = 0.0, p_ab = 0.0, msq_i_zc = 0.0;
  bool analytic = true;
  // Ensemble rows only.
  double se_msq_u = 0.0, se_msq_i = 0.0, se_p_ab = 0.0, se_msq_i_zc = 0.0;
  std::size_t dropped = 0;
};

struct Table1 {
  std::vector<Table1Row> rows;
  double max_kirchhoff_residual = 0.0;
};

// Analytic rows use the Gaussian conditional oracle for the crossing
// column (0 when the loop carries no noise).
Table1 run_table1(const ExperimentSpec& spec);

// ---- Table 2 ---------------------------------------------------------------

struct Table2Row {
  std::string scheme;
  double r_a_lh = 0.0, r_b_lh = 0.0, r_a_hl = 0.0, r_b_hl = 0.0;
  double p_ab_lh = 0.0, p_ab_hl = 0.0;
  AttackReport attack;
  std::optional<double> reference_p;
  bool null_expected = false;
  bool null_ok = true;  // only meaningful when null_expected
  bool leak_detected = false;
};

struct Table2 {
  std::vector<Table2Row> rows;
  double max_kirchhoff_residual = 0.0;
  // |p - 0.5| of every equilibrium row is strictly below every
  // non-equilibrium row, provided any non-equilibrium leak was detected.
  bool leak_ordering_ok = true;
  bool nulls_ok() const;
};

Table2 run_table2(const ExperimentSpec& spec);

// ---- Fig. 2 histograms -----------------------------------------------------

struct Fig2Histogram {
  std::string scheme;
  Observable statistic = Observable::kMsqU;
  Arrangement bit = Arrangement::kLH;
  Histogram hist;
  std::size_t dropped = 0;
};

struct Fig2Summary {
  std::string scheme;
  Observable statistic = Observable::kMsqU;
  std::size_t n_lh = 0, n_hl = 0, dropped_lh = 0, dropped_hl = 0;
  double mean_lh = 0.0, mean_hl = 0.0;
  KsResult ks;
  double separation = 0.0;  // |mean_hl - mean_lh| / pooled std
};

struct Fig2 {
  std::vector<Fig2Histogram> histograms;  // LH/HL pairs share edges
  std::vector<Fig2Summary> summaries;
  std::size_t runs = 0;
  bool conservation_ok() const;
};

Fig2 run_fig2(const ExperimentSpec& spec);

// ---- Mode sweep ------------------------------------------------------------

struct SweepCell {
  SynthesisMode synthesis = SynthesisMode::kSpectralFlat;
  int tones = 0;
  SamplingMode sampling = SamplingMode::kSampleAfter;
  bool normalize = false;
  std::string label() const;
};

// {spectral_flat, filtered_white, multi_sine(5), multi_sine(50)} x
// {interpolate, sample_after} x {normalize off, on}.
std::vector<SweepCell> sweep_grid();

inline constexpr const char* kReportSchemaVersion = "1.0";

struct SweepOptions {
  std::vector<SweepCell> cells = sweep_grid();
  // Called with the partial report after every finished cell.
  std::function<void(const std::string& json)> on_progress;
};

struct DiscrepancyReport {
  std::string json;  // full document, schema kReportSchemaVersion
  bool hard_checks_ok = true;
  std::size_t failed_cells = 0;
};

DiscrepancyReport run_mode_sweep(const ExperimentSpec& spec, const SweepOptions& options = {});

}  // namespace kljn
