// kljnlab: reproduce zero-crossing attack statistics on KLJN-family key
// exchangers.
//
//   kljnlab levels  --scheme vmg2
//   kljnlab table1  --runs 1000 --out out/
//   kljnlab table2  --direction voltage_at_current_zero
//   kljnlab fig2    --bins 50
//   kljnlab sweep   --workers 4
//
// Exit status: 0 all hard invariants hold, 1 an invariant failed,
// 2 configuration error, 3 runtime failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "kljn/error.hpp"
#include "kljn/harness.hpp"
#include "kljn/report.hpp"

namespace {

struct Overrides {
  std::optional<std::string> config;
  std::vector<std::string> schemes;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<double> sample_rate;
  std::optional<double> bandwidth;
  std::optional<double> bit_duration;
  std::optional<std::string> mode;
  std::optional<int> tones;
  std::optional<std::string> sampling;
  bool normalize = false;
  std::optional<std::string> direction;
  std::optional<std::size_t> calibration_bits;
  std::optional<std::size_t> eval_bits;
  std::optional<std::size_t> batches;
  std::optional<std::size_t> bins;
  std::optional<std::string> out;
  std::vector<std::string> formats;
  unsigned workers = 1;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw kljn::ConfigError(fmt::format("cannot read config '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

kljn::ExperimentSpec resolve(const Overrides& o) {
  auto spec = kljn::ExperimentSpec::defaults();
  if (o.config) spec = kljn::apply_config_json(read_text(*o.config), spec);
  if (!o.schemes.empty()) {
    spec.schemes.clear();
    for (const auto& name : o.schemes) spec.schemes.push_back(kljn::preset(name));
  }
  auto& p = spec.params;
  if (o.seed) p.master_seed = *o.seed;
  if (o.sample_rate) p.sample_rate = *o.sample_rate;
  if (o.bandwidth) p.bandwidth = *o.bandwidth;
  if (o.bit_duration) p.bit_duration = *o.bit_duration;
  if (o.mode) p.synthesis_mode = kljn::parse_synthesis_mode(*o.mode);
  if (o.tones) p.tones = *o.tones;
  if (o.normalize) p.normalize_per_bit = true;
  auto& a = spec.attack;
  if (o.sampling) a.sampling = kljn::parse_sampling_mode(*o.sampling);
  if (o.direction) a.direction = kljn::parse_direction(*o.direction);
  if (o.calibration_bits) a.n_calibration_bits = *o.calibration_bits;
  if (o.eval_bits) a.n_eval_bits = *o.eval_bits;
  if (o.batches) a.n_batches = *o.batches;
  if (o.runs) spec.runs = *o.runs;
  if (o.bins) spec.histogram_bins = *o.bins;
  if (o.out) spec.out_dir = *o.out;
  if (!o.formats.empty()) {
    spec.write_csv = spec.write_json = false;
    for (const auto& f : o.formats) {
      if (f == "csv") {
        spec.write_csv = true;
      } else if (f == "json") {
        spec.write_json = true;
      } else {
        throw kljn::ConfigError(fmt::format("unknown output format '{}'", f));
      }
    }
  }
  spec.workers = o.workers;
  spec.validate();
  return spec;
}

template <class Fn>
std::string render(Fn&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

void echo_config(const kljn::ExperimentSpec& spec) {
  kljn::write_file(spec.out_dir / "config.resolved.json", kljn::resolved_config_json(spec));
}

int cmd_levels(const kljn::ExperimentSpec& spec) {
  for (const auto& s : spec.schemes) {
    const auto levels = kljn::solve_levels(s);
    fmt::print("{} ({})\n", s.name, kljn::to_string(s.kind));
    fmt::print("  resistors  r_ha={:.6g} r_la={:.6g} r_hb={:.6g} r_lb={:.6g} Ohm\n", s.r_ha,
               s.r_la, s.r_hb, s.r_lb);
    fmt::print("  levels     e_ha={:.6g} e_la={:.6g} e_hb={:.6g} e_lb={:.6g} V^2\n",
               levels.e_ha, levels.e_la, levels.e_hb, levels.e_lb);
    for (const auto a : {kljn::Arrangement::kLH, kljn::Arrangement::kHL}) {
      const auto cfg = kljn::arrangement_config(s, levels, a);
      const auto m = kljn::analytic_moments(cfg);
      fmt::print("  {}  R_A={:<8.6g} R_B={:<8.6g} <U_w^2>={:.6g} V^2  <I_w^2>={:.6g} A^2  "
                 "P_AB={:.6g} W\n",
                 kljn::to_string(a), cfg.r_a, cfg.r_b, m.msq_u, m.msq_i, m.p_ab);
    }
    if (s.kind == kljn::SchemeKind::kVmg) {
      const auto v = kljn::vmg_levels(s);
      fmt::print("  matching   |dU^2|={:.3g} |dI^2|={:.3g}\n", v.delta_msq_u, v.delta_msq_i);
    }
  }
  return 0;
}

int cmd_table1(const kljn::ExperimentSpec& spec) {
  const auto t = kljn::run_table1(spec);
  echo_config(spec);
  if (spec.write_csv) {
    kljn::write_file(spec.out_dir / "table1.csv",
                     render([&](std::ostream& os) { kljn::write_table1_csv(t, os); }));
  }
  if (spec.write_json) kljn::write_file(spec.out_dir / "table1.json", kljn::table1_json(t) + "\n");
  write_table1_csv(t, std::cout);
  const bool ok = t.max_kirchhoff_residual <= 1e-12;
  if (!ok) fmt::print(stderr, "Kirchhoff residual {} exceeds 1e-12\n", t.max_kirchhoff_residual);
  return ok ? 0 : 1;
}

int cmd_table2(const kljn::ExperimentSpec& spec) {
  const auto t = kljn::run_table2(spec);
  echo_config(spec);
  if (spec.write_csv) {
    kljn::write_file(spec.out_dir / "table2.csv",
                     render([&](std::ostream& os) { kljn::write_table2_csv(t, os); }));
  }
  if (spec.write_json) kljn::write_file(spec.out_dir / "table2.json", kljn::table2_json(t) + "\n");
  write_table2_csv(t, std::cout);
  fmt::print("leak ordering: {}\n", t.leak_ordering_ok ? "ok" : "violated");
  bool ok = t.nulls_ok() && t.max_kirchhoff_residual <= 1e-12;
  if (!t.nulls_ok()) fmt::print(stderr, "null-leak invariant failed for an equilibrium scheme\n");
  return ok ? 0 : 1;
}

int cmd_fig2(const kljn::ExperimentSpec& spec) {
  const auto f = kljn::run_fig2(spec);
  echo_config(spec);
  kljn::write_file(spec.out_dir / "fig2_histograms.csv",
                   render([&](std::ostream& os) { kljn::write_fig2_histograms_csv(f, os); }));
  kljn::write_file(spec.out_dir / "fig2_summary.csv",
                   render([&](std::ostream& os) { kljn::write_fig2_summary_csv(f, os); }));
  kljn::write_fig2_summary_csv(f, std::cout);
  if (!f.conservation_ok()) fmt::print(stderr, "histogram counts do not sum to runs - dropped\n");
  return f.conservation_ok() ? 0 : 1;
}

int cmd_sweep(const kljn::ExperimentSpec& spec) {
  echo_config(spec);
  const auto path = spec.out_dir / "discrepancy_report.json";
  kljn::SweepOptions options;
  std::size_t done = 0;
  const std::size_t total = options.cells.size();
  options.on_progress = [&](const std::string& partial) {
    kljn::write_file(path, partial + "\n");
    fmt::print(stderr, "sweep: {}/{} cells\n", ++done, total);
  };
  const auto report = kljn::run_mode_sweep(spec, options);
  kljn::write_file(path, report.json + "\n");
  fmt::print("wrote {} (hard checks {})\n", path.string(), report.hard_checks_ok ? "ok" : "FAILED");
  return report.hard_checks_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KLJN zero-crossing attack laboratory"};
  app.require_subcommand(1);
  Overrides o;

  app.add_option("--config", o.config, "JSON experiment config; flags override its keys");
  app.add_option("--scheme", o.schemes, "Preset name(s): kljn, vmg1, vmg2, vmg3, fck1")
      ->delimiter(',');
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--runs", o.runs, "Bits per arrangement for ensembles and histograms");
  app.add_option("--sample-rate", o.sample_rate, "Sample rate [Hz]");
  app.add_option("--bandwidth", o.bandwidth, "Noise bandwidth [Hz]");
  app.add_option("--bit-duration", o.bit_duration, "Bit exchange period [s]");
  app.add_option("--mode", o.mode, "spectral_flat | filtered_white | multi_sine");
  app.add_option("--tones", o.tones, "Tone count for multi_sine");
  app.add_option("--sampling", o.sampling, "interpolate | sample_after");
  app.add_flag("--normalize", o.normalize, "Rescale every bit to its exact mean square");
  app.add_option("--direction", o.direction,
                 "current_at_voltage_zero | voltage_at_current_zero");
  app.add_option("--calibration-bits", o.calibration_bits, "Calibration bits per arrangement");
  app.add_option("--eval-bits", o.eval_bits, "Evaluation bits (even, >= 100)");
  app.add_option("--batches", o.batches, "Batches for the spread of p");
  app.add_option("--bins", o.bins, "Histogram bins");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--format", o.formats, "Output formats: csv, json")->delimiter(',');
  app.add_option("--workers", o.workers, "Worker threads (results do not depend on it)");

  auto* levels = app.add_subcommand("levels", "Print solved noise levels per scheme");
  auto* table1 = app.add_subcommand("table1", "Analytic and ensemble wire moments");
  auto* table2 = app.add_subcommand("table2", "Eavesdropper success probability");
  auto* fig2 = app.add_subcommand("fig2", "Per-bit statistic histograms");
  auto* sweep = app.add_subcommand("sweep", "Full synthesis/sampling mode sweep");
  for (auto* sub : {levels, table1, table2, fig2, sweep}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    const auto spec = resolve(o);
    if (levels->parsed()) return cmd_levels(spec);
    if (table1->parsed()) return cmd_table1(spec);
    if (table2->parsed()) return cmd_table2(spec);
    if (fig2->parsed()) return cmd_fig2(spec);
    if (sweep->parsed()) return cmd_sweep(spec);
  } catch (const kljn::ConfigError& e) {
    fmt::print(stderr, "configuration error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 3;
  }
  return 2;
}
