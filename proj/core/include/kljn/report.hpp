#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "kljn/harness.hpp"

namespace kljn {

// CSV writers. Table 1 columns are fixed:
//   scheme,bit,r_a_ohm,r_b_ohm,msq_u_v2,msq_i_a2,p_ab_w,msq_i_zc_a2,source
void write_table1_csv(const Table1& t, std::ostream& os);
void write_table2_csv(const Table2& t, std::ostream& os);
// scheme,statistic,bit,bin,lower,upper,count
void write_fig2_histograms_csv(const Fig2& f, std::ostream& os);
void write_fig2_summary_csv(const Fig2& f, std::ostream& os);

std::string table1_json(const Table1& t);
std::string table2_json(const Table2& t);

// Experiment configuration as a JSON object. Recognized keys:
//   schemes (list of preset names or scheme objects), seed, runs,
//   sample_rate, bandwidth, bit_duration, mode, tones, sampling,
//   normalize, direction, calibration_bits, eval_bits, batches,
//   histogram_bins, out, format (list of "csv"/"json").
// Scheme objects: {name, kind, r_ha, r_la, r_hb, r_lb, reference_e_la,
//   e_hb_anchor, levels: {e_ha, e_la, e_hb, e_lb}}.
// Keys absent from `text` keep their value from `base`.
ExperimentSpec apply_config_json(const std::string& text, ExperimentSpec base);

// Fully resolved configuration (everything except the worker count, which
// does not affect results).
std::string resolved_config_json(const ExperimentSpec& spec);

// Writes `content` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace kljn
