#include "kljn/report.hpp"

#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "kljn/error.hpp"

namespace kljn {
namespace {

using nlohmann::json;

std::string num(double v) { return fmt::format("{:.10g}", v); }

json scheme_to_json(const SchemeDef& s) {
  json j = {{"name", s.name},       {"kind", to_string(s.kind)}, {"r_ha", s.r_ha},
            {"r_la", s.r_la},       {"r_hb", s.r_hb},            {"r_lb", s.r_lb},
            {"reference_e_la", s.reference_e_la}};
  if (s.e_hb_anchor) j["e_hb_anchor"] = *s.e_hb_anchor;
  if (s.explicit_levels) {
    const auto& l = *s.explicit_levels;
    j["levels"] = {{"e_ha", l.e_ha}, {"e_la", l.e_la}, {"e_hb", l.e_hb}, {"e_lb", l.e_lb}};
  }
  return j;
}

SchemeKind parse_kind(const std::string& text) {
  if (text == "KLJN" || text == "kljn") return SchemeKind::kKljn;
  if (text == "VMG" || text == "vmg") return SchemeKind::kVmg;
  if (text == "FCK1" || text == "fck1") return SchemeKind::kFck1;
  if (text == "EXPLICIT" || text == "explicit") return SchemeKind::kExplicit;
  throw ConfigError(fmt::format("unknown scheme kind '{}'", text));
}

SchemeDef scheme_from_json(const json& j) {
  if (j.is_string()) return preset(j.get<std::string>());
  SchemeDef s;
  s.name = j.at("name").get<std::string>();
  s.kind = parse_kind(j.at("kind").get<std::string>());
  s.r_ha = j.at("r_ha").get<double>();
  s.r_la = j.at("r_la").get<double>();
  s.r_hb = j.at("r_hb").get<double>();
  s.r_lb = j.at("r_lb").get<double>();
  s.reference_e_la = j.value("reference_e_la", 1.0);
  if (j.contains("e_hb_anchor")) s.e_hb_anchor = j["e_hb_anchor"].get<double>();
  if (j.contains("levels")) {
    const auto& l = j["levels"];
    s.explicit_levels = NoiseLevels{l.at("e_ha").get<double>(), l.at("e_la").get<double>(),
                                    l.at("e_hb").get<double>(), l.at("e_lb").get<double>()};
  }
  s.validate();
  return s;
}

}  // namespace

void write_table1_csv(const Table1& t, std::ostream& os) {
  os << "scheme,bit,r_a_ohm,r_b_ohm,msq_u_v2,msq_i_a2,p_ab_w,msq_i_zc_a2,source\n";
  for (const auto& r : t.rows) {
    fmt::print(os, "{},{},{},{},{},{},{},{},{}\n", r.scheme, to_string(r.bit), num(r.r_a),
               num(r.r_b), num(r.msq_u), num(r.msq_i), num(r.p_ab), num(r.msq_i_zc),
               r.analytic ? "analytic" : "ensemble");
  }
}

void write_table2_csv(const Table2& t, std::ostream& os) {
  os << "scheme,direction,r_a_lh_ohm,r_b_lh_ohm,r_a_hl_ohm,r_b_hl_ohm,p_ab_lh_w,p_ab_hl_w,"
        "p,sigma,threshold,orientation,usable_bits,dropped_bits,reference_p,p_deviation,"
        "null_expected,null_ok\n";
  for (const auto& r : t.rows) {
    const auto& a = r.attack;
    fmt::print(os, "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.scheme,
               to_string(a.direction), num(r.r_a_lh), num(r.r_b_lh), num(r.r_a_hl),
               num(r.r_b_hl), num(r.p_ab_lh), num(r.p_ab_hl), num(a.p), num(a.sigma),
               num(a.threshold), a.orientation, a.usable_bits, a.dropped_bits,
               r.reference_p ? num(*r.reference_p) : "",
               r.reference_p ? num(a.p - *r.reference_p) : "", r.null_expected ? 1 : 0,
               r.null_ok ? 1 : 0);
  }
}

void write_fig2_histograms_csv(const Fig2& f, std::ostream& os) {
  os << "scheme,statistic,bit,bin,lower,upper,count\n";
  for (const auto& h : f.histograms) {
    for (std::size_t b = 0; b < h.hist.counts.size(); ++b) {
      fmt::print(os, "{},{},{},{},{},{},{}\n", h.scheme, to_string(h.statistic),
                 to_string(h.bit), b, num(h.hist.edges[b]), num(h.hist.edges[b + 1]),
                 h.hist.counts[b]);
    }
  }
}

void write_fig2_summary_csv(const Fig2& f, std::ostream& os) {
  os << "scheme,statistic,n_lh,n_hl,dropped_lh,dropped_hl,mean_lh,mean_hl,ks_statistic,"
        "ks_p_value,separation\n";
  for (const auto& s : f.summaries) {
    fmt::print(os, "{},{},{},{},{},{},{},{},{},{},{}\n", s.scheme, to_string(s.statistic),
               s.n_lh, s.n_hl, s.dropped_lh, s.dropped_hl, num(s.mean_lh), num(s.mean_hl),
               num(s.ks.statistic), num(s.ks.p_value), num(s.separation));
  }
}

std::string table1_json(const Table1& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json j = {{"scheme", r.scheme}, {"bit", to_string(r.bit)}, {"r_a_ohm", r.r_a},
              {"r_b_ohm", r.r_b},   {"msq_u_v2", r.msq_u},    {"msq_i_a2", r.msq_i},
              {"p_ab_w", r.p_ab},   {"msq_i_zc_a2", r.msq_i_zc},
              {"source", r.analytic ? "analytic" : "ensemble"}};
    if (!r.analytic) {
      j["stderr"] = {{"msq_u_v2", r.se_msq_u},
                     {"msq_i_a2", r.se_msq_i},
                     {"p_ab_w", r.se_p_ab},
                     {"msq_i_zc_a2", r.se_msq_i_zc}};
      j["dropped_bits"] = r.dropped;
    }
    rows.push_back(std::move(j));
  }
  return json{{"rows", rows}, {"max_kirchhoff_residual", t.max_kirchhoff_residual}}.dump(2);
}

std::string table2_json(const Table2& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json j = {{"scheme", r.scheme},
              {"direction", to_string(r.attack.direction)},
              {"p_ab_lh_w", r.p_ab_lh},
              {"p_ab_hl_w", r.p_ab_hl},
              {"p", r.attack.p},
              {"sigma", r.attack.sigma},
              {"per_batch_p", r.attack.per_batch_p},
              {"threshold", r.attack.threshold},
              {"orientation", r.attack.orientation},
              {"usable_bits", r.attack.usable_bits},
              {"dropped_bits", r.attack.dropped_bits},
              {"null_expected", r.null_expected},
              {"null_ok", r.null_ok}};
    if (r.reference_p) j["reference_p"] = *r.reference_p;
    rows.push_back(std::move(j));
  }
  return json{{"rows", rows},
              {"leak_ordering_ok", t.leak_ordering_ok},
              {"max_kirchhoff_residual", t.max_kirchhoff_residual}}
      .dump(2);
}

ExperimentSpec apply_config_json(const std::string& text, ExperimentSpec base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("malformed config: {}", e.what()));
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    if (j.contains("schemes")) {
      base.schemes.clear();
      for (const auto& s : j["schemes"]) base.schemes.push_back(scheme_from_json(s));
    }
    auto& p = base.params;
    if (j.contains("seed")) p.master_seed = j["seed"].get<std::uint64_t>();
    if (j.contains("sample_rate")) p.sample_rate = j["sample_rate"].get<double>();
    if (j.contains("bandwidth")) p.bandwidth = j["bandwidth"].get<double>();
    if (j.contains("bit_duration")) p.bit_duration = j["bit_duration"].get<double>();
    if (j.contains("mode")) p.synthesis_mode = parse_synthesis_mode(j["mode"].get<std::string>());
    if (j.contains("tones")) p.tones = j["tones"].get<int>();
    if (j.contains("normalize")) p.normalize_per_bit = j["normalize"].get<bool>();
    auto& a = base.attack;
    if (j.contains("sampling")) a.sampling = parse_sampling_mode(j["sampling"].get<std::string>());
    if (j.contains("direction")) a.direction = parse_direction(j["direction"].get<std::string>());
    if (j.contains("calibration_bits")) a.n_calibration_bits = j["calibration_bits"].get<std::size_t>();
    if (j.contains("eval_bits")) a.n_eval_bits = j["eval_bits"].get<std::size_t>();
    if (j.contains("batches")) a.n_batches = j["batches"].get<std::size_t>();
    if (j.contains("runs")) base.runs = j["runs"].get<std::size_t>();
    if (j.contains("histogram_bins")) base.histogram_bins = j["histogram_bins"].get<std::size_t>();
    if (j.contains("out")) base.out_dir = j["out"].get<std::string>();
    if (j.contains("format")) {
      base.write_csv = base.write_json = false;
      for (const auto& f : j["format"]) {
        const auto name = f.get<std::string>();
        if (name == "csv") {
          base.write_csv = true;
        } else if (name == "json") {
          base.write_json = true;
        } else {
          throw ConfigError(fmt::format("unknown output format '{}'", name));
        }
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("bad config value: {}", e.what()));
  }
  return base;
}

std::string resolved_config_json(const ExperimentSpec& spec) {
  json schemes = json::array();
  for (const auto& s : spec.schemes) schemes.push_back(scheme_to_json(s));
  json formats = json::array();
  if (spec.write_csv) formats.push_back("csv");
  if (spec.write_json) formats.push_back("json");
  const auto& p = spec.params;
  const auto& a = spec.attack;
  json j = {{"schemes", schemes},
            {"seed", p.master_seed},
            {"sample_rate", p.sample_rate},
            {"bandwidth", p.bandwidth},
            {"bit_duration", p.bit_duration},
            {"mode", to_string(p.synthesis_mode)},
            {"tones", p.tones},
            {"normalize", p.normalize_per_bit},
            {"sampling", to_string(a.sampling)},
            {"direction", to_string(a.direction)},
            {"calibration_bits", a.n_calibration_bits},
            {"eval_bits", a.n_eval_bits},
            {"batches", a.n_batches},
            {"runs", spec.runs},
            {"histogram_bins", spec.histogram_bins},
            {"out", spec.out_dir.string()},
            {"format", formats},
            {"p_ab_sign", "positive = net power from Alice to Bob"}};
  return j.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  out << content;
  if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path.string()));
}

}  // namespace kljn
