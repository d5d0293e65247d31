#include "kljn/schemes.hpp"

#include <cmath>

#include <fmt/format.h>

#include "kljn/error.hpp"

namespace kljn {
namespace {

bool relatively_equal(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kKljn: return "KLJN";
    case SchemeKind::kVmg: return "VMG";
    case SchemeKind::kFck1: return "FCK1";
    case SchemeKind::kExplicit: return "EXPLICIT";
  }
  return "unknown";
}

std::string_view to_string(Arrangement a) { return a == Arrangement::kLH ? "LH" : "HL"; }

Arrangement other(Arrangement a) {
  return a == Arrangement::kLH ? Arrangement::kHL : Arrangement::kLH;
}

void NoiseLevels::validate() const {
  if (!(e_ha >= 0.0) || !(e_la >= 0.0) || !(e_hb >= 0.0) || !(e_lb >= 0.0)) {
    throw DomainError(
        fmt::format("noise levels must be >= 0 (e_ha={}, e_la={}, e_hb={}, e_lb={})", e_ha,
                    e_la, e_hb, e_lb));
  }
}

void SchemeDef::validate() const {
  if (!(r_ha > 0.0) || !(r_la > 0.0) || !(r_hb > 0.0) || !(r_lb > 0.0)) {
    throw ConfigError(fmt::format("scheme '{}': all resistances must be positive", name));
  }
  if (r_ha < r_la || r_hb < r_lb) {
    throw ConfigError(fmt::format("scheme '{}': high resistor below low resistor", name));
  }
  if (!(reference_e_la >= 0.0)) {
    throw DomainError(fmt::format("scheme '{}': negative reference intensity", name));
  }
  if (kind == SchemeKind::kFck1 && !relatively_equal(r_ha * r_lb, r_la * r_hb, 1e-9)) {
    throw ConfigError(fmt::format(
        "scheme '{}': FCK1 needs r_ha * r_lb == r_la * r_hb ({} vs {})", name, r_ha * r_lb,
        r_la * r_hb));
  }
  if (kind == SchemeKind::kExplicit) {
    if (!explicit_levels) {
      throw ConfigError(fmt::format("scheme '{}': EXPLICIT needs levels", name));
    }
    explicit_levels->validate();
  }
}

NoiseLevels kljn_levels(double r_h, double r_l, double c) {
  if (!(c >= 0.0)) throw DomainError("per-ohm intensity must be >= 0");
  return {c * r_h, c * r_l, c * r_h, c * r_l};
}

std::pair<double, double> levels_from_observables(double r_a, double r_b, double msq_u,
                                                  double msq_i,
                                                  std::optional<double> anchor_e_a) {
  if (!(r_a > 0.0) || !(r_b > 0.0)) throw ConfigError("resistances must be positive");
  if (!(msq_u >= 0.0) || !(msq_i >= 0.0)) throw DomainError("observables must be >= 0");
  const double s2 = (r_a + r_b) * (r_a + r_b);
  // e_a + e_b = msq_i s2 and e_a r_b^2 + e_b r_a^2 = msq_u s2
  const double total = msq_i * s2;
  const double weighted = msq_u * s2;
  double e_a = 0.0;
  double e_b = 0.0;
  if (relatively_equal(r_a, r_b, 1e-12)) {
    if (!anchor_e_a) {
      throw DomainError(fmt::format(
          "singular inversion r_a == r_b == {}; an anchor for e_a is required", r_a));
    }
    if (!relatively_equal(weighted, total * r_a * r_a, 1e-9)) {
      throw DomainError("observables inconsistent with equal resistors (msq_u != msq_i r^2)");
    }
    e_a = *anchor_e_a;
    e_b = total - e_a;
  } else {
    e_b = (weighted - total * r_b * r_b) / (r_a * r_a - r_b * r_b);
    e_a = total - e_b;
  }
  // Absorb rounding noise around an exact zero.
  const double eps = 1e-12 * total;
  if (std::abs(e_a) <= eps) e_a = 0.0;
  if (std::abs(e_b) <= eps) e_b = 0.0;
  if (e_a < 0.0 || e_b < 0.0) {
    throw DomainError(fmt::format("infeasible observables: solution (e_a={}, e_b={})", e_a, e_b));
  }
  return {e_a, e_b};
}

VmgSolution vmg_levels(const SchemeDef& def, std::optional<double> e_hb_anchor) {
  if (def.kind != SchemeKind::kVmg) {
    throw ConfigError(fmt::format("scheme '{}' is not a VMG scheme", def.name));
  }
  def.validate();
  const std::optional<double> anchor = e_hb_anchor ? e_hb_anchor : def.e_hb_anchor;
  if (!anchor) {
    throw ConfigError(fmt::format("scheme '{}': VMG needs an e_hb anchor", def.name));
  }
  const double e_la = def.reference_e_la;

  // e_ha and e_lb are affine in e_hb; evaluate the inversion without the
  // sign check to find the feasible interval for error reporting.
  const double s_lh = (def.r_la + def.r_hb) * (def.r_la + def.r_hb);
  const double s_hl = (def.r_ha + def.r_lb) * (def.r_ha + def.r_lb);
  const auto raw_solution = [&](double e_hb) {
    const double total = (e_la + e_hb) / s_lh * s_hl;
    const double weighted =
        (e_la * def.r_hb * def.r_hb + e_hb * def.r_la * def.r_la) / s_lh * s_hl;
    const double e_lb = (weighted - total * def.r_lb * def.r_lb) /
                        (def.r_ha * def.r_ha - def.r_lb * def.r_lb);
    return std::pair{total - e_lb, e_lb};
  };
  if (relatively_equal(def.r_ha, def.r_lb, 1e-12)) {
    throw DomainError(fmt::format("scheme '{}': HL loop has r_ha == r_lb; the HL side "
                                  "cannot be solved from the LH moments",
                                  def.name));
  }
  const auto [e_ha, e_lb] = raw_solution(*anchor);
  if (e_ha < 0.0 || e_lb < 0.0 || *anchor < 0.0) {
    // Both components are affine in e_hb: x(t) = x0 + slope t.
    const auto [ha0, lb0] = raw_solution(0.0);
    const auto [ha1, lb1] = raw_solution(1.0);
    double lo = 0.0;
    double hi = INFINITY;
    for (const auto& [x0, slope] : {std::pair{ha0, ha1 - ha0}, std::pair{lb0, lb1 - lb0}}) {
      if (slope > 0.0) lo = std::max(lo, -x0 / slope);
      if (slope < 0.0) hi = std::min(hi, -x0 / slope);
      if (slope == 0.0 && x0 < 0.0) hi = -1.0;
    }
    throw DomainError(fmt::format(
        "scheme '{}': infeasible e_hb anchor {} (gives e_ha={}, e_lb={}); feasible interval "
        "[{}, {}]",
        def.name, *anchor, e_ha, e_lb, lo, hi));
  }

  VmgSolution out;
  out.levels = {e_ha, e_la, *anchor, e_lb};
  const auto lh = analytic_moments(arrangement_config(def, out.levels, Arrangement::kLH));
  const auto hl = analytic_moments(arrangement_config(def, out.levels, Arrangement::kHL));
  out.delta_msq_u = std::abs(lh.msq_u - hl.msq_u);
  out.delta_msq_i = std::abs(lh.msq_i - hl.msq_i);
  out.p_ab_lh = lh.p_ab;
  out.p_ab_hl = hl.p_ab;
  return out;
}

double fck1_fourth_resistor(double r_ha, double r_la, double r_lb) {
  if (!(r_ha > 0.0) || !(r_la > 0.0) || !(r_lb > 0.0)) {
    throw ConfigError("resistances must be positive");
  }
  return r_ha * r_lb / r_la;
}

NoiseLevels fck1_levels(const SchemeDef& def) {
  if (def.kind != SchemeKind::kFck1) {
    throw ConfigError(fmt::format("scheme '{}' is not an FCK1 scheme", def.name));
  }
  def.validate();
  const double c_lh = def.reference_e_la / def.r_la;
  const double c_hl = c_lh * (def.r_ha + def.r_lb) / (def.r_la + def.r_hb);
  return {c_hl * def.r_ha, c_lh * def.r_la, c_lh * def.r_hb, c_hl * def.r_lb};
}

NoiseLevels solve_levels(const SchemeDef& def) {
  def.validate();
  switch (def.kind) {
    case SchemeKind::kKljn: {
      if (def.r_ha != def.r_hb || def.r_la != def.r_lb) {
        throw ConfigError(fmt::format("scheme '{}': KLJN needs identical resistor pairs",
                                      def.name));
      }
      return kljn_levels(def.r_ha, def.r_la, def.reference_e_la / def.r_la);
    }
    case SchemeKind::kVmg: return vmg_levels(def).levels;
    case SchemeKind::kFck1: return fck1_levels(def);
    case SchemeKind::kExplicit: return *def.explicit_levels;
  }
  throw ConfigError("unknown scheme kind");
}

LoopConfig arrangement_config(const SchemeDef& def, const NoiseLevels& levels, Arrangement a) {
  if (a == Arrangement::kLH) return {def.r_la, levels.e_la, def.r_hb, levels.e_hb};
  return {def.r_ha, levels.e_ha, def.r_lb, levels.e_lb};
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"kljn", "vmg1", "vmg2", "vmg3", "fck1"};
  return names;
}

SchemeDef preset(std::string_view name) {
  SchemeDef d;
  d.name = std::string(name);
  d.reference_e_la = 1.0;
  if (name == "kljn") {
    d.kind = SchemeKind::kKljn;
    d.r_ha = d.r_hb = 10e3;
    d.r_la = d.r_lb = 1e3;
  } else if (name == "vmg1") {
    d.kind = SchemeKind::kVmg;
    d.r_la = 100.0;
    d.r_ha = 16.7e3;
    d.r_lb = 278.0;
    d.r_hb = 16.7e3;
    d.e_hb_anchor = 87.6;
  } else if (name == "vmg2") {
    d.kind = SchemeKind::kVmg;
    d.r_la = 278.0;
    d.r_ha = 46.4e3;
    d.r_lb = 100.0;
    d.r_hb = 278.0;
    d.e_hb_anchor = 0.48;
  } else if (name == "vmg3") {
    d.kind = SchemeKind::kVmg;
    d.r_la = 100.0;
    d.r_ha = 360e3;
    d.r_lb = 2.2e3;
    d.r_hb = 6e3;
    d.e_hb_anchor = 1.76;
  } else if (name == "fck1") {
    d.kind = SchemeKind::kFck1;
    d.r_la = 10e3;
    d.r_ha = 100e3;
    d.r_lb = 1e3;
    d.r_hb = fck1_fourth_resistor(d.r_ha, d.r_la, d.r_lb);
  } else {
    throw ConfigError(fmt::format("unknown scheme preset '{}'", name));
  }
  return d;
}

}  // namespace kljn
