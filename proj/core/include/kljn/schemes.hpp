#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kljn/circuit.hpp"

namespace kljn {

enum class SchemeKind { kKljn, kVmg, kFck1, kExplicit };

std::string_view to_string(SchemeKind kind);

// Mean-square intensities of U_{H,A}, U_{L,A}, U_{H,B}, U_{L,B}.
struct NoiseLevels {
  double e_ha = 0.0;
  double e_la = 0.0;
  double e_hb = 0.0;
  double e_lb = 0.0;

  void validate() const;
};

// Four resistors of a scheme. "High"/"low" are labels; only r_h >= r_l
// within a party is enforced.
struct SchemeDef {
  std::string name;
  SchemeKind kind = SchemeKind::kExplicit;
  double r_ha = 0.0, r_la = 0.0;  // Alice, Ohm
  double r_hb = 0.0, r_lb = 0.0;  // Bob, Ohm
  double reference_e_la = 1.0;    // V^2, free-scale anchor
  // VMG: the free intensity e_hb. EXPLICIT: the full level set.
  std::optional<double> e_hb_anchor;
  std::optional<NoiseLevels> explicit_levels;

  void validate() const;
};

enum class Arrangement { kLH, kHL };

std::string_view to_string(Arrangement a);
Arrangement other(Arrangement a);

// Equilibrium levels e_i = c r_i for both parties.
NoiseLevels kljn_levels(double r_h, double r_l, double c);

// Inverts analytic_moments: the (e_a, e_b) pair that reproduces
// (msq_u, msq_i) on the loop (r_a, r_b). When r_a == r_b the system is
// singular; pass `anchor_e_a` to fix e_a and put the remainder on e_b.
std::pair<double, double> levels_from_observables(double r_a, double r_b, double msq_u,
                                                  double msq_i,
                                                  std::optional<double> anchor_e_a = {});

struct VmgSolution {
  NoiseLevels levels;
  double delta_msq_u = 0.0;  // |<U_w^2>_LH - <U_w^2>_HL|
  double delta_msq_i = 0.0;
  double p_ab_lh = 0.0;
  double p_ab_hl = 0.0;
};

// Fixes e_la = reference_e_la and e_hb (anchor, else the definition's
// preset) and solves e_ha, e_lb so that both wire mean squares agree
// across LH and HL.
VmgSolution vmg_levels(const SchemeDef& def, std::optional<double> e_hb_anchor = {});

// Product rule r_ha r_lb = r_la r_hb solved for r_hb.
double fck1_fourth_resistor(double r_ha, double r_la, double r_lb);

// Each arrangement is internally at equilibrium: LH at c1 = e_la / r_la,
// HL at c2 = c1 (r_ha + r_lb) / (r_la + r_hb).
NoiseLevels fck1_levels(const SchemeDef& def);

// Dispatches on def.kind.
NoiseLevels solve_levels(const SchemeDef& def);

// LH connects (r_la, e_la) against (r_hb, e_hb); HL connects (r_ha, e_ha)
// against (r_lb, e_lb).
LoopConfig arrangement_config(const SchemeDef& def, const NoiseLevels& levels, Arrangement a);

// Shipped presets: "kljn", "vmg1", "vmg2", "vmg3", "fck1".
const std::vector<std::string>& preset_names();
SchemeDef preset(std::string_view name);

}  // namespace kljn
