#include "kljn/circuit.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "kljn/error.hpp"
#include "kljn/stats.hpp"

namespace kljn {

void LoopConfig::validate() const {
  if (!(r_a > 0.0) || !(r_b > 0.0)) {
    throw ConfigError(fmt::format("loop resistors must be positive (r_a={}, r_b={})", r_a, r_b));
  }
  if (!(e_a >= 0.0) || !(e_b >= 0.0)) {
    throw DomainError(fmt::format("loop intensities must be >= 0 (e_a={}, e_b={})", e_a, e_b));
  }
}

WirePair simulate_bit(const LoopConfig& cfg, const Waveform& u_a, const Waveform& u_b) {
  cfg.validate();
  u_a.validate();
  u_b.validate();
  if (u_a.size() != u_b.size() || u_a.dt != u_b.dt) {
    throw ConfigError(fmt::format("source waveforms differ in shape ({} @ {} s vs {} @ {} s)",
                                  u_a.size(), u_a.dt, u_b.size(), u_b.dt));
  }
  const std::size_t n = u_a.size();
  const double r_sum = cfg.r_a + cfg.r_b;
  std::vector<double> u(n), i(n);
  for (std::size_t k = 0; k < n; ++k) {
    i[k] = (u_a[k] - u_b[k]) / r_sum;
    u[k] = u_a[k] - i[k] * cfg.r_a;
  }
  return {Waveform(std::move(u), u_a.dt), Waveform(std::move(i), u_a.dt)};
}

Moments analytic_moments(const LoopConfig& cfg) {
  cfg.validate();
  const double s2 = (cfg.r_a + cfg.r_b) * (cfg.r_a + cfg.r_b);
  return {
      (cfg.e_a * cfg.r_b * cfg.r_b + cfg.e_b * cfg.r_a * cfg.r_a) / s2,
      (cfg.e_a + cfg.e_b) / s2,
      (cfg.e_a * cfg.r_b - cfg.e_b * cfg.r_a) / s2,
  };
}

double conditional_msq_at_zero(const Moments& m) {
  if (!(m.msq_u > 0.0) || !(m.msq_i > 0.0)) {
    throw DomainError("conditional mean square needs positive voltage and current variance");
  }
  const double rho_sq = m.p_ab * m.p_ab / (m.msq_u * m.msq_i);
  return m.msq_i * (1.0 - rho_sq);
}

Moments empirical_moments(const WirePair& wire) {
  CompensatedSum uu, ii, ui;
  const std::size_t n = wire.u_w.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double u = wire.u_w[k];
    const double i = wire.i_w[k];
    uu.add(u * u);
    ii.add(i * i);
    ui.add(u * i);
  }
  const double inv = 1.0 / static_cast<double>(n);
  return {uu.value() * inv, ii.value() * inv, ui.value() * inv};
}

double kirchhoff_residual(const LoopConfig& cfg, const Waveform& u_a, const Waveform& u_b,
                          const WirePair& wire) {
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t k = 0; k < wire.u_w.size(); ++k) {
    const double u = wire.u_w[k];
    const double i = wire.i_w[k];
    worst = std::max({worst, std::abs(u - (u_a[k] - i * cfg.r_a)),
                      std::abs(u - (u_b[k] + i * cfg.r_b))});
    scale = std::max({scale, std::abs(u_a[k]), std::abs(u_b[k]), std::abs(u)});
  }
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace kljn
