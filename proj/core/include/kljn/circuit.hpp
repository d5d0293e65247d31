#pragma once

#include "kljn/noise.hpp"

namespace kljn {

// One closed loop: Alice's connected resistor and source intensity, Bob's
// connected resistor and source intensity.
struct LoopConfig {
  double r_a = 0.0;  // Ohm
  double e_a = 0.0;  // V^2
  double r_b = 0.0;  // Ohm
  double e_b = 0.0;  // V^2

  void validate() const;
};

struct WirePair {
  Waveform u_w;  // V
  Waveform i_w;  // A, positive from Alice into the wire toward Bob
};

// Second moments of the wire process. p_ab > 0 means net power flows
// from Alice to Bob.
struct Moments {
  double msq_u = 0.0;  // V^2
  double msq_i = 0.0;  // A^2
  double p_ab = 0.0;   // W
};

// Loop equations of the series circuit:
//   I_w = (U_A - U_B) / (R_A + R_B),  U_w = U_A - I_w R_A.
// Only the resistors of `cfg` are used; the intensities are already baked
// into the source waveforms.
WirePair simulate_bit(const LoopConfig& cfg, const Waveform& u_a, const Waveform& u_b);

// Exact moments for independent zero-mean sources:
//   <U_w^2> = (e_a r_b^2 + e_b r_a^2) / (r_a + r_b)^2
//   <I_w^2> = (e_a + e_b) / (r_a + r_b)^2
//   P_AB    = (e_a r_b - e_b r_a) / (r_a + r_b)^2
Moments analytic_moments(const LoopConfig& cfg);

// E[I^2 | U = 0] = msq_i (1 - rho^2) for jointly Gaussian zero-mean (U, I),
// rho = p_ab / sqrt(msq_u msq_i). Throws DomainError on zero variance.
double conditional_msq_at_zero(const Moments& m);

// Time-averaged moments of one simulated bit.
Moments empirical_moments(const WirePair& wire);

// Largest sample-wise Kirchhoff residual
//   max(|u_w - (u_a - i_w r_a)|, |u_w - (u_b + i_w r_b)|)
// divided by the largest source or wire voltage magnitude (1 when all are 0).
double kirchhoff_residual(const LoopConfig& cfg, const Waveform& u_a, const Waveform& u_b,
                          const WirePair& wire);

}  // namespace kljn
