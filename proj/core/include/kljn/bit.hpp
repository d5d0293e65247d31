#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "kljn/crossing.hpp"
#include "kljn/schemes.hpp"

namespace kljn {

// Everything observable on the wire during one bit period.
struct BitObservables {
  Arrangement arrangement = Arrangement::kLH;
  double msq_u = 0.0;   // V^2
  double msq_i = 0.0;   // A^2
  double p_inst = 0.0;  // W, bit mean of U_w I_w
  CrossingStat i_at_u_zero;  // I_w sampled at U_w crossings
  CrossingStat u_at_i_zero;  // U_w sampled at I_w crossings
  double kirchhoff_residual = 0.0;

  std::optional<double> msq_i_at_u_zc() const {
    return i_at_u_zero.valid() ? std::optional(i_at_u_zero.msq_conditional) : std::nullopt;
  }
  std::optional<double> msq_u_at_i_zc() const {
    return u_at_i_zero.valid() ? std::optional(u_at_i_zero.msq_conditional) : std::nullopt;
  }
};

// Per-run settings shared by all bits of one scheme.
struct BitSetup {
  SchemeDef scheme;
  NoiseLevels levels;
  SimParams params;
  SamplingMode sampling = SamplingMode::kSampleAfter;
};

// Source streams: Alice draws from (bit, Alice, her connected role), Bob
// from (bit, Bob, his connected role).
StreamId source_stream(Purpose purpose, std::uint64_t bit, Party party, Arrangement a);

// Synthesizes both connected sources, closes the loop and reduces the bit.
BitObservables observe_bit(const BitSetup& setup, Arrangement a, Purpose purpose,
                           std::uint64_t bit);

// Bits 0..count-1 of one arrangement, stored in bit-index order.
std::vector<BitObservables> observe_bits(const BitSetup& setup, Arrangement a, Purpose purpose,
                                         std::size_t count, unsigned workers);

}  // namespace kljn
