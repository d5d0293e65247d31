#include "kljn/bit.hpp"

#include "kljn/circuit.hpp"
#include "kljn/parallel.hpp"

namespace kljn {

StreamId source_stream(Purpose purpose, std::uint64_t bit, Party party, Arrangement a) {
  // LH: Alice low, Bob high. HL: the converse.
  const bool alice = party == Party::kAlice;
  const bool low = (a == Arrangement::kLH) == alice;
  return {purpose, bit, party, low ? Role::kLow : Role::kHigh};
}

BitObservables observe_bit(const BitSetup& setup, Arrangement a, Purpose purpose,
                           std::uint64_t bit) {
  const LoopConfig cfg = arrangement_config(setup.scheme, setup.levels, a);
  const double bw = setup.params.bandwidth;
  const Waveform u_a = synthesize({cfg.e_a, bw}, setup.params,
                                  source_stream(purpose, bit, Party::kAlice, a));
  const Waveform u_b = synthesize({cfg.e_b, bw}, setup.params,
                                  source_stream(purpose, bit, Party::kBob, a));
  const WirePair wire = simulate_bit(cfg, u_a, u_b);
  const Moments m = empirical_moments(wire);

  BitObservables obs;
  obs.arrangement = a;
  obs.msq_u = m.msq_u;
  obs.msq_i = m.msq_i;
  obs.p_inst = m.p_ab;
  obs.i_at_u_zero = sample_at_crossings(wire.u_w, wire.i_w, setup.sampling);
  obs.u_at_i_zero = sample_at_crossings(wire.i_w, wire.u_w, setup.sampling);
  obs.kirchhoff_residual = kirchhoff_residual(cfg, u_a, u_b, wire);
  return obs;
}

std::vector<BitObservables> observe_bits(const BitSetup& setup, Arrangement a, Purpose purpose,
                                         std::size_t count, unsigned workers) {
  std::vector<BitObservables> out(count);
  parallel_for(count, workers, [&](std::size_t b) { out[b] = observe_bit(setup, a, purpose, b); });
  return out;
}

}  // namespace kljn
