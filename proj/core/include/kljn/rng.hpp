#pragma once

#include <cstdint>
#include <random>

namespace kljn {

enum class Party : std::uint8_t { kAlice = 0, kBob = 1 };
enum class Role : std::uint8_t { kHigh = 0, kLow = 1 };

// What a random stream is used for. Different purposes never share
// randomness, so calibration bits are independent of evaluation bits.
enum class Purpose : std::uint8_t {
  kEnsemble = 0,
  kCalibration = 1,
  kEvaluation = 2,
  kLabels = 3,
  kAuxiliary = 4,
};

// Structured substream label. Every source waveform in a run is keyed by
// (purpose, bit index, party, role); the master seed plus this label fully
// determine the randomness, independent of scheduling.
struct StreamId {
  Purpose purpose = Purpose::kEnsemble;
  std::uint64_t bit = 0;
  Party party = Party::kAlice;
  Role role = Role::kLow;

  friend bool operator==(const StreamId&, const StreamId&) = default;
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Counter-style key derivation: hashes the master seed and every field of
// the label through a SplitMix64 chain.
std::uint64_t derive_key(std::uint64_t master_seed, const StreamId& id) noexcept;

using Engine = std::mt19937_64;

Engine make_engine(std::uint64_t master_seed, const StreamId& id);

}  // namespace kljn
