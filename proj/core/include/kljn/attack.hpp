#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kljn/bit.hpp"

namespace kljn {

enum class Direction { kCurrentAtVoltageZero, kVoltageAtCurrentZero };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view text);

struct AttackConfig {
  Direction direction = Direction::kCurrentAtVoltageZero;
  std::size_t n_calibration_bits = 1000;  // per arrangement
  std::size_t n_eval_bits = 3000;         // balanced LH/HL
  std::size_t n_batches = 10;
  SamplingMode sampling = SamplingMode::kSampleAfter;

  // n_eval_bits even and >= 100, n_batches >= 2, n_calibration_bits >= 1.
  void validate() const;
};

// Midpoint threshold between the two calibration means. orientation is +1
// when HL has the larger mean statistic (ties resolve to +1).
struct Calibration {
  double threshold = 0.0;
  int orientation = 1;
  double mean_lh = 0.0;
  double mean_hl = 0.0;
  std::size_t dropped = 0;
};

struct AttackReport {
  Direction direction = Direction::kCurrentAtVoltageZero;
  double p = 0.0;
  double sigma = 0.0;  // sample std of per_batch_p
  double threshold = 0.0;
  int orientation = 1;
  std::size_t dropped_bits = 0;  // evaluation bits without a crossing
  std::size_t usable_bits = 0;
  std::vector<double> per_batch_p;
  Calibration calibration;
};

struct LabeledStatistic {
  Arrangement truth = Arrangement::kLH;
  std::optional<double> value;  // empty when the bit was dropped
};

std::optional<double> statistic(const BitObservables& bit, Direction d);

// Throws DegenerateError when either population is empty.
Calibration calibrate_from(std::span<const double> lh, std::span<const double> hl);

Arrangement guess(const Calibration& c, double value);

// p = mean of per-batch fractions correct over n_batches contiguous equal
// partitions of the evaluation sequence; dropped bits count in neither the
// numerator nor the denominator.
AttackReport score(const Calibration& c, std::span<const LabeledStatistic> eval,
                   std::size_t n_batches);

// n/2 LH and n/2 HL labels in a seeded Fisher-Yates order.
std::vector<Arrangement> balanced_labels(std::size_t n, std::uint64_t master_seed);

// Raw bits behind an attack. Both directions can be scored from one
// simulation since each bit records both crossing statistics.
struct AttackSimulation {
  std::vector<BitObservables> calibration_lh;
  std::vector<BitObservables> calibration_hl;
  std::vector<BitObservables> evaluation;
};

AttackSimulation simulate_attack(const SchemeDef& scheme, const SimParams& params,
                                 const AttackConfig& cfg, unsigned workers = 1);

Calibration calibrate(const AttackSimulation& sim, Direction d);
AttackReport evaluate(const AttackSimulation& sim, Direction d, std::size_t n_batches);

Calibration calibrate(const SchemeDef& scheme, const SimParams& params,
                      const AttackConfig& cfg, unsigned workers = 1);
AttackReport run_attack(const SchemeDef& scheme, const SimParams& params,
                        const AttackConfig& cfg, unsigned workers = 1);

}  // namespace kljn
