#include "kljn/attack.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "kljn/error.hpp"
#include "kljn/parallel.hpp"
#include "kljn/stats.hpp"

namespace kljn {
namespace {

std::vector<double> usable(const std::vector<BitObservables>& bits, Direction d,
                           std::size_t& dropped) {
  std::vector<double> out;
  out.reserve(bits.size());
  for (const auto& b : bits) {
    if (auto v = statistic(b, d)) {
      out.push_back(*v);
    } else {
      ++dropped;
    }
  }
  return out;
}

BitSetup make_setup(const SchemeDef& scheme, const SimParams& params, const AttackConfig& cfg) {
  params.validate();
  cfg.validate();
  return {scheme, solve_levels(scheme), params, cfg.sampling};
}

}  // namespace

std::string_view to_string(Direction d) {
  return d == Direction::kCurrentAtVoltageZero ? "current_at_voltage_zero"
                                               : "voltage_at_current_zero";
}

Direction parse_direction(std::string_view text) {
  if (text == "current_at_voltage_zero") return Direction::kCurrentAtVoltageZero;
  if (text == "voltage_at_current_zero") return Direction::kVoltageAtCurrentZero;
  throw ConfigError(fmt::format("unknown attack direction '{}'", text));
}

void AttackConfig::validate() const {
  if (n_eval_bits < 100 || n_eval_bits % 2 != 0) {
    throw ConfigError(fmt::format("n_eval_bits must be even and >= 100, got {}", n_eval_bits));
  }
  if (n_batches < 2 || n_batches > n_eval_bits) {
    throw ConfigError(fmt::format("n_batches must lie in [2, n_eval_bits], got {}", n_batches));
  }
  if (n_calibration_bits < 1) throw ConfigError("n_calibration_bits must be >= 1");
}

std::optional<double> statistic(const BitObservables& bit, Direction d) {
  return d == Direction::kCurrentAtVoltageZero ? bit.msq_i_at_u_zc() : bit.msq_u_at_i_zc();
}

Calibration calibrate_from(std::span<const double> lh, std::span<const double> hl) {
  if (lh.empty() || hl.empty()) {
    throw DegenerateError("calibration failure: no usable bits for one arrangement");
  }
  Calibration c;
  c.mean_lh = summarize(lh).mean;
  c.mean_hl = summarize(hl).mean;
  c.threshold = 0.5 * (c.mean_lh + c.mean_hl);
  c.orientation = c.mean_hl >= c.mean_lh ? 1 : -1;
  return c;
}

Arrangement guess(const Calibration& c, double value) {
  const double signed_margin = c.orientation * (value - c.threshold);
  return signed_margin > 0.0 ? Arrangement::kHL : Arrangement::kLH;
}

AttackReport score(const Calibration& c, std::span<const LabeledStatistic> eval,
                   std::size_t n_batches) {
  if (n_batches < 1 || n_batches > eval.size()) {
    throw ConfigError("batch count must lie in [1, number of evaluation bits]");
  }
  AttackReport r;
  r.threshold = c.threshold;
  r.orientation = c.orientation;
  r.calibration = c;
  const std::size_t n = eval.size();
  for (std::size_t b = 0; b < n_batches; ++b) {
    const std::size_t begin = n * b / n_batches;
    const std::size_t end = n * (b + 1) / n_batches;
    std::size_t used = 0, correct = 0;
    for (std::size_t i = begin; i < end; ++i) {
      if (!eval[i].value) {
        ++r.dropped_bits;
        continue;
      }
      ++used;
      if (guess(c, *eval[i].value) == eval[i].truth) ++correct;
    }
    r.usable_bits += used;
    if (used > 0) r.per_batch_p.push_back(static_cast<double>(correct) / used);
  }
  if (r.usable_bits == 0) throw DegenerateError("attack has no usable evaluation bits");
  const Summary s = summarize(r.per_batch_p);
  r.p = s.mean;
  r.sigma = s.stddev;
  return r;
}

std::vector<Arrangement> balanced_labels(std::size_t n, std::uint64_t master_seed) {
  std::vector<Arrangement> labels(n, Arrangement::kLH);
  for (std::size_t i = n / 2; i < n; ++i) labels[i] = Arrangement::kHL;
  Engine engine = make_engine(master_seed, {Purpose::kLabels, 0, Party::kAlice, Role::kLow});
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(labels[i - 1], labels[pick(engine)]);
  }
  return labels;
}

AttackSimulation simulate_attack(const SchemeDef& scheme, const SimParams& params,
                                 const AttackConfig& cfg, unsigned workers) {
  const BitSetup setup = make_setup(scheme, params, cfg);
  AttackSimulation sim;
  sim.calibration_lh =
      observe_bits(setup, Arrangement::kLH, Purpose::kCalibration, cfg.n_calibration_bits, workers);
  sim.calibration_hl =
      observe_bits(setup, Arrangement::kHL, Purpose::kCalibration, cfg.n_calibration_bits, workers);
  const auto labels = balanced_labels(cfg.n_eval_bits, params.master_seed);
  sim.evaluation.resize(cfg.n_eval_bits);
  parallel_for(cfg.n_eval_bits, workers, [&](std::size_t b) {
    sim.evaluation[b] = observe_bit(setup, labels[b], Purpose::kEvaluation, b);
  });
  return sim;
}

Calibration calibrate(const AttackSimulation& sim, Direction d) {
  std::size_t dropped = 0;
  const auto lh = usable(sim.calibration_lh, d, dropped);
  const auto hl = usable(sim.calibration_hl, d, dropped);
  Calibration c = calibrate_from(lh, hl);
  c.dropped = dropped;
  return c;
}

AttackReport evaluate(const AttackSimulation& sim, Direction d, std::size_t n_batches) {
  const Calibration c = calibrate(sim, d);
  std::vector<LabeledStatistic> eval;
  eval.reserve(sim.evaluation.size());
  for (const auto& b : sim.evaluation) eval.push_back({b.arrangement, statistic(b, d)});
  AttackReport r = score(c, eval, n_batches);
  r.direction = d;
  return r;
}

Calibration calibrate(const SchemeDef& scheme, const SimParams& params, const AttackConfig& cfg,
                      unsigned workers) {
  const BitSetup setup = make_setup(scheme, params, cfg);
  AttackSimulation sim;
  sim.calibration_lh =
      observe_bits(setup, Arrangement::kLH, Purpose::kCalibration, cfg.n_calibration_bits, workers);
  sim.calibration_hl =
      observe_bits(setup, Arrangement::kHL, Purpose::kCalibration, cfg.n_calibration_bits, workers);
  return calibrate(sim, cfg.direction);
}

AttackReport run_attack(const SchemeDef& scheme, const SimParams& params,
                        const AttackConfig& cfg, unsigned workers) {
  const AttackSimulation sim = simulate_attack(scheme, params, cfg, workers);
  return evaluate(sim, cfg.direction, cfg.n_batches);
}

}  // namespace kljn
