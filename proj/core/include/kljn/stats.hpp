#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kljn {

// Neumaier-compensated running sum. Results depend only on the order of
// add() calls, which callers keep fixed (bit-index order).
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)
  double stderr_mean = 0.0;
};

Summary summarize(std::span<const double> values);

double excess_kurtosis(std::span<const double> values);

// Kolmogorov survival function Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} e^{-2 j^2 lambda^2}.
double kolmogorov_q(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value and
// Stephens' small-sample correction.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct Histogram {
  std::vector<double> edges;  // bins + 1 ascending edges
  std::vector<std::size_t> counts;
};

// Equal-width bins over [lo, hi]; values at hi fall in the last bin and
// values outside the range are not counted.
Histogram histogram(std::span<const double> values, double lo, double hi, std::size_t bins);

}  // namespace kljn
