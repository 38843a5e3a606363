#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace segsig {

/// Kahan compensated accumulator. Summation order is part of the contract:
/// feeding values in a fixed order gives bit-identical totals no matter how
/// the values were produced.
struct KahanSum {
  double total = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double y = v - carry;
    const double t = total + y;
    carry = (t - total) - y;
    total = t;
  }
};

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Two-pass mean and standard error, compensated, in index order.
inline MeanStderr mean_and_stderr(const std::vector<double>& values) {
  MeanStderr out;
  const std::size_t n = values.size();
  if (n == 0) return out;
  KahanSum s;
  for (double v : values) s.add(v);
  out.mean = s.total / static_cast<double>(n);
  if (n == 1) return out;
  KahanSum sq;
  for (double v : values) {
    const double d = v - out.mean;
    sq.add(d * d);
  }
  const double sample_var = sq.total / static_cast<double>(n - 1);
  out.stderr_ = std::sqrt(sample_var / static_cast<double>(n));
  return out;
}

/// Standard error of an empirical frequency over `reps` trials.
inline double binomial_stderr(double p_hat, long reps) {
  if (reps <= 0) return 0.0;
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(reps));
}

}  // namespace segsig
