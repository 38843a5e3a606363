#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace segsig {

/// Hellinger affinity 1 - H^2/2 between two label distributions on the
/// regular grid that disagree at exactly k design points, gaussian noise:
/// exp(-k / (8 sigma^2)).
double hellinger_affinity_dd(std::size_t k, double sigma);

/// Hellinger affinity under the uniform random design for segments with
/// symmetric difference of measure delta, gaussian noise, n points:
/// (1 - (1 - e^{-1/(8 sigma^2)}) * delta)^n.
double hellinger_affinity_rd(double delta, double sigma, std::size_t n);

/// Tail bound for the left-anchored estimator on the regular grid:
/// P[n * loss >= x] <= min(1, C0 * e^{-x/(8 sigma^2)}) with
/// C0 = 2 / (1 - e^{-1/(8 sigma^2)}).
double one_cp_tail_bound(double x, double sigma);

/// Worst-case risk for left-anchored segments is at least 1/(8n).
double lower_bound_s0(std::size_t n);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  bool zero_variance = false;  // constant risks: slope 0, r_squared forced to 1
  std::vector<std::pair<double, double>> points;  // (log n, log risk)
  std::vector<double> risk_times_n;
  std::vector<double> risk_times_n_over_log;
};

/// Ordinary least squares of log(risk) on log(n). Risks must be positive;
/// callers clamp exact-zero empirical risks to zero_risk_floor first.
RateFit fit_rate(const std::vector<std::size_t>& ns, const std::vector<double>& risks);

/// Half the smallest representable empirical loss: 1 / (2 * max_n * reps).
double zero_risk_floor(std::size_t max_n, long reps);

}  // namespace segsig
