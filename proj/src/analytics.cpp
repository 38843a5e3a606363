#include "segsig/analytics.hpp"

#include <cmath>
#include <stdexcept>

namespace segsig {

double hellinger_affinity_dd(std::size_t k, double sigma) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("hellinger_affinity_dd: sigma must be > 0");
  return std::exp(-static_cast<double>(k) / (8.0 * sigma * sigma));
}

double hellinger_affinity_rd(double delta, double sigma, std::size_t n) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("hellinger_affinity_rd: sigma must be > 0");
  if (!(delta >= 0.0 && delta <= 1.0))
    throw std::invalid_argument("hellinger_affinity_rd: delta must be in [0,1]");
  if (n == 0)
    throw std::invalid_argument("hellinger_affinity_rd: n must be >= 1");
  const double per_point = 1.0 - std::exp(-1.0 / (8.0 * sigma * sigma));
  return std::pow(1.0 - per_point * delta, static_cast<double>(n));
}

double one_cp_tail_bound(double x, double sigma) {
  if (!(x > 0.0)) throw std::invalid_argument("one_cp_tail_bound: x must be > 0");
  if (!(sigma > 0.0))
    throw std::invalid_argument("one_cp_tail_bound: sigma must be > 0");
  const double scale = 8.0 * sigma * sigma;
  const double c0 = 2.0 / (1.0 - std::exp(-1.0 / scale));
  return std::min(1.0, c0 * std::exp(-x / scale));
}

double lower_bound_s0(std::size_t n) {
  if (n == 0) throw std::invalid_argument("lower_bound_s0: n must be >= 1");
  return 1.0 / (8.0 * static_cast<double>(n));
}

RateFit fit_rate(const std::vector<std::size_t>& ns, const std::vector<double>& risks) {
  if (ns.size() != risks.size())
    throw std::invalid_argument("fit_rate: length mismatch");
  if (ns.size() < 2) throw std::invalid_argument("fit_rate: need >= 2 points");
  RateFit fit;
  fit.points.reserve(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 1) throw std::invalid_argument("fit_rate: n must be >= 1");
    if (!(risks[i] > 0.0))
      throw std::invalid_argument(
          "fit_rate: risks must be > 0 (clamp zeros to zero_risk_floor)");
    const double n = static_cast<double>(ns[i]);
    fit.points.emplace_back(std::log(n), std::log(risks[i]));
    fit.risk_times_n.push_back(risks[i] * n);
    fit.risk_times_n_over_log.push_back(risks[i] * n / std::log(n));
  }

  const double m = static_cast<double>(fit.points.size());
  double x_mean = 0.0, y_mean = 0.0;
  for (const auto& [x, y] : fit.points) {
    x_mean += x;
    y_mean += y;
  }
  x_mean /= m;
  y_mean /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : fit.points) {
    sxx += (x - x_mean) * (x - x_mean);
    sxy += (x - x_mean) * (y - y_mean);
    syy += (y - y_mean) * (y - y_mean);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_rate: all n equal");
  fit.slope = sxy / sxx;
  fit.intercept = y_mean - fit.slope * x_mean;
  if (syy == 0.0) {
    // constant risks: the fit is flat and exact
    fit.slope = 0.0;
    fit.intercept = y_mean;
    fit.r_squared = 1.0;
    fit.zero_variance = true;
    return fit;
  }
  double ss_res = 0.0;
  for (const auto& [x, y] : fit.points) {
    const double r = y - (fit.intercept + fit.slope * x);
    ss_res += r * r;
  }
  fit.r_squared = 1.0 - ss_res / syy;
  return fit;
}

double zero_risk_floor(std::size_t max_n, long reps) {
  if (max_n == 0 || reps <= 0)
    throw std::invalid_argument("zero_risk_floor: need max_n >= 1, reps >= 1");
  return 1.0 / (2.0 * static_cast<double>(max_n) * static_cast<double>(reps));
}

}  // namespace segsig
