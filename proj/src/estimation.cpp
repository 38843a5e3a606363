#include "segsig/estimation.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace segsig {

MaxSubarrayResult max_subarray(std::span<const double> weights) {
  if (weights.empty())
    throw std::invalid_argument("max_subarray: empty input");
  MaxSubarrayResult best{1, 1, weights[0]};
  double run = weights[0];
  std::size_t run_start = 1;
  for (std::size_t i = 2; i <= weights.size(); ++i) {
    if (run < 0.0) {
      run = weights[i - 1];
      run_start = i;
    } else {
      run += weights[i - 1];
    }
    if (run > best.total) {
      best.total = run;
      best.first = run_start;
      best.last = i;
    }
  }
  return best;
}

EstimateResult estimate_one_changepoint(const Sample& sample) {
  if (sample.size() == 0)
    throw std::invalid_argument("estimate_one_changepoint: empty sample");
  double f = 0.0;       // running F(M)
  double best = 0.0;    // F(0) = 0
  std::size_t m_hat = 0;
  for (std::size_t i = 1; i <= sample.size(); ++i) {
    f += 2.0 * sample.y[i - 1] - 1.0;
    if (f > best) {
      best = f;
      m_hat = i;
    }
  }
  EstimateResult out;
  out.method = "one-cp";
  out.segment = m_hat == 0 ? Segment::empty()
                           : Segment::closed(0.0, sample.x[m_hat - 1]);
  out.indices["m_hat"] = static_cast<double>(m_hat);
  out.objective = best;
  return out;
}

EstimateResult estimate_segment_lse(const Sample& sample) {
  if (sample.size() == 0)
    throw std::invalid_argument("estimate_segment_lse: empty sample");
  std::vector<double> w(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) w[i] = 2.0 * sample.y[i] - 1.0;
  const MaxSubarrayResult m = max_subarray(w);
  EstimateResult out;
  out.method = "lse";
  out.segment = Segment::closed(sample.x[m.first - 1], sample.x[m.last - 1]);
  out.indices["k_hat"] = static_cast<double>(m.first);
  out.indices["l_hat"] = static_cast<double>(m.last);
  out.objective = m.total;
  return out;
}

EstimateResult estimate_segment_two_step(const Sample& sample, double mu) {
  const std::size_t n = sample.size();
  if (n < 2)
    throw std::invalid_argument("estimate_segment_two_step: need n >= 2");
  if (!(mu > 0.0 && mu < 1.0))
    throw std::invalid_argument("estimate_segment_two_step: mu must be in (0,1)");

  // preliminary fit on the even-index half (1-based sorted indices)
  Sample even;
  for (std::size_t i = 2; i <= n; i += 2) {
    even.x.push_back(sample.x[i - 1]);
    even.y.push_back(sample.y[i - 1]);
  }
  const EstimateResult prelim = estimate_segment_lse(even);
  const double mid = 0.5 * (prelim.segment.a + prelim.segment.b);

  std::vector<std::size_t> plus, minus;  // odd indices split around mid
  for (std::size_t i = 1; i <= n; i += 2)
    (sample.x[i - 1] >= mid ? plus : minus).push_back(i);

  // right endpoint: prefix criterion over the upper half, smallest tie
  std::size_t m_plus = n;
  double f_plus = 0.0;
  if (!plus.empty()) {
    double run = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i : plus) {
      run += 2.0 * sample.y[i - 1] - 1.0;
      if (run > best) {
        best = run;
        m_plus = i;
      }
    }
    f_plus = best;
  }

  // left endpoint: suffix criterion over the lower half, largest tie
  std::size_t m_minus = 1;
  double f_minus = 0.0;
  if (!minus.empty()) {
    double run = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (auto it = minus.rbegin(); it != minus.rend(); ++it) {
      run += 2.0 * sample.y[*it - 1] - 1.0;
      if (run > best) {
        best = run;
        m_minus = *it;
      }
    }
    f_minus = best;
  }

  const double b_tilde = sample.x[m_plus - 1];
  const double a_tilde = sample.x[m_minus - 1];

  EstimateResult out;
  out.method = "two-step";
  out.segment = Segment::closed(std::min(a_tilde, b_tilde), std::max(a_tilde, b_tilde));
  out.indices["m_minus"] = static_cast<double>(m_minus);
  out.indices["m_plus"] = static_cast<double>(m_plus);
  out.indices["mid"] = mid;
  out.indices["prelim_a"] = prelim.segment.a;
  out.indices["prelim_b"] = prelim.segment.b;
  out.indices["f_plus"] = f_plus;
  out.indices["f_minus"] = f_minus;
  out.objective = f_plus + f_minus;
  return out;
}

}  // namespace segsig
