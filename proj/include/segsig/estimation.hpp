#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>

#include "segsig/model.hpp"

namespace segsig {

struct MaxSubarrayResult {
  std::size_t first = 0;  // 1-based, inclusive
  std::size_t last = 0;
  double total = 0.0;
};

/// Best contiguous sum over 1 <= k <= l <= n; ties broken to the smallest k,
/// then the smallest l. Linear time. Window values are accumulated
/// left-to-right, so they match a naive per-window sum bit for bit.
MaxSubarrayResult max_subarray(std::span<const double> weights);

struct EstimateResult {
  std::string method;
  Segment segment;
  std::map<std::string, double> indices;
  double objective = 0.0;
};

/// Left-anchored least-squares estimate: maximizes the prefix criterion
/// F(M) = sum_{i<=M} (2 y_i - 1) over M in {0,...,n} with F(0) = 0, ties to
/// the smallest M, and returns [0, x_M] (the empty segment when M = 0).
EstimateResult estimate_one_changepoint(const Sample& sample);

/// General least-squares segment estimate: max_subarray on 2y-1, returning
/// [x_k, x_l]. A negative maximum still yields the best single-point
/// segment, which is a legal measure-zero candidate.
EstimateResult estimate_segment_lse(const Sample& sample);

/// Split-sample estimator for segments of length >= mu. The even-index half
/// gives a preliminary LSE segment whose midpoint splits the odd-index half;
/// each endpoint is then re-estimated one-sidedly from its own half. Ties go
/// to the smallest index on the right side, the largest on the left; empty
/// sides fall back to the extreme design points. Endpoints are ordered
/// defensively, since under heavy noise the one-sided fits can cross.
EstimateResult estimate_segment_two_step(const Sample& sample, double mu);

}  // namespace segsig
