#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "segsig/model.hpp"

namespace segsig {

enum class TestKind { counting, scan };

struct DetectionConfig {
  double h = 0.1;  // minimum segment length under the alternative, in (0,1]
  double c = 0.5;  // counting-test threshold, in (0,1)

  static DetectionConfig make(double h, double c = 0.5);
};

struct TestOutcome {
  int decision = 0;  // 1 = reject "no segment", 0 = accept
  double statistic = 0.0;
  std::map<std::string, double> aux;
  std::string flag;  // "insufficient_points", "no_admissible_window", or empty
};

/// Left-anchored counting test. N = #{x_i <= h}, S = #{i <= N : y_i <= 1/2};
/// rejects iff S <= c*N and N >= 1. An empty window cannot reject.
TestOutcome detect_left_anchored(const Sample& sample, const DetectionConfig& cfg);

/// Scan test. Maximizes the centered window sum (1/2) * sum_{i=k}^{l-1}
/// (2 y_i - 1) over pairs k < l with x_l - x_k > h, plus the windows closing
/// at the last design point with 1 - x_k > h; rejects iff the maximum is
/// >= 0. Exhaustive O(n^2) scan with running sums; the maximizing window is
/// reported in aux (smallest start, then smallest end, on ties).
TestOutcome detect_scan(const Sample& sample, const DetectionConfig& cfg);

/// value(n) = coeff * n^power * (ln n if log_factor else 1).
struct ScaleRule {
  double coeff = 1.0;
  double power = 0.0;
  bool log_factor = false;

  double operator()(std::size_t n) const {
    double v = coeff * std::pow(static_cast<double>(n), power);
    if (log_factor) v *= std::log(static_cast<double>(n));
    return v;
  }
};

enum class AlternativeKind {
  explicit_segments,  // user-supplied list, fixed across n
  left_anchored,      // [0, h(n)]
  centered,           // [(1-h)/2, (1+h)/2]
};

struct DetectionSweepConfig {
  TestKind test = TestKind::counting;
  ScaleRule h_rule;
  double c = 0.5;
  AlternativeKind alt_kind = AlternativeKind::left_anchored;
  std::vector<Segment> explicit_alts;
  std::vector<std::size_t> n_grid;
  long reps = 1;
  NoiseSpec noise;
  DesignKind design = DesignKind::dd;
  std::uint64_t master_seed = 0;
};

struct DetectionSweepRow {
  std::size_t n = 0;
  double h = 0.0;
  std::string test;
  double gamma_hat = 0.0;
  double type1_hat = 0.0;
  double type2_hat = 0.0;  // max over alternatives
  long reps = 0;
  double stderr_ = 0.0;
  std::vector<double> per_alt_type2;
};

/// Empirical sum of type-I and worst-case type-II error per n. Replications
/// run on deterministic per-replication seeds and may be spread over
/// `threads` workers; aggregation order is fixed by replication index.
std::vector<DetectionSweepRow> detection_error_sweep(const DetectionSweepConfig& cfg,
                                                     unsigned threads = 1);

/// Sweep CSV: n,h,test,gamma_hat,type1_hat,type2_hat,reps,stderr
void write_detection_sweep_csv(const std::vector<DetectionSweepRow>& rows,
                               std::ostream& out);

std::string test_name(TestKind kind);
TestKind test_from_name(const std::string& name);

}  // namespace segsig
