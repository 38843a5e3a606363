#include "segsig/detection.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "segsig/parallel.hpp"
#include "segsig/stats.hpp"

namespace segsig {

DetectionConfig DetectionConfig::make(double h, double c) {
  if (!(h > 0.0 && h <= 1.0))
    throw std::invalid_argument("DetectionConfig: h must be in (0,1]");
  if (!(c > 0.0 && c < 1.0))
    throw std::invalid_argument("DetectionConfig: c must be in (0,1)");
  return DetectionConfig{h, c};
}

TestOutcome detect_left_anchored(const Sample& sample, const DetectionConfig& cfg) {
  TestOutcome out;
  const auto first_above =
      std::upper_bound(sample.x.begin(), sample.x.end(), cfg.h);
  const std::size_t window = static_cast<std::size_t>(first_above - sample.x.begin());
  std::size_t low_labels = 0;
  for (std::size_t i = 0; i < window; ++i)
    if (sample.y[i] <= 0.5) ++low_labels;
  out.aux["N"] = static_cast<double>(window);
  out.aux["S"] = static_cast<double>(low_labels);
  out.statistic = static_cast<double>(low_labels);
  if (window == 0) {
    out.decision = 0;
    out.flag = "insufficient_points";
    return out;
  }
  out.decision =
      static_cast<double>(low_labels) <= cfg.c * static_cast<double>(window) ? 1 : 0;
  return out;
}

TestOutcome detect_scan(const Sample& sample, const DetectionConfig& cfg) {
  const std::size_t n = sample.size();
  TestOutcome out;
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_first = 0, best_last = 0;
  double best_hi = 0.0;
  bool any_window = false;

  // Window starting at point a (0-based) and covering points a..b. Running
  // sums accumulate left-to-right, matching a naive per-window sum exactly.
  for (std::size_t a = 0; a < n; ++a) {
    double run = 0.0;
    for (std::size_t b = a; b < n; ++b) {
      run += 2.0 * sample.y[b] - 1.0;
      if (b + 1 < n && sample.x[b + 1] - sample.x[a] > cfg.h) {
        any_window = true;
        const double value = 0.5 * run;
        if (value > best) {
          best = value;
          best_first = a + 1;
          best_last = b + 1;
          best_hi = sample.x[b + 1];
        }
      } else if (b + 1 == n && 1.0 - sample.x[a] > cfg.h) {
        // window closing at the last design point
        any_window = true;
        const double value = 0.5 * run;
        if (value > best) {
          best = value;
          best_first = a + 1;
          best_last = n;
          best_hi = 1.0;
        }
      }
    }
  }

  if (!any_window) {
    out.decision = 0;
    out.statistic = -std::numeric_limits<double>::infinity();
    out.flag = "no_admissible_window";
    return out;
  }
  out.statistic = best;
  out.decision = best >= 0.0 ? 1 : 0;
  out.aux["first_point"] = static_cast<double>(best_first);
  out.aux["last_point"] = static_cast<double>(best_last);
  out.aux["window_lo"] = sample.x[best_first - 1];
  out.aux["window_hi"] = best_hi;
  return out;
}

namespace {

std::vector<Segment> alternatives_for(const DetectionSweepConfig& cfg, double h) {
  switch (cfg.alt_kind) {
    case AlternativeKind::explicit_segments:
      return cfg.explicit_alts;
    case AlternativeKind::left_anchored:
      return {Segment::closed(0.0, std::min(1.0, h))};
    case AlternativeKind::centered: {
      const double lo = std::max(0.0, 0.5 - h / 2.0);
      return {Segment::closed(lo, std::min(1.0, lo + h))};
    }
  }
  throw std::logic_error("alternatives_for: unknown kind");
}

constexpr std::uint64_t kDetectionTask = 1;

}  // namespace

std::vector<DetectionSweepRow> detection_error_sweep(const DetectionSweepConfig& cfg,
                                                     unsigned threads) {
  if (cfg.reps < 1)
    throw std::invalid_argument("detection_error_sweep: reps must be >= 1");
  if (cfg.n_grid.empty())
    throw std::invalid_argument("detection_error_sweep: empty n grid");

  std::vector<DetectionSweepRow> rows;
  for (std::size_t n_idx = 0; n_idx < cfg.n_grid.size(); ++n_idx) {
    const std::size_t n = cfg.n_grid[n_idx];
    const double h = cfg.h_rule(n);
    if (!(h > 0.0 && h <= 1.0))
      throw std::invalid_argument("detection_error_sweep: h rule left (0,1]");
    const auto alts = alternatives_for(cfg, h);
    for (const auto& g : alts)
      if (h - g.length() > 1e-12)  // ulp slack for derived endpoints
        throw std::invalid_argument(
            "detection_error_sweep: alternative shorter than h");
    const DetectionConfig dc = DetectionConfig::make(h, cfg.c);

    // hypothesis 0 is the null; m >= 1 indexes the alternatives
    std::vector<double> reject_freq(alts.size() + 1, 0.0);
    for (std::size_t m = 0; m <= alts.size(); ++m) {
      const Segment truth = m == 0 ? Segment::empty() : alts[m - 1];
      std::vector<unsigned char> rejected(static_cast<std::size_t>(cfg.reps), 0);
      parallel_for(
          static_cast<std::size_t>(cfg.reps), threads, [&](std::size_t rep) {
            RandomStream design_rng(derive_seed(
                cfg.master_seed, {kDetectionTask, n_idx, m, rep, 0}));
            RandomStream noise_rng(derive_seed(
                cfg.master_seed, {kDetectionTask, n_idx, m, rep, 1}));
            const auto design = make_design(cfg.design, n, design_rng);
            const Sample s = sample_observations(design, truth, cfg.noise, noise_rng);
            const TestOutcome t = cfg.test == TestKind::counting
                                      ? detect_left_anchored(s, dc)
                                      : detect_scan(s, dc);
            rejected[rep] = static_cast<unsigned char>(t.decision);
          });
      long count = 0;
      for (unsigned char r : rejected) count += r;
      reject_freq[m] = static_cast<double>(count) / static_cast<double>(cfg.reps);
    }

    DetectionSweepRow row;
    row.n = n;
    row.h = h;
    row.test = test_name(cfg.test);
    row.reps = cfg.reps;
    row.type1_hat = reject_freq[0];
    row.per_alt_type2.resize(alts.size());
    for (std::size_t m = 0; m < alts.size(); ++m)
      row.per_alt_type2[m] = 1.0 - reject_freq[m + 1];
    row.type2_hat = alts.empty() ? 0.0
                                 : *std::max_element(row.per_alt_type2.begin(),
                                                     row.per_alt_type2.end());
    row.gamma_hat = row.type1_hat + row.type2_hat;
    const double se1 = binomial_stderr(row.type1_hat, cfg.reps);
    const double se2 = binomial_stderr(row.type2_hat, cfg.reps);
    row.stderr_ = std::sqrt(se1 * se1 + se2 * se2);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_detection_sweep_csv(const std::vector<DetectionSweepRow>& rows,
                               std::ostream& out) {
  std::string buf = "n,h,test,gamma_hat,type1_hat,type2_hat,reps,stderr\n";
  char tmp[64];
  auto real = [&](double v) {
    std::snprintf(tmp, sizeof tmp, "%.17g", v);
    buf += tmp;
  };
  for (const auto& r : rows) {
    buf += std::to_string(r.n);
    buf += ',';
    real(r.h);
    buf += ',';
    buf += r.test;
    buf += ',';
    real(r.gamma_hat);
    buf += ',';
    real(r.type1_hat);
    buf += ',';
    real(r.type2_hat);
    buf += ',';
    buf += std::to_string(r.reps);
    buf += ',';
    real(r.stderr_);
    buf += '\n';
  }
  out << buf;
}

std::string test_name(TestKind kind) {
  return kind == TestKind::counting ? "counting" : "scan";
}

TestKind test_from_name(const std::string& name) {
  if (name == "counting") return TestKind::counting;
  if (name == "scan") return TestKind::scan;
  throw std::invalid_argument("unknown test: " + name);
}

}  // namespace segsig
