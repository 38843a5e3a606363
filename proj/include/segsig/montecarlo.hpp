#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "segsig/detection.hpp"
#include "segsig/estimation.hpp"
#include "segsig/model.hpp"

namespace segsig {

enum class TaskKind { risk, detection, tail };
enum class EstimatorKind { one_changepoint, segment_lse, two_step };

/// Position of a short segment: a fixed left endpoint, or flush against 1.
struct ShortPosition {
  bool at_end = false;
  double value = 0.0;
};

/// Finite family standing in for the supremum over a segment class. Members
/// may depend on n (default theta grid, length rules, the adversarial pair).
struct SegmentFamily {
  enum class Kind { s0_grid, s_short, s_mu, adversarial_pair };

  Kind kind = Kind::s0_grid;
  std::vector<double> thetas;       // s0_grid; ignored when default_thetas
  bool default_thetas = false;      // s0_grid: {0, 1/(2n), 1/3, 1/2, 1-1/(2n), 1}
  std::vector<ScaleRule> lengths;   // s_short
  std::vector<ShortPosition> positions;  // s_short
  double mu = 0.0;                  // s_mu
  std::vector<Segment> segments;    // s_mu

  std::vector<std::pair<std::string, Segment>> members(std::size_t n) const;

  /// The adversarial pair shares one design and one noise stream per
  /// replication so that the two members' samples coincide whenever no
  /// design point falls in their symmetric difference.
  bool shares_streams() const { return kind == Kind::adversarial_pair; }
};

struct ExperimentConfig {
  TaskKind task = TaskKind::risk;
  std::uint64_t master_seed = 0;
  DesignKind design = DesignKind::dd;
  NoiseSpec noise;
  std::vector<std::size_t> n_grid;
  long reps = 1;

  // risk / tail
  EstimatorKind estimator = EstimatorKind::one_changepoint;
  double mu = 0.2;  // two-step only
  SegmentFamily family;

  // detection
  TestKind test = TestKind::counting;
  ScaleRule h_rule;
  double c = 0.5;
  AlternativeKind alt_kind = AlternativeKind::left_anchored;
  std::vector<Segment> alternatives;

  // tail
  std::vector<double> x_grid;

  void validate() const;
};

std::string experiment_config_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const std::string& text);

struct RiskRow {
  std::string task;
  std::size_t n = 0;
  std::string member;
  std::string estimator;
  double mean_loss = 0.0;
  double stderr_ = 0.0;
  long reps = 0;
  bool max_over_family = false;
  std::string seed_lineage;
};

struct RiskReport {
  std::vector<RiskRow> rows;
  long failures = 0;
  // adversarial-pair diagnostics
  long coupling_checked = 0;
  long coupling_event_count = 0;  // replications with no design point in g1^g2
  bool coupling_identity_ok = true;
};

/// Monte Carlo estimation risk per (n, family member) plus a max-over-family
/// row per n. Per-replication seeds are derived from
/// (task, n_index, member_index, rep_index); losses are aggregated with
/// compensated summation in replication order, so reports are byte-identical
/// for any worker count.
RiskReport run_risk_sweep(const ExperimentConfig& cfg, unsigned threads = 1);

/// Report CSV: task,n,member,estimator,mean_loss,stderr,reps,max_over_family
void write_risk_report_csv(const RiskReport& report, std::ostream& out);
std::vector<RiskRow> read_risk_report_csv(std::istream& in);

struct TailRow {
  std::size_t n = 0;
  std::string member;
  double x = 0.0;
  double survival_hat = 0.0;  // empirical P[n * loss >= x]
  double stderr_ = 0.0;
  double bound = 0.0;  // one_cp_tail_bound(x, sigma)
  long reps = 0;
};

struct TailReport {
  std::vector<TailRow> rows;
  long failures = 0;
};

/// Empirical survival of the scaled loss against the closed-form tail bound.
TailReport run_tail_experiment(const ExperimentConfig& cfg, unsigned threads = 1);

void write_tail_report_csv(const TailReport& report, std::ostream& out);

/// Detection sweep driven by an ExperimentConfig with task == detection.
std::vector<DetectionSweepRow> run_detection_sweep(const ExperimentConfig& cfg,
                                                   unsigned threads = 1);

std::string estimator_name(EstimatorKind kind);
EstimatorKind estimator_from_name(const std::string& name);

}  // namespace segsig
