#include "segsig/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "segsig/analytics.hpp"
#include "segsig/parallel.hpp"
#include "segsig/stats.hpp"

namespace segsig {

namespace {

using nlohmann::json;

constexpr std::uint64_t kRiskTask = 0;
constexpr std::uint64_t kTailTask = 2;
constexpr std::uint64_t kDesignStream = 0;
constexpr std::uint64_t kNoiseStream = 1;

std::string format_real(double v) {
  char tmp[64];
  std::snprintf(tmp, sizeof tmp, "%.17g", v);
  return tmp;
}

}  // namespace

std::vector<std::pair<std::string, Segment>> SegmentFamily::members(
    std::size_t n) const {
  if (n == 0) throw std::invalid_argument("SegmentFamily: n must be >= 1");
  std::vector<std::pair<std::string, Segment>> out;
  switch (kind) {
    case Kind::s0_grid: {
      std::vector<double> grid = thetas;
      if (default_thetas) {
        const double half_gap = 1.0 / (2.0 * static_cast<double>(n));
        grid = {0.0, half_gap, 1.0 / 3.0, 0.5, 1.0 - half_gap, 1.0};
      }
      if (grid.empty())
        throw std::invalid_argument("SegmentFamily: empty theta grid");
      for (double t : grid)
        out.emplace_back("theta=" + format_real(t), Segment::closed(0.0, t));
      return out;
    }
    case Kind::s_short: {
      if (lengths.empty() || positions.empty())
        throw std::invalid_argument("SegmentFamily: s_short needs lengths and positions");
      for (const auto& rule : lengths) {
        const double len = rule(n);
        if (!(len > 0.0 && len <= 1.0))
          throw std::invalid_argument("SegmentFamily: length rule left (0,1]");
        for (const auto& pos : positions) {
          const double a = pos.at_end ? 1.0 - len : pos.value;
          const std::string name =
              (pos.at_end ? std::string("pos=end") : "pos=" + format_real(pos.value)) +
              ";len=" + format_real(len);
          out.emplace_back(name, Segment::closed(a, a + len));
        }
      }
      return out;
    }
    case Kind::s_mu: {
      if (segments.empty())
        throw std::invalid_argument("SegmentFamily: s_mu needs segments");
      for (const auto& g : segments) {
        // representation slack: endpoints like 0.6 - 0.4 land one ulp short
        if (mu - g.length() > 1e-12)
          throw std::invalid_argument("SegmentFamily: s_mu member shorter than mu");
        out.emplace_back("a=" + format_real(g.a) + ";b=" + format_real(g.b), g);
      }
      return out;
    }
    case Kind::adversarial_pair: {
      const double half_gap = 1.0 / (2.0 * static_cast<double>(n));
      out.emplace_back("g1", Segment::closed(0.0, 0.0));
      out.emplace_back("g2", Segment::closed(0.0, half_gap));
      return out;
    }
  }
  throw std::logic_error("SegmentFamily: unknown kind");
}

void ExperimentConfig::validate() const {
  if (n_grid.empty()) throw std::invalid_argument("config: empty n_grid");
  for (std::size_t n : n_grid)
    if (n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (reps < 1) throw std::invalid_argument("config: reps must be >= 1");
  if (!(noise.sigma >= 0.0)) throw std::invalid_argument("config: sigma < 0");
  if (task == TaskKind::tail) {
    if (estimator != EstimatorKind::one_changepoint)
      throw std::invalid_argument("config: tail task requires the one-cp estimator");
    if (x_grid.empty()) throw std::invalid_argument("config: tail task needs x_grid");
    for (double x : x_grid)
      if (!(x > 0.0)) throw std::invalid_argument("config: x_grid values must be > 0");
  }
  if (task != TaskKind::detection && estimator == EstimatorKind::two_step &&
      !(mu > 0.0 && mu < 1.0))
    throw std::invalid_argument("config: two-step needs mu in (0,1)");
}

namespace {

EstimateResult run_estimator(EstimatorKind kind, const Sample& s, double mu) {
  switch (kind) {
    case EstimatorKind::one_changepoint: return estimate_one_changepoint(s);
    case EstimatorKind::segment_lse: return estimate_segment_lse(s);
    case EstimatorKind::two_step: return estimate_segment_two_step(s, mu);
  }
  throw std::logic_error("unknown estimator");
}

struct CellLosses {
  std::vector<double> losses;
  long failures = 0;
};

}  // namespace

RiskReport run_risk_sweep(const ExperimentConfig& cfg, unsigned threads) {
  if (cfg.task != TaskKind::risk)
    throw std::invalid_argument("run_risk_sweep: config task must be risk");
  cfg.validate();

  RiskReport report;
  const std::string est = estimator_name(cfg.estimator);
  const std::size_t reps = static_cast<std::size_t>(cfg.reps);

  for (std::size_t n_idx = 0; n_idx < cfg.n_grid.size(); ++n_idx) {
    const std::size_t n = cfg.n_grid[n_idx];
    const auto members = cfg.family.members(n);
    std::vector<std::vector<double>> losses(members.size(),
                                            std::vector<double>(reps, 0.0));
    std::atomic<long> failures{0};
    std::atomic<long> event_count{0};
    std::atomic<bool> identity_ok{true};
    std::vector<double> dd_grid;
    if (cfg.design == DesignKind::dd) {
      RandomStream unused(0);
      dd_grid = make_design(DesignKind::dd, n, unused);
    }

    if (cfg.family.shares_streams()) {
      // one design and one noise stream per replication, shared by the
      // members; seeds carry member label 0
      parallel_for(reps, threads, [&](std::size_t rep) {
        try {
          const std::uint64_t design_seed =
              derive_seed(cfg.master_seed, {kRiskTask, n_idx, 0, rep, kDesignStream});
          const std::uint64_t noise_seed =
              derive_seed(cfg.master_seed, {kRiskTask, n_idx, 0, rep, kNoiseStream});
          std::vector<double> design = dd_grid;
          if (cfg.design == DesignKind::rd) {
            RandomStream design_rng(design_seed);
            design = make_design(DesignKind::rd, n, design_rng);
          }
          std::vector<Sample> samples;
          samples.reserve(members.size());
          for (std::size_t m = 0; m < members.size(); ++m) {
            const Segment& g = members[m].second;
            RandomStream noise_rng(noise_seed);
            samples.push_back(sample_observations(design, g, cfg.noise, noise_rng));
            losses[m][rep] = nikodym_distance(
                run_estimator(cfg.estimator, samples.back(), cfg.mu).segment, g);
          }
          // coupling check: indicators agree at every design point iff the
          // label vectors are bitwise identical
          bool indicators_equal = true;
          for (double x : design)
            for (std::size_t m = 1; m < members.size(); ++m)
              if (members[0].second.contains(x) != members[m].second.contains(x))
                indicators_equal = false;
          bool bytes_equal = true;
          for (std::size_t m = 1; m < samples.size(); ++m)
            if (samples[m].y != samples[0].y) bytes_equal = false;
          if (indicators_equal != bytes_equal) identity_ok.store(false);
          if (indicators_equal) event_count.fetch_add(1);
        } catch (const std::exception&) {
          failures.fetch_add(1);
        }
      });
      report.coupling_checked += static_cast<long>(reps);
      report.coupling_event_count += event_count.load();
      report.coupling_identity_ok = report.coupling_identity_ok && identity_ok.load();
    } else {
      for (std::size_t m_idx = 0; m_idx < members.size(); ++m_idx) {
        const Segment truth = members[m_idx].second;
        parallel_for(reps, threads, [&, m_idx](std::size_t rep) {
          try {
            std::vector<double> design = dd_grid;
            if (cfg.design == DesignKind::rd) {
              RandomStream design_rng(derive_seed(
                  cfg.master_seed, {kRiskTask, n_idx, m_idx, rep, kDesignStream}));
              design = make_design(DesignKind::rd, n, design_rng);
            }
            RandomStream noise_rng(derive_seed(
                cfg.master_seed, {kRiskTask, n_idx, m_idx, rep, kNoiseStream}));
            const Sample s = sample_observations(design, truth, cfg.noise, noise_rng);
            losses[m_idx][rep] = nikodym_distance(
                run_estimator(cfg.estimator, s, cfg.mu).segment, truth);
          } catch (const std::exception&) {
            failures.fetch_add(1);
          }
        });
      }
    }
    report.failures += failures.load();

    std::size_t worst = 0;
    std::vector<MeanStderr> stats(members.size());
    for (std::size_t m_idx = 0; m_idx < members.size(); ++m_idx) {
      stats[m_idx] = mean_and_stderr(losses[m_idx]);
      RiskRow row;
      row.task = "risk";
      row.n = n;
      row.member = members[m_idx].first;
      row.estimator = est;
      row.mean_loss = stats[m_idx].mean;
      row.stderr_ = stats[m_idx].stderr_;
      row.reps = cfg.reps;
      row.seed_lineage = "task:0/n:" + std::to_string(n_idx) +
                         "/member:" + std::to_string(m_idx);
      report.rows.push_back(std::move(row));
      if (stats[m_idx].mean > stats[worst].mean) worst = m_idx;
    }
    RiskRow max_row;
    max_row.task = "risk";
    max_row.n = n;
    max_row.member = "max_over_family";
    max_row.estimator = est;
    max_row.mean_loss = stats[worst].mean;
    max_row.stderr_ = stats[worst].stderr_;
    max_row.reps = cfg.reps;
    max_row.max_over_family = true;
    max_row.seed_lineage = "task:0/n:" + std::to_string(n_idx) +
                           "/member:" + std::to_string(worst);
    report.rows.push_back(std::move(max_row));
  }
  return report;
}

TailReport run_tail_experiment(const ExperimentConfig& cfg, unsigned threads) {
  if (cfg.task != TaskKind::tail)
    throw std::invalid_argument("run_tail_experiment: config task must be tail");
  cfg.validate();

  TailReport report;
  const std::size_t reps = static_cast<std::size_t>(cfg.reps);
  for (std::size_t n_idx = 0; n_idx < cfg.n_grid.size(); ++n_idx) {
    const std::size_t n = cfg.n_grid[n_idx];
    const auto members = cfg.family.members(n);
    std::vector<double> dd_grid;
    if (cfg.design == DesignKind::dd) {
      RandomStream unused(0);
      dd_grid = make_design(DesignKind::dd, n, unused);
    }
    for (std::size_t m_idx = 0; m_idx < members.size(); ++m_idx) {
      const Segment truth = members[m_idx].second;
      std::vector<double> scaled(reps, 0.0);  // n * loss per replication
      std::atomic<long> failures{0};
      parallel_for(reps, threads, [&, m_idx](std::size_t rep) {
        try {
          std::vector<double> design = dd_grid;
          if (cfg.design == DesignKind::rd) {
            RandomStream design_rng(derive_seed(
                cfg.master_seed, {kTailTask, n_idx, m_idx, rep, kDesignStream}));
            design = make_design(DesignKind::rd, n, design_rng);
          }
          RandomStream noise_rng(derive_seed(
              cfg.master_seed, {kTailTask, n_idx, m_idx, rep, kNoiseStream}));
          const Sample s = sample_observations(design, truth, cfg.noise, noise_rng);
          scaled[rep] = static_cast<double>(n) *
                        nikodym_distance(estimate_one_changepoint(s).segment, truth);
        } catch (const std::exception&) {
          failures.fetch_add(1);
        }
      });
      report.failures += failures.load();
      for (double x : cfg.x_grid) {
        long count = 0;
        for (double v : scaled)
          if (v >= x) ++count;
        TailRow row;
        row.n = n;
        row.member = members[m_idx].first;
        row.x = x;
        row.survival_hat = static_cast<double>(count) / static_cast<double>(reps);
        row.stderr_ = binomial_stderr(row.survival_hat, cfg.reps);
        row.bound = cfg.noise.sigma > 0.0 ? one_cp_tail_bound(x, cfg.noise.sigma) : 0.0;
        row.reps = cfg.reps;
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

std::vector<DetectionSweepRow> run_detection_sweep(const ExperimentConfig& cfg,
                                                   unsigned threads) {
  if (cfg.task != TaskKind::detection)
    throw std::invalid_argument("run_detection_sweep: config task must be detection");
  cfg.validate();
  DetectionSweepConfig dc;
  dc.test = cfg.test;
  dc.h_rule = cfg.h_rule;
  dc.c = cfg.c;
  dc.alt_kind = cfg.alt_kind;
  dc.explicit_alts = cfg.alternatives;
  dc.n_grid = cfg.n_grid;
  dc.reps = cfg.reps;
  dc.noise = cfg.noise;
  dc.design = cfg.design;
  dc.master_seed = cfg.master_seed;
  return detection_error_sweep(dc, threads);
}

void write_risk_report_csv(const RiskReport& report, std::ostream& out) {
  std::string buf = "task,n,member,estimator,mean_loss,stderr,reps,max_over_family\n";
  for (const auto& r : report.rows) {
    buf += r.task;
    buf += ',';
    buf += std::to_string(r.n);
    buf += ',';
    buf += r.member;
    buf += ',';
    buf += r.estimator;
    buf += ',';
    buf += format_real(r.mean_loss);
    buf += ',';
    buf += format_real(r.stderr_);
    buf += ',';
    buf += std::to_string(r.reps);
    buf += ',';
    buf += r.max_over_family ? '1' : '0';
    buf += '\n';
  }
  out << buf;
}

std::vector<RiskRow> read_risk_report_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("report csv: empty input");
  if (line.ends_with('\r')) line.pop_back();
  if (line != "task,n,member,estimator,mean_loss,stderr,reps,max_over_family")
    throw std::runtime_error("report csv: unexpected header");
  std::vector<RiskRow> rows;
  while (std::getline(in, line)) {
    if (line.ends_with('\r')) line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string f[8];
    for (int i = 0; i < 8; ++i)
      if (!std::getline(row, f[i], ','))
        throw std::runtime_error("report csv: malformed row: " + line);
    RiskRow r;
    r.task = f[0];
    r.n = static_cast<std::size_t>(std::stoull(f[1]));
    r.member = f[2];
    r.estimator = f[3];
    r.mean_loss = std::stod(f[4]);
    r.stderr_ = std::stod(f[5]);
    r.reps = std::stol(f[6]);
    r.max_over_family = f[7] == "1";
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_tail_report_csv(const TailReport& report, std::ostream& out) {
  std::string buf = "task,n,member,estimator,x,survival_hat,stderr,bound,reps\n";
  for (const auto& r : report.rows) {
    buf += "tail,";
    buf += std::to_string(r.n);
    buf += ',';
    buf += r.member;
    buf += ",one-cp,";
    buf += format_real(r.x);
    buf += ',';
    buf += format_real(r.survival_hat);
    buf += ',';
    buf += format_real(r.stderr_);
    buf += ',';
    buf += format_real(r.bound);
    buf += ',';
    buf += std::to_string(r.reps);
    buf += '\n';
  }
  out << buf;
}

namespace {

json scale_rule_to_json(const ScaleRule& rule) {
  if (rule.power == 0.0 && !rule.log_factor) return json(rule.coeff);
  json j;
  j["coeff"] = rule.coeff;
  j["power"] = rule.power;
  j["log"] = rule.log_factor;
  return j;
}

ScaleRule scale_rule_from_json(const json& j) {
  ScaleRule rule;
  if (j.is_number()) {
    rule.coeff = j.get<double>();
    return rule;
  }
  rule.coeff = j.at("coeff").get<double>();
  rule.power = j.value("power", 0.0);
  rule.log_factor = j.value("log", false);
  return rule;
}

json segment_to_json(const Segment& g) { return json::array({g.a, g.b}); }

Segment segment_from_json(const json& j) {
  return Segment::closed(j.at(0).get<double>(), j.at(1).get<double>());
}

json family_to_json(const SegmentFamily& fam) {
  json j;
  switch (fam.kind) {
    case SegmentFamily::Kind::s0_grid:
      j["kind"] = "s0_grid";
      if (fam.default_thetas)
        j["thetas"] = "default";
      else
        j["thetas"] = fam.thetas;
      break;
    case SegmentFamily::Kind::s_short: {
      j["kind"] = "s_short";
      json lens = json::array();
      for (const auto& rule : fam.lengths) lens.push_back(scale_rule_to_json(rule));
      j["lengths"] = lens;
      json pos = json::array();
      for (const auto& p : fam.positions)
        pos.push_back(p.at_end ? json("end") : json(p.value));
      j["positions"] = pos;
      break;
    }
    case SegmentFamily::Kind::s_mu: {
      j["kind"] = "s_mu";
      j["mu"] = fam.mu;
      json segs = json::array();
      for (const auto& g : fam.segments) segs.push_back(segment_to_json(g));
      j["segments"] = segs;
      break;
    }
    case SegmentFamily::Kind::adversarial_pair:
      j["kind"] = "adversarial_pair";
      break;
  }
  return j;
}

SegmentFamily family_from_json(const json& j) {
  SegmentFamily fam;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "s0_grid") {
    fam.kind = SegmentFamily::Kind::s0_grid;
    const auto& thetas = j.at("thetas");
    if (thetas.is_string() && thetas.get<std::string>() == "default")
      fam.default_thetas = true;
    else
      fam.thetas = thetas.get<std::vector<double>>();
  } else if (kind == "s_short") {
    fam.kind = SegmentFamily::Kind::s_short;
    for (const auto& rule : j.at("lengths")) fam.lengths.push_back(scale_rule_from_json(rule));
    for (const auto& p : j.at("positions")) {
      if (p.is_string() && p.get<std::string>() == "end")
        fam.positions.push_back(ShortPosition{true, 0.0});
      else
        fam.positions.push_back(ShortPosition{false, p.get<double>()});
    }
  } else if (kind == "s_mu") {
    fam.kind = SegmentFamily::Kind::s_mu;
    fam.mu = j.at("mu").get<double>();
    for (const auto& g : j.at("segments")) fam.segments.push_back(segment_from_json(g));
  } else if (kind == "adversarial_pair") {
    fam.kind = SegmentFamily::Kind::adversarial_pair;
  } else {
    throw std::invalid_argument("unknown segment family kind: " + kind);
  }
  return fam;
}

std::string task_name(TaskKind task) {
  switch (task) {
    case TaskKind::risk: return "risk";
    case TaskKind::detection: return "detection";
    case TaskKind::tail: return "tail";
  }
  return "?";
}

TaskKind task_from_name(const std::string& name) {
  if (name == "risk") return TaskKind::risk;
  if (name == "detection") return TaskKind::detection;
  if (name == "tail") return TaskKind::tail;
  throw std::invalid_argument("unknown task: " + name);
}

std::string alt_kind_name(AlternativeKind kind) {
  switch (kind) {
    case AlternativeKind::explicit_segments: return "explicit";
    case AlternativeKind::left_anchored: return "left_anchored";
    case AlternativeKind::centered: return "centered";
  }
  return "?";
}

}  // namespace

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["task"] = task_name(cfg.task);
  j["master_seed"] = cfg.master_seed;
  j["design"] = design_name(cfg.design);
  j["noise"] = {{"family", noise_family_name(cfg.noise.family)},
                {"sigma", cfg.noise.sigma}};
  j["n_grid"] = cfg.n_grid;
  j["reps"] = cfg.reps;
  if (cfg.task == TaskKind::detection) {
    j["test"] = test_name(cfg.test);
    j["h_rule"] = scale_rule_to_json(cfg.h_rule);
    j["c"] = cfg.c;
    if (cfg.alt_kind == AlternativeKind::explicit_segments) {
      json segs = json::array();
      for (const auto& g : cfg.alternatives) segs.push_back(segment_to_json(g));
      j["alternatives"] = segs;
    } else {
      j["alternatives"] = alt_kind_name(cfg.alt_kind);
    }
  } else {
    j["estimator"] = estimator_name(cfg.estimator);
    if (cfg.estimator == EstimatorKind::two_step) j["mu"] = cfg.mu;
    j["segment_family"] = family_to_json(cfg.family);
    if (cfg.task == TaskKind::tail) j["x_grid"] = cfg.x_grid;
  }
  return j.dump(2) + "\n";
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig cfg;
  cfg.task = task_from_name(j.at("task").get<std::string>());
  cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
  cfg.design = design_from_name(j.at("design").get<std::string>());
  const auto& noise = j.at("noise");
  cfg.noise = NoiseSpec::make(
      noise_family_from_name(noise.at("family").get<std::string>()),
      noise.at("sigma").get<double>());
  cfg.n_grid = j.at("n_grid").get<std::vector<std::size_t>>();
  cfg.reps = j.at("reps").get<long>();
  if (cfg.task == TaskKind::detection) {
    cfg.test = test_from_name(j.at("test").get<std::string>());
    cfg.h_rule = scale_rule_from_json(j.at("h_rule"));
    cfg.c = j.value("c", 0.5);
    const auto& alts = j.at("alternatives");
    if (alts.is_string()) {
      const std::string name = alts.get<std::string>();
      if (name == "left_anchored")
        cfg.alt_kind = AlternativeKind::left_anchored;
      else if (name == "centered")
        cfg.alt_kind = AlternativeKind::centered;
      else
        throw std::invalid_argument("unknown alternatives kind: " + name);
    } else {
      cfg.alt_kind = AlternativeKind::explicit_segments;
      for (const auto& g : alts) cfg.alternatives.push_back(segment_from_json(g));
    }
  } else {
    cfg.estimator = estimator_from_name(j.at("estimator").get<std::string>());
    cfg.family = family_from_json(j.at("segment_family"));
    if (j.contains("mu"))
      cfg.mu = j.at("mu").get<double>();
    else if (cfg.family.kind == SegmentFamily::Kind::s_mu)
      cfg.mu = cfg.family.mu;
    if (cfg.task == TaskKind::tail)
      cfg.x_grid = j.at("x_grid").get<std::vector<double>>();
  }
  cfg.validate();
  return cfg;
}

std::string estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::one_changepoint: return "one-cp";
    case EstimatorKind::segment_lse: return "lse";
    case EstimatorKind::two_step: return "two-step";
  }
  return "?";
}

EstimatorKind estimator_from_name(const std::string& name) {
  if (name == "one-cp") return EstimatorKind::one_changepoint;
  if (name == "lse") return EstimatorKind::segment_lse;
  if (name == "two-step") return EstimatorKind::two_step;
  throw std::invalid_argument("unknown estimator: " + name);
}

}  // namespace segsig
