#include "segsig/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "segsig/analytics.hpp"
#include "segsig/detection.hpp"
#include "segsig/estimation.hpp"
#include "segsig/model.hpp"
#include "segsig/montecarlo.hpp"

namespace segsig::cli {

namespace {

using nlohmann::json;

Segment parse_segment(const std::string& text) {
  if (text == "empty") return Segment::empty();
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("--segment expects 'a,b' or 'empty'");
  return Segment::closed(std::stod(text.substr(0, comma)),
                         std::stod(text.substr(comma + 1)));
}

NoiseSpec parse_noise(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("--noise expects 'family:sigma'");
  return NoiseSpec::make(noise_family_from_name(text.substr(0, colon)),
                         std::stod(text.substr(colon + 1)));
}

Sample load_sample(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  return read_sample_csv(in);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

json outcome_to_json(const std::string& test, const TestOutcome& t) {
  json j;
  j["test"] = test;
  j["decision"] = t.decision;
  j["statistic"] = t.statistic;  // non-finite values render as null
  j["aux"] = t.aux;
  if (!t.flag.empty()) j["flag"] = t.flag;
  return j;
}

json estimate_to_json(const EstimateResult& e) {
  json j;
  j["method"] = e.method;
  j["a"] = e.segment.a;
  j["b"] = e.segment.b;
  j["empty"] = e.segment.is_empty;
  j["objective"] = e.objective;
  j["indices"] = e.indices;
  return j;
}

void print_outcome_text(const std::string& test, const TestOutcome& t,
                        std::ostream& out) {
  out << "test: " << test << "\ndecision: " << t.decision
      << "\nstatistic: " << t.statistic << "\n";
  for (const auto& [key, value] : t.aux) out << key << ": " << value << "\n";
  if (!t.flag.empty()) out << "flag: " << t.flag << "\n";
}

struct SweepArgs {
  std::string config_path;
  std::string out_path;
  unsigned threads = 1;
};

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return experiment_config_from_json(buf.str());
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Change-point detection and segment estimation toolkit"};
  app.name("segsig");
  app.require_subcommand(1);
  // the detect verb exposes --h, which clashes with the default -h help alias
  app.set_help_flag("--help", "Print this help message and exit");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate a sample CSV");
  std::string sim_design = "dd", sim_segment, sim_noise, sim_out;
  std::size_t sim_n = 0;
  std::uint64_t sim_seed = 0;
  simulate->add_option("--design", sim_design)
      ->check(CLI::IsMember({"dd", "rd"}))
      ->required();
  simulate->add_option("--n", sim_n)->required();
  simulate->add_option("--segment", sim_segment, "'a,b' or 'empty'")->required();
  simulate->add_option("--noise", sim_noise, "family:sigma")->required();
  simulate->add_option("--seed", sim_seed)->required();
  simulate->add_option("--out", sim_out)->required();

  // detect
  auto* detect = app.add_subcommand("detect", "Run a detection test on a sample");
  std::string det_test, det_in;
  double det_h = 0.0, det_c = 0.5;
  bool det_json = false;
  detect->add_option("--test", det_test)
      ->check(CLI::IsMember({"counting", "scan"}))
      ->required();
  detect->add_option("--h", det_h)->required();
  detect->add_option("--c", det_c);
  detect->add_option("--in", det_in)->required();
  detect->add_flag("--json", det_json);

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Run an estimator on a sample");
  std::string est_method, est_in;
  double est_mu = -1.0;
  bool est_json = false;
  estimate->add_option("--method", est_method)
      ->check(CLI::IsMember({"one-cp", "lse", "two-step"}))
      ->required();
  estimate->add_option("--mu", est_mu);
  estimate->add_option("--in", est_in)->required();
  estimate->add_flag("--json", est_json);

  // sweeps
  SweepArgs risk_args, tail_args;
  auto* risk = app.add_subcommand("risk-sweep",
                                  "Run a risk or detection sweep from a config");
  risk->add_option("--config", risk_args.config_path)->required();
  risk->add_option("--out", risk_args.out_path)->required();
  risk->add_option("--threads", risk_args.threads);

  auto* tail = app.add_subcommand("tail", "Run a tail experiment from a config");
  tail->add_option("--config", tail_args.config_path)->required();
  tail->add_option("--out", tail_args.out_path)->required();
  tail->add_option("--threads", tail_args.threads);

  // rates
  auto* rates = app.add_subcommand("rates", "Fit a rate to a risk report");
  std::string rates_in, rates_member = "max_over_family", rates_out;
  bool rates_json = false;
  rates->add_option("--in", rates_in)->required();
  rates->add_option("--member", rates_member);
  rates->add_option("--out", rates_out);
  rates->add_flag("--json", rates_json);

  std::vector<char*> argv;
  std::vector<std::string> storage = args;
  storage.insert(storage.begin(), "segsig");
  argv.reserve(storage.size());
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    err << app.help();
    return 2;
  }

  // flag-value syntax is a usage problem, not a runtime one
  Segment sim_g;
  NoiseSpec sim_ns;
  try {
    if (simulate->parsed()) {
      sim_g = parse_segment(sim_segment);
      sim_ns = parse_noise(sim_noise);
    }
    if (estimate->parsed() && est_method == "two-step" &&
        !(est_mu > 0.0 && est_mu < 1.0))
      throw std::invalid_argument("--method two-step requires --mu in (0,1)");
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (simulate->parsed()) {
      RandomStream design_rng(derive_seed(sim_seed, {0}));
      RandomStream noise_rng(derive_seed(sim_seed, {1}));
      const auto design =
          make_design(design_from_name(sim_design), sim_n, design_rng);
      const Sample s = sample_observations(design, sim_g, sim_ns, noise_rng);
      auto file = open_output(sim_out);
      write_sample_csv(s, file);
      return 0;
    }

    if (detect->parsed()) {
      const Sample s = load_sample(det_in);
      const DetectionConfig cfg = DetectionConfig::make(det_h, det_c);
      const TestOutcome t = det_test == "counting" ? detect_left_anchored(s, cfg)
                                                   : detect_scan(s, cfg);
      if (det_json)
        out << outcome_to_json(det_test, t).dump(2) << "\n";
      else
        print_outcome_text(det_test, t, out);
      return 0;
    }

    if (estimate->parsed()) {
      const Sample s = load_sample(est_in);
      EstimateResult e;
      if (est_method == "one-cp")
        e = estimate_one_changepoint(s);
      else if (est_method == "lse")
        e = estimate_segment_lse(s);
      else
        e = estimate_segment_two_step(s, est_mu);
      if (est_json) {
        out << estimate_to_json(e).dump(2) << "\n";
      } else {
        out << "method: " << e.method << "\n";
        if (e.segment.is_empty)
          out << "segment: empty\n";
        else
          out << "segment: [" << e.segment.a << ", " << e.segment.b << "]\n";
        out << "objective: " << e.objective << "\n";
        for (const auto& [key, value] : e.indices)
          out << key << ": " << value << "\n";
      }
      return 0;
    }

    if (risk->parsed()) {
      const ExperimentConfig cfg = load_config(risk_args.config_path);
      auto file = open_output(risk_args.out_path);
      if (cfg.task == TaskKind::detection) {
        write_detection_sweep_csv(run_detection_sweep(cfg, risk_args.threads), file);
      } else if (cfg.task == TaskKind::risk) {
        const RiskReport report = run_risk_sweep(cfg, risk_args.threads);
        write_risk_report_csv(report, file);
        if (report.failures > 0) {
          err << "error: " << report.failures << " replication(s) failed\n";
          return 1;
        }
      } else {
        throw std::runtime_error("risk-sweep config must have task risk or detection");
      }
      return 0;
    }

    if (tail->parsed()) {
      const ExperimentConfig cfg = load_config(tail_args.config_path);
      const TailReport report = run_tail_experiment(cfg, tail_args.threads);
      auto file = open_output(tail_args.out_path);
      write_tail_report_csv(report, file);
      if (report.failures > 0) {
        err << "error: " << report.failures << " replication(s) failed\n";
        return 1;
      }
      return 0;
    }

    if (rates->parsed()) {
      std::ifstream in(rates_in);
      if (!in) throw std::runtime_error("cannot open report: " + rates_in);
      const auto rows = read_risk_report_csv(in);
      std::vector<std::size_t> ns;
      std::vector<double> risks;
      std::size_t max_n = 0;
      long reps = 0;
      for (const auto& r : rows) {
        const bool selected = rates_member == "max_over_family"
                                  ? r.max_over_family
                                  : r.member == rates_member;
        if (!selected) continue;
        ns.push_back(r.n);
        risks.push_back(r.mean_loss);
        max_n = std::max(max_n, r.n);
        reps = std::max(reps, r.reps);
      }
      if (ns.size() < 2)
        throw std::runtime_error("rates: need at least two matching report rows");
      const double floor = zero_risk_floor(max_n, reps);
      for (double& r : risks) r = std::max(r, floor);
      const RateFit fit = fit_rate(ns, risks);
      json j;
      j["slope"] = fit.slope;
      j["intercept"] = fit.intercept;
      j["r_squared"] = fit.r_squared;
      j["n_points"] = fit.points.size();
      if (!rates_out.empty()) {
        auto file = open_output(rates_out);
        file << j.dump(2) << "\n";
      }
      if (rates_json)
        out << j.dump(2) << "\n";
      else
        out << "slope: " << fit.slope << "\nintercept: " << fit.intercept
            << "\nr_squared: " << fit.r_squared << "\npoints: " << fit.points.size()
            << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace segsig::cli
