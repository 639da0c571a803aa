// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "onebit/harness.hpp"
#include "onebit/parallel.hpp"
#include "onebit/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::string> pilot;
  std::optional<std::string> estimators;
  std::optional<std::size_t> budget;
  std::optional<std::string> values;
  std::optional<long> n;
  std::optional<long> m;
  std::optional<std::string> snr;
  std::optional<std::string> cov_mode;
  std::optional<std::string> metrics;
  int threads = 0;
  std::vector<int> only;
};

enum class Mode { SweepSnr, SweepDim, SweepPilots, Cdf, Rate };

void add_run_flags(CLI::App& cmd, Options& o) {
  cmd.add_option("--config", o.config, "Scenario file ([name] sections of key = value)");
  cmd.add_option("--out", o.out, "CSV output path (default: stdout)");
  cmd.add_option("--seed", o.seed, "Master seed");
  cmd.add_option("--trials", o.trials, "Monte-Carlo trials per sweep point (>= 100)");
  cmd.add_option("--pilot", o.pilot, "Pilot sequence: optimal|ones");
  cmd.add_option("--estimators", o.estimators,
                 "Comma list of bussgang,cme_closed,cme_numeric,cme_noiseless,unquantized_lmmse");
  cmd.add_option("--budget", o.budget, "Samples for numeric CME and Gaussian integration");
  cmd.add_option("--values", o.values, "Comma list of sweep values (SNR in dB, N or M)");
  cmd.add_option("--n", o.n, "Antennas N when not swept");
  cmd.add_option("--m", o.m, "Pilots M when not swept");
  cmd.add_option("--snr", o.snr, "SNR in dB when not swept (inf for noiseless)");
  cmd.add_option("--cov-mode", o.cov_mode, "Channel covariance: fixed|per_trial");
  cmd.add_option("--metrics", o.metrics, "Comma list of nmse,cosine,rate");
}

onebit::SweepKind sweep_of(Mode mode) {
  switch (mode) {
    case Mode::SweepDim: return onebit::SweepKind::Dim;
    case Mode::SweepPilots: return onebit::SweepKind::Pilots;
    default: return onebit::SweepKind::Snr;
  }
}

std::string default_values(Mode mode) {
  switch (mode) {
    case Mode::SweepDim: return "1,2,3,4";
    case Mode::SweepPilots: return "1,2,4,8,16";
    case Mode::Cdf: return "inf";
    default: return "-10,-5,0,5,10,15,20,25,30";
  }
}

void apply_overrides(onebit::ScenarioSpec& s, const Options& o) {
  if (o.seed) s.seed = *o.seed;
  if (o.trials) s.trials = *o.trials;
  if (o.pilot) s.pilot = onebit::parse_pilot(*o.pilot);
  if (o.estimators) s.estimators = onebit::parse_estimator_list(*o.estimators);
  if (o.budget) {
    s.budgets.prior_samples = *o.budget;
    s.budgets.mvn.sample_count = *o.budget;
  }
  if (o.n) s.n = *o.n;
  if (o.m) s.m = *o.m;
  if (o.cov_mode) s.cov_mode = onebit::parse_cov_mode(*o.cov_mode);
  if (o.snr) {
    const auto v = onebit::parse_number_list(*o.snr);
    if (v.size() != 1) throw onebit::Error(onebit::ErrorCode::ConfigError, "--snr takes one value");
    s.snr_db = v.front();
  }
  if (o.values) s.values = onebit::parse_number_list(*o.values);
}

std::vector<onebit::ScenarioSpec> build_specs(Mode mode, const Options& o) {
  std::vector<onebit::ScenarioSpec> specs;
  if (!o.config.empty()) {
    for (auto& s : onebit::load_config(o.config)) {
      if (mode == Mode::Cdf || mode == Mode::Rate || s.sweep == sweep_of(mode)) specs.push_back(std::move(s));
    }
    if (specs.empty()) throw onebit::Error(onebit::ErrorCode::ConfigError, "no scenario in the config matches");
  } else {
    onebit::ScenarioSpec s;
    s.name = mode == Mode::Cdf ? "cdf" : mode == Mode::Rate ? "rate" : std::string(to_string(sweep_of(mode)));
    s.sweep = sweep_of(mode);
    s.values = onebit::parse_number_list(default_values(mode));
    s.estimators = {onebit::EstimatorKind::Bussgang, onebit::EstimatorKind::CmeClosed};
    specs.push_back(std::move(s));
  }
  for (auto& s : specs) {
    apply_overrides(s, o);
    if (mode == Mode::Rate) s.metrics = {onebit::MetricKind::Rate};
    if (o.metrics) s.metrics = onebit::parse_metric_list(*o.metrics);
    s.validate();
  }
  return specs;
}

int run(Mode mode, const Options& o) {
  const auto specs = build_specs(mode, o);
  std::vector<onebit::SweepRow> rows;
  for (const auto& s : specs) {
    auto part = mode == Mode::Cdf ? onebit::run_cdf(s) : onebit::run_scenario(s);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  if (o.out.empty()) {
    onebit::write_csv(std::cout, rows);
  } else {
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw onebit::Error(onebit::ErrorCode::ConfigError, "cannot write '" + o.out + "'");
    onebit::write_csv(file, rows);
  }
  int code = kExitOk;
  for (const auto& r : rows) {
    if (r.metric_name.rfind("error:", 0) != 0) continue;
    if (r.metric_name == "error:" + std::string(onebit::to_string(onebit::ErrorCode::ConfigError))) return kExitUsage;
    code = kExitNumeric;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-bit channel estimation experiments"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--threads", o.threads, "OpenMP threads (0 keeps the runtime default)");

  struct Sub {
    const char* name;
    const char* help;
    Mode mode;
  };
  const Sub subs[] = {
      {"sweep-snr", "Sweep the SNR in dB", Mode::SweepSnr},
      {"sweep-dim", "Sweep the antenna count N", Mode::SweepDim},
      {"sweep-pilots", "Sweep the pilot count M", Mode::SweepPilots},
      {"cdf", "Quantiles of the per-trial squared error at one point", Mode::Cdf},
      {"rate", "Achievable-rate lower bound over an SNR sweep", Mode::Rate},
  };
  std::optional<Mode> chosen;
  for (const auto& sub : subs) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    add_run_flags(*cmd, o);
    cmd->callback([&chosen, mode = sub.mode] { chosen = mode; });
  }
  CLI::App* validate = app.add_subcommand("validate", "Run the acceptance suite");
  validate->add_option("--only", o.only, "Criterion ids to run (default: all)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (o.threads > 0) onebit::set_threads(o.threads);

  try {
    if (validate->parsed()) {
      const auto results = onebit::run_validation(o.only);
      onebit::write_report(std::cout, results);
      return onebit::all_passed(results) ? kExitOk : kExitValidation;
    }
    return run(*chosen, o);
  } catch (const onebit::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const bool usage = e.code() == onebit::ErrorCode::ConfigError || e.code() == onebit::ErrorCode::InvalidArgument ||
                       e.code() == onebit::ErrorCode::InvalidPhases;
    return usage ? kExitUsage : kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}
