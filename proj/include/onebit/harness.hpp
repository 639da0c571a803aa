// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "onebit/channel.hpp"
#include "onebit/cme.hpp"

namespace onebit {

enum class SweepKind { Snr, Dim, Pilots };
enum class EstimatorKind { Bussgang, CmeClosed, CmeNumeric, CmeNoiseless, UnquantizedLmmse };
enum class MetricKind { Nmse, Cosine, Rate };

std::string_view to_string(SweepKind k) noexcept;
std::string_view to_string(EstimatorKind k) noexcept;
std::string_view to_string(MetricKind k) noexcept;
SweepKind parse_sweep_kind(std::string_view s);
EstimatorKind parse_estimator(std::string_view s);
std::vector<EstimatorKind> parse_estimator_list(std::string_view s);
std::vector<MetricKind> parse_metric_list(std::string_view s);
PilotKind parse_pilot(std::string_view s);
CovMode parse_cov_mode(std::string_view s);
/// Comma list of numbers; "inf" is accepted.
std::vector<double> parse_number_list(std::string_view s);

struct ScenarioSpec {
  std::string name = "scenario";
  SweepKind sweep = SweepKind::Snr;
  /// SNR values in dB, dimensions N, or pilot counts M depending on sweep.
  std::vector<double> values;
  /// Fixed parameters for the dimensions that are not swept.
  Index n = 1;
  Index m = 1;
  double snr_db = std::numeric_limits<double>::infinity();
  std::vector<EstimatorKind> estimators;
  std::vector<MetricKind> metrics{MetricKind::Nmse, MetricKind::Cosine, MetricKind::Rate};
  std::size_t trials = 10000;
  CmeBudget budgets{};
  CovMode cov_mode = CovMode::Fixed;
  PilotKind pilot = PilotKind::optimal();
  std::uint64_t seed = 0;

  /// Throws ConfigError on an empty sweep, trials < 100 or bad values.
  /// Estimator list emptiness is reported as an error row instead.
  void validate() const;
  /// Configuration of sweep point `i`.
  [[nodiscard]] SystemConfig point(std::size_t i) const;
};

struct SweepRow {
  std::string scenario;
  std::string estimator;
  Index n = 0;
  Index m = 0;
  double snr_db = 0.0;
  std::string pilot;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string metric_name;
  double value = 0.0;
  double std_error = 0.0;
};

/// Runs every sweep point and estimator; rows are ordered by (sweep point,
/// estimator, metric), followed by closed-form reference rows for the
/// point. Failures become rows with metric_name "error:<code>" and the run
/// continues. At finite SNR the closed-form multipilot CME also reports
/// "inconsistent_fraction", the share of noise-induced patterns it handled
/// in mismatched mode.
std::vector<SweepRow> run_scenario(const ScenarioSpec& spec);

/// Per-trial normalized squared errors at a single sweep point, reported
/// as empirical quantiles on a 1% grid (metric "nmse_q<level>").
std::vector<SweepRow> run_cdf(const ScenarioSpec& spec);

/// Per-trial normalized squared errors of one estimator, in trial order.
std::vector<double> per_trial_errors(const ScenarioSpec& spec, std::size_t point, EstimatorKind estimator);

/// Header line of the CSV format (no trailing newline).
std::string_view csv_header() noexcept;
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);
std::string to_csv(const std::vector<SweepRow>& rows);

/// Parses the "[section]\nkey = value" scenario format. Every key mirrors
/// a ScenarioSpec field; unknown keys throw ConfigError.
std::vector<ScenarioSpec> parse_config(std::istream& is);
std::vector<ScenarioSpec> load_config(const std::string& path);

}  // namespace onebit
