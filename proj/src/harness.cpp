// SPDX-License-Identifier: Apache-2.0

#include "onebit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "onebit/bussgang.hpp"
#include "onebit/gaussian.hpp"
#include "onebit/metrics.hpp"
#include "onebit/rng.hpp"

namespace onebit {
namespace {

constexpr std::size_t kMinTrials = 100;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto piece = trim(s.substr(start, comma == std::string_view::npos ? s.size() - start : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string error_metric(const Error& e) { return "error:" + std::string(to_string(e.code())); }

// Everything needed to evaluate estimators at one sweep point.
struct PointContext {
  SystemConfig cfg;
  CMatrix a;
  double eta2 = 0.0;
  HermitianPSD noise_cov = HermitianPSD::identity(1);
  std::vector<Trial> trials;
};

PointContext make_point(const ScenarioSpec& spec, std::size_t i) {
  PointContext ctx;
  ctx.cfg = spec.point(i);
  ctx.a = system_matrix(pilot_vector(ctx.cfg.pilot, ctx.cfg.m), ctx.cfg.n);
  ctx.eta2 = noise_var_from_snr(ctx.cfg.snr_db);
  ctx.noise_cov = HermitianPSD::identity(ctx.cfg.m * ctx.cfg.n, ctx.eta2);
  ctx.trials = simulate_trials(ctx.cfg, spec.trials);
  return ctx;
}

std::string pattern_key(const QuantizedObs& r) {
  std::string key(static_cast<std::size_t>(r.size()), '\0');
  for (Index i = 0; i < r.size(); ++i) {
    key[static_cast<std::size_t>(i)] = static_cast<char>((r[i].real() > 0 ? 1 : 0) | (r[i].imag() > 0 ? 2 : 0));
  }
  return key;
}

// Evaluates `fn` once per distinct observation pattern. Valid only when the
// estimator is a deterministic function of r (fixed covariance).
template <typename Fn>
std::vector<CVector> by_pattern(const std::vector<Trial>& trials, Fn&& fn) {
  std::unordered_map<std::string, std::size_t> slot_of;
  std::vector<std::size_t> representative;
  std::vector<std::size_t> slot(trials.size());
  for (std::size_t t = 0; t < trials.size(); ++t) {
    auto [it, inserted] = slot_of.try_emplace(pattern_key(trials[t].r), representative.size());
    if (inserted) representative.push_back(t);
    slot[t] = it->second;
  }
  std::vector<CVector> unique(representative.size());
  parallel_for(unique.size(), Exec::Parallel, [&](std::size_t u) { unique[u] = fn(trials[representative[u]].r); });
  std::vector<CVector> out(trials.size());
  for (std::size_t t = 0; t < trials.size(); ++t) out[t] = unique[slot[t]];
  return out;
}

template <typename Fn>
std::vector<CVector> per_trial(const std::vector<Trial>& trials, Fn&& fn) {
  std::vector<CVector> out(trials.size());
  parallel_for(trials.size(), Exec::Parallel, [&](std::size_t t) { out[t] = fn(trials[t]); });
  return out;
}

CVector closed_form_estimate(const PointContext& ctx, const Trial& trial) {
  const SystemConfig& cfg = ctx.cfg;
  const CMatrix& c_h = trial.channel_cov.matrix();
  if (cfg.n == 1 && cfg.m == 1) {
    CVector out(1);
    out(0) = cme_univariate(trial.r[0], c_h(0, 0).real(), ctx.eta2);
    return out;
  }
  if (cfg.n == 1) {
    const double sigma = std::sqrt(c_h(0, 0).real());
    CVector out(1);
    switch (cfg.pilot.variant()) {
      case PilotKind::Variant::Optimal:
        out(0) = cme_multipilot(trial.r, sigma);
        return out;
      case PilotKind::Variant::Explicit:
        out(0) = cme_sector(boundary_angles(trial.r, cfg.pilot.phases(cfg.m)), sigma);
        return out;
      case PilotKind::Variant::AllOnes:
        break;
    }
    throw Error(ErrorCode::InvalidArgument, "no closed-form CME for the all-ones pilot with M > 1");
  }
  if (cfg.m == 1 && trial.channel_cov.is_diagonal()) {
    CVector out(cfg.n);
    for (Index k = 0; k < cfg.n; ++k) out(k) = cme_univariate(trial.r[k], c_h(k, k).real(), ctx.eta2);
    return out;
  }
  throw Error(ErrorCode::InvalidArgument, "no closed-form CME for correlated multivariate channels");
}

std::vector<CVector> run_estimator(const PointContext& ctx, EstimatorKind kind, const CmeBudget& budget) {
  const SystemConfig& cfg = ctx.cfg;
  const bool fixed = cfg.cov_mode == CovMode::Fixed;
  switch (kind) {
    case EstimatorKind::Bussgang: {
      if (fixed) {
        const BussgangEstimator est(ctx.a, cfg.channel_cov, ctx.noise_cov);
        return per_trial(ctx.trials, [&](const Trial& t) { return est.estimate(t.r); });
      }
      return per_trial(ctx.trials, [&](const Trial& t) {
        return BussgangEstimator(ctx.a, t.channel_cov, ctx.noise_cov).estimate(t.r);
      });
    }
    case EstimatorKind::UnquantizedLmmse: {
      auto filter = [&](const HermitianPSD& c_h) {
        const CMatrix c_y = ctx.a * c_h.matrix() * ctx.a.adjoint() + ctx.noise_cov.matrix();
        return CMatrix(solve_regularized(c_y, ctx.a * c_h.matrix()).adjoint());
      };
      if (fixed) {
        const CMatrix w = filter(cfg.channel_cov);
        return per_trial(ctx.trials, [&](const Trial& t) { return CVector(w * t.y); });
      }
      return per_trial(ctx.trials, [&](const Trial& t) { return CVector(filter(t.channel_cov) * t.y); });
    }
    case EstimatorKind::CmeClosed:
      return per_trial(ctx.trials, [&](const Trial& t) { return closed_form_estimate(ctx, t); });
    case EstimatorKind::CmeNoiseless: {
      if (cfg.m != 1) throw Error(ErrorCode::InvalidArgument, "cme_noiseless needs M = 1");
      if (fixed) {
        return by_pattern(ctx.trials, [&](const QuantizedObs& r) {
          return cme_multivariate_noiseless(r, cfg.channel_cov, budget, Exec::Serial).estimate;
        });
      }
      return per_trial(ctx.trials, [&](const Trial& t) {
        return cme_multivariate_noiseless(t.r, t.channel_cov, budget, Exec::Serial).estimate;
      });
    }
    case EstimatorKind::CmeNumeric: {
      if (ctx.eta2 == 0.0) throw Error(ErrorCode::InvalidArgument, "cme_numeric needs finite SNR");
      if (fixed) {
        const NumericCme est(ctx.a, cfg.channel_cov, ctx.noise_cov, budget, Exec::Serial);
        return by_pattern(ctx.trials, [&](const QuantizedObs& r) { return est.estimate(r).estimate; });
      }
      return per_trial(ctx.trials, [&](const Trial& t) {
        return NumericCme(ctx.a, t.channel_cov, ctx.noise_cov, budget, Exec::Serial).estimate(t.r).estimate;
      });
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown estimator");
}

SweepRow base_row(const ScenarioSpec& spec, const SystemConfig& cfg, std::string estimator) {
  SweepRow row;
  row.scenario = spec.name;
  row.estimator = std::move(estimator);
  row.n = cfg.n;
  row.m = cfg.m;
  row.snr_db = cfg.snr_db;
  row.pilot = cfg.pilot.name();
  row.trials = spec.trials;
  row.seed = spec.seed;
  return row;
}

MeanWithError metric_value(const PointContext& ctx, const std::vector<CVector>& est, MetricKind metric) {
  MetricAccumulator acc;
  switch (metric) {
    case MetricKind::Nmse:
      for (std::size_t t = 0; t < est.size(); ++t) acc.add(normalized_squared_error(ctx.trials[t].h, est[t], ctx.cfg.n));
      break;
    case MetricKind::Cosine:
      for (std::size_t t = 0; t < est.size(); ++t) {
        if (ctx.trials[t].h.norm() == 0.0 || est[t].norm() == 0.0) continue;
        acc.add(cosine_similarity(ctx.trials[t].h, est[t]));
      }
      break;
    case MetricKind::Rate: {
      std::vector<double> terms(est.size());
      if (ctx.cfg.cov_mode == CovMode::Fixed) {
        const DataLinkModel link = DataLinkModel::from_channel(ctx.cfg.channel_cov, ctx.eta2);
        parallel_for(est.size(), Exec::Parallel,
                     [&](std::size_t t) { terms[t] = rate_term(ctx.trials[t].h, est[t], link); });
      } else {
        parallel_for(est.size(), Exec::Parallel, [&](std::size_t t) {
          terms[t] = rate_term(ctx.trials[t].h, est[t], DataLinkModel::from_channel(ctx.trials[t].channel_cov, ctx.eta2));
        });
      }
      for (double x : terms) acc.add(x);
      break;
    }
  }
  if (acc.count() == 0) throw Error(ErrorCode::EmptyInput, "metric has no valid trials");
  return acc.result();
}

// Share of trials whose pattern no noiseless channel can produce; the
// closed-form multipilot estimator runs mismatched on those.
MeanWithError inconsistent_fraction(const PointContext& ctx) {
  const auto psi = ctx.cfg.pilot.phases(ctx.cfg.m);
  MetricAccumulator acc;
  for (const auto& t : ctx.trials) acc.add(boundary_angles(t.r, psi).consistent ? 0.0 : 1.0);
  return acc.result();
}

void append_reference_rows(const ScenarioSpec& spec, const PointContext& ctx, std::vector<SweepRow>& rows) {
  const SystemConfig& cfg = ctx.cfg;
  if (std::find(spec.metrics.begin(), spec.metrics.end(), MetricKind::Nmse) == spec.metrics.end()) return;
  auto add = [&](const char* name, double value) {
    SweepRow row = base_row(spec, cfg, "closed_form");
    row.metric_name = name;
    row.value = value;
    rows.push_back(std::move(row));
  };
  if (cfg.n == 1 && cfg.m == 1) {
    add("nmse_quantized_closed", mse_univariate_closed(1.0, ctx.eta2));
    add("nmse_unquantized_closed", mse_unquantized_closed(1.0, ctx.eta2));
  } else if (cfg.n == 1 && ctx.eta2 == 0.0 && cfg.pilot.variant() == PilotKind::Variant::Optimal) {
    add("nmse_multipilot_closed", mse_multipilot_closed(cfg.m, 1.0));
    add("nmse_limit", mse_limit(1.0));
  }
}

std::string quantile_name(std::size_t percent) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "nmse_q%.2f", static_cast<double>(percent) / 100.0);
  return buf;
}

}  // namespace

std::string_view to_string(SweepKind k) noexcept {
  switch (k) {
    case SweepKind::Snr: return "snr";
    case SweepKind::Dim: return "dim";
    case SweepKind::Pilots: return "pilots";
  }
  return "unknown";
}

std::string_view to_string(EstimatorKind k) noexcept {
  switch (k) {
    case EstimatorKind::Bussgang: return "bussgang";
    case EstimatorKind::CmeClosed: return "cme_closed";
    case EstimatorKind::CmeNumeric: return "cme_numeric";
    case EstimatorKind::CmeNoiseless: return "cme_noiseless";
    case EstimatorKind::UnquantizedLmmse: return "unquantized_lmmse";
  }
  return "unknown";
}

std::string_view to_string(MetricKind k) noexcept {
  switch (k) {
    case MetricKind::Nmse: return "nmse";
    case MetricKind::Cosine: return "cosine";
    case MetricKind::Rate: return "rate";
  }
  return "unknown";
}

SweepKind parse_sweep_kind(std::string_view s) {
  for (auto k : {SweepKind::Snr, SweepKind::Dim, SweepKind::Pilots})
    if (s == to_string(k)) return k;
  throw Error(ErrorCode::ConfigError, "unknown sweep '" + std::string(s) + "'");
}

EstimatorKind parse_estimator(std::string_view s) {
  for (auto k : {EstimatorKind::Bussgang, EstimatorKind::CmeClosed, EstimatorKind::CmeNumeric,
                 EstimatorKind::CmeNoiseless, EstimatorKind::UnquantizedLmmse})
    if (s == to_string(k)) return k;
  throw Error(ErrorCode::ConfigError, "unknown estimator '" + std::string(s) + "'");
}

std::vector<EstimatorKind> parse_estimator_list(std::string_view s) {
  std::vector<EstimatorKind> out;
  for (const auto& item : split_list(s)) out.push_back(parse_estimator(item));
  return out;
}

std::vector<MetricKind> parse_metric_list(std::string_view s) {
  std::vector<MetricKind> out;
  for (const auto& item : split_list(s)) {
    bool found = false;
    for (auto k : {MetricKind::Nmse, MetricKind::Cosine, MetricKind::Rate})
      if (item == to_string(k)) {
        out.push_back(k);
        found = true;
      }
    if (!found) throw Error(ErrorCode::ConfigError, "unknown metric '" + item + "'");
  }
  return out;
}

namespace {
std::uint64_t parse_u64(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigError, std::string("invalid ") + what + " '" + s + "'");
  }
}
}  // namespace

PilotKind parse_pilot(std::string_view s) {
  if (s == "optimal") return PilotKind::optimal();
  if (s == "ones") return PilotKind::all_ones();
  throw Error(ErrorCode::ConfigError, "unknown pilot '" + std::string(s) + "' (optimal|ones)");
}

CovMode parse_cov_mode(std::string_view s) {
  if (s == "fixed") return CovMode::Fixed;
  if (s == "per_trial") return CovMode::PerTrial;
  throw Error(ErrorCode::ConfigError, "unknown cov_mode '" + std::string(s) + "' (fixed|per_trial)");
}

std::vector<double> parse_number_list(std::string_view s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) {
    if (item == "inf" || item == "+inf") {
      out.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, "invalid number '" + item + "'");
    }
  }
  return out;
}

void ScenarioSpec::validate() const {
  if (values.empty()) throw Error(ErrorCode::ConfigError, "scenario '" + name + "' has an empty sweep");
  if (trials < kMinTrials) throw Error(ErrorCode::ConfigError, "trials must be >= 100");
  if (metrics.empty()) throw Error(ErrorCode::ConfigError, "no metrics selected");
  for (double v : values) {
    if (sweep == SweepKind::Snr) {
      if (std::isnan(v) || v == -std::numeric_limits<double>::infinity()) {
        throw Error(ErrorCode::ConfigError, "invalid SNR value");
      }
    } else if (!(v >= 1.0) || v != std::floor(v) || std::isinf(v)) {
      throw Error(ErrorCode::ConfigError, "dimension and pilot sweeps need positive integers");
    }
  }
  try {
    budgets.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
}

SystemConfig ScenarioSpec::point(std::size_t i) const {
  SystemConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.snr_db = snr_db;
  const double v = values.at(i);
  switch (sweep) {
    case SweepKind::Snr: cfg.snr_db = v; break;
    case SweepKind::Dim: cfg.n = static_cast<Index>(v); break;
    case SweepKind::Pilots: cfg.m = static_cast<Index>(v); break;
  }
  cfg.pilot = pilot;
  cfg.cov_mode = cov_mode;
  cfg.seed = derive_key(seed, {static_cast<std::uint64_t>(i)});
  if (cov_mode == CovMode::Fixed) {
    cfg.channel_cov = cfg.n == 1 ? HermitianPSD::identity(1)
                                 : random_channel_covariance(cfg.n, derive_key(seed, {stream_tag::covariance,
                                                                                      static_cast<std::uint64_t>(cfg.n)}));
  } else {
    cfg.channel_cov = HermitianPSD::identity(cfg.n);
  }
  return cfg;
}

std::vector<SweepRow> run_scenario(const ScenarioSpec& spec) {
  spec.validate();
  std::vector<SweepRow> rows;
  if (spec.estimators.empty()) {
    SweepRow row = base_row(spec, spec.point(0), "none");
    row.metric_name = "error:" + std::string(to_string(ErrorCode::ConfigError));
    rows.push_back(std::move(row));
    return rows;
  }
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    PointContext ctx;
    try {
      ctx = make_point(spec, i);
    } catch (const Error& e) {
      SweepRow row = base_row(spec, spec.point(i), "none");
      row.metric_name = error_metric(e);
      rows.push_back(std::move(row));
      continue;
    }
    CmeBudget budget = spec.budgets;
    budget.mvn.seed = derive_key(spec.budgets.mvn.seed ^ spec.seed, {stream_tag::integration, i});
    for (auto kind : spec.estimators) {
      std::vector<CVector> est;
      try {
        est = run_estimator(ctx, kind, budget);
      } catch (const Error& e) {
        SweepRow row = base_row(spec, ctx.cfg, std::string(to_string(kind)));
        row.metric_name = error_metric(e);
        rows.push_back(std::move(row));
        continue;
      }
      for (auto metric : spec.metrics) {
        SweepRow row = base_row(spec, ctx.cfg, std::string(to_string(kind)));
        try {
          const MeanWithError v = metric_value(ctx, est, metric);
          row.metric_name = std::string(to_string(metric));
          row.value = v.value;
          row.std_error = v.std_error;
        } catch (const Error& e) {
          row.metric_name = error_metric(e);
        }
        rows.push_back(std::move(row));
      }
      if (kind == EstimatorKind::CmeClosed && ctx.cfg.n == 1 && ctx.cfg.m > 1 && ctx.eta2 > 0.0) {
        SweepRow row = base_row(spec, ctx.cfg, std::string(to_string(kind)));
        const MeanWithError v = inconsistent_fraction(ctx);
        row.metric_name = "inconsistent_fraction";
        row.value = v.value;
        row.std_error = v.std_error;
        rows.push_back(std::move(row));
      }
    }
    append_reference_rows(spec, ctx, rows);
  }
  return rows;
}

std::vector<double> per_trial_errors(const ScenarioSpec& spec, std::size_t point, EstimatorKind estimator) {
  spec.validate();
  const PointContext ctx = make_point(spec, point);
  CmeBudget budget = spec.budgets;
  budget.mvn.seed = derive_key(spec.budgets.mvn.seed ^ spec.seed, {stream_tag::integration, point});
  const auto est = run_estimator(ctx, estimator, budget);
  std::vector<double> out(est.size());
  for (std::size_t t = 0; t < est.size(); ++t) out[t] = normalized_squared_error(ctx.trials[t].h, est[t], ctx.cfg.n);
  return out;
}

std::vector<SweepRow> run_cdf(const ScenarioSpec& spec) {
  spec.validate();
  if (spec.values.size() != 1) throw Error(ErrorCode::ConfigError, "cdf needs a single sweep point");
  std::vector<SweepRow> rows;
  if (spec.estimators.empty()) {
    SweepRow row = base_row(spec, spec.point(0), "none");
    row.metric_name = "error:" + std::string(to_string(ErrorCode::ConfigError));
    rows.push_back(std::move(row));
    return rows;
  }
  const SystemConfig cfg = spec.point(0);
  for (auto kind : spec.estimators) {
    std::vector<double> errors;
    try {
      errors = per_trial_errors(spec, 0, kind);
    } catch (const Error& e) {
      SweepRow row = base_row(spec, cfg, std::string(to_string(kind)));
      row.metric_name = error_metric(e);
      rows.push_back(std::move(row));
      continue;
    }
    std::sort(errors.begin(), errors.end());
    const std::size_t n = errors.size();
    for (std::size_t pct = 0; pct <= 100; ++pct) {
      // Empirical inverse CDF: smallest x with F(x) >= q.
      const double q = static_cast<double>(pct) / 100.0;
      const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
      SweepRow row = base_row(spec, cfg, std::string(to_string(kind)));
      row.metric_name = quantile_name(pct);
      row.value = errors[rank == 0 ? 0 : std::min(rank, n) - 1];
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string_view csv_header() noexcept {
  return "scenario,estimator,N,M,snr_db,pilot,trials,seed,metric_name,value,stderr";
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << csv_header() << '\n';
  for (const auto& r : rows) {
    os << r.scenario << ',' << r.estimator << ',' << r.n << ',' << r.m << ',' << format_number(r.snr_db) << ','
       << r.pilot << ',' << r.trials << ',' << r.seed << ',' << r.metric_name << ',' << format_number(r.value) << ','
       << format_number(r.std_error) << '\n';
  }
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

std::vector<ScenarioSpec> parse_config(std::istream& is) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  std::vector<ScenarioSpec> out;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw Error(ErrorCode::ConfigError, "key '" + section + "' outside a [section]");
    ScenarioSpec spec;
    spec.name = section;
    for (const auto& [key, node] : body) {
      const std::string value = trim(node.get_value<std::string>());
      if (key == "sweep") spec.sweep = parse_sweep_kind(value);
      else if (key == "values") spec.values = parse_number_list(value);
      else if (key == "n") spec.n = static_cast<Index>(parse_u64(value, "n"));
      else if (key == "m") spec.m = static_cast<Index>(parse_u64(value, "m"));
      else if (key == "snr_db") {
        const auto v = parse_number_list(value);
        if (v.size() != 1) throw Error(ErrorCode::ConfigError, "snr_db takes one value");
        spec.snr_db = v.front();
      }
      else if (key == "estimators") spec.estimators = parse_estimator_list(value);
      else if (key == "metrics") spec.metrics = parse_metric_list(value);
      else if (key == "trials") spec.trials = parse_u64(value, "trials");
      else if (key == "prior_samples") spec.budgets.prior_samples = parse_u64(value, "prior_samples");
      else if (key == "mvn_samples") spec.budgets.mvn.sample_count = parse_u64(value, "mvn_samples");
      else if (key == "cov_mode") spec.cov_mode = parse_cov_mode(value);
      else if (key == "pilot") spec.pilot = parse_pilot(value);
      else if (key == "seed") spec.seed = parse_u64(value, "seed");
      else throw Error(ErrorCode::ConfigError, "unknown key '" + key + "' in [" + section + "]");
    }
    if (spec.n < 1 || spec.m < 1) throw Error(ErrorCode::ConfigError, "n and m must be >= 1");
    spec.validate();
    out.push_back(std::move(spec));
  }
  return out;
}

std::vector<ScenarioSpec> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config '" + path + "'");
  return parse_config(in);
}

}  // namespace onebit
