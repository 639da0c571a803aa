// SPDX-License-Identifier: Apache-2.0

#include "onebit/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "onebit/bussgang.hpp"
#include "onebit/cme.hpp"
#include "onebit/gaussian.hpp"
#include "onebit/harness.hpp"
#include "onebit/metrics.hpp"
#include "onebit/parallel.hpp"
#include "onebit/rng.hpp"

namespace onebit {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Pinned tolerances and budgets.
constexpr std::size_t kUnivariateTrials = 100000;
constexpr double kUnivariateMseTol = 0.005;
constexpr double kEstimatorMatchTol = 1e-12;
constexpr double kCrossoverTolDb = 0.01;
constexpr double kMultipilotGapTol = 1e-10;
constexpr double kInverseTol = 1e-10;
constexpr double kLimitGapTol = 2e-3;
constexpr Index kMonotoneMaxM = 512;
constexpr double kZLimit = 3.0;
constexpr double kRoundingFloor = 1e-12;
constexpr double kBivariateTol = 1e-3;
constexpr std::size_t kOracleSamples = 400000;
constexpr std::size_t kOracleMinGroup = 1000;
constexpr std::size_t kDeskTrials = 10000;
constexpr double kAngleTol = 1e-12;
constexpr std::size_t kRandomTriples = 20;
constexpr std::uint64_t kSeed = 20240611;

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double circular_gap(double a, double b) {
  const double d = std::remainder(a - b, kTwoPi);
  return std::abs(d);
}

MeanWithError summarize(const std::vector<double>& xs) {
  MetricAccumulator acc;
  for (double x : xs) acc.add(x);
  return acc.result();
}

void univariate_noiseless(CriterionResult& out) {
  SystemConfig cfg;
  const auto trials = simulate_trials(cfg, kUnivariateTrials);
  const CMatrix a = system_matrix(pilot_vector(cfg.pilot, 1), 1);
  const BussgangEstimator bussgang(a, cfg.channel_cov, HermitianPSD::identity(1, 0.0));
  MetricAccumulator err;
  double max_gap = 0.0;
  for (const auto& t : trials) {
    const Complex cme = cme_univariate(t.r[0], 1.0, 0.0);
    const Complex bg = bussgang.estimate(t.r)(0);
    max_gap = std::max(max_gap, std::abs(cme - bg));
    err.add(std::norm(t.h(0) - cme));
  }
  const double target = 1.0 - 2.0 / kPi;
  out.passed = std::abs(err.mean() - target) <= kUnivariateMseTol && max_gap <= kEstimatorMatchTol;
  out.detail = fmt("nmse=%.6f target=%.6f stderr=%.1e max|cme-bussgang|=%.1e", err.mean(), target, err.std_error(),
                   max_gap);
}

void snr_crossover(CriterionResult& out) {
  const double noiseless = mse_univariate_closed(1.0, 0.0);
  auto f = [&](double snr_db) { return mse_unquantized_closed(1.0, noise_var_from_snr(snr_db)) - noiseless; };
  double lo = -10.0;
  double hi = 30.0;
  if (!(f(lo) > 0.0 && f(hi) < 0.0)) {
    out.detail = "no sign change on [-10, 30] dB";
    return;
  }
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  const double found = 0.5 * (lo + hi);
  const double expected = 10.0 * std::log10(2.0 / (kPi - 2.0));
  out.passed = std::abs(found - expected) <= kCrossoverTolDb;
  out.detail = fmt("crossover=%.6f dB expected=%.6f dB", found, expected);
}

void multipilot_bussgang_mse(CriterionResult& out) {
  const double gap = multipilot_mse_gap(64, 2.0 / kPi);
  out.passed = gap <= kMultipilotGapTol;
  out.detail = fmt("max gap over M=1..64: %.2e", gap);
}

void closed_form_inverse(CriterionResult& out) {
  double worst = 0.0;
  Index worst_m = 0;
  for (Index m = 2; m <= 64; ++m) {
    const CVector a = pilot_vector(PilotKind::optimal(), m);
    const HermitianPSD c_r = arcsine_law(HermitianPSD(CMatrix(a * a.adjoint())));
    const double err = (cr_inverse_closed_form(m) * c_r.matrix() - CMatrix::Identity(m, m)).norm();
    if (err > worst) {
      worst = err;
      worst_m = m;
    }
  }
  out.passed = worst <= kInverseTol;
  out.detail = fmt("max ||C_r^-1 C_r - I||_F = %.2e at M=%ld", worst, static_cast<long>(worst_m));
}

void multipilot_limit(CriterionResult& out) {
  const double limit = mse_limit(1.0);
  const double at10 = mse_multipilot_closed(10, 1.0);
  bool monotone = true;
  bool bounded = true;
  double prev = mse_multipilot_closed(1, 1.0);
  for (Index m = 2; m <= kMonotoneMaxM; ++m) {
    const double v = mse_multipilot_closed(m, 1.0);
    monotone = monotone && v < prev;
    bounded = bounded && v > limit;
    prev = v;
  }
  out.passed = std::abs(at10 - limit) <= kLimitGapTol && monotone && bounded && mse_multipilot_closed(1, 1.0) > limit;
  out.detail = fmt("mse(M=10)=%.6f limit=%.6f gap=%.2e decreasing=%d bounded=%d", at10, limit, at10 - limit,
                   monotone, bounded);
}

void mvn_integration(CriterionResult& out) {
  IntegrationBudget budget;
  budget.seed = kSeed;
  double worst_excess = -1.0;
  std::string worst;
  for (Index n = 1; n <= 6; ++n) {
    for (std::uint64_t pattern = 0; pattern < 4; ++pattern) {
      std::vector<int> signs(static_cast<std::size_t>(n));
      for (Index i = 0; i < n; ++i) signs[static_cast<std::size_t>(i)] = ((pattern + i) % 3 == 0) ? -1 : 1;
      const auto p = mvn_orthant_prob(RVector::Zero(n), RMatrix::Identity(n, n), OrthantSpec(signs),
                                      budget.reseeded({static_cast<std::uint64_t>(n), pattern}));
      const double target = std::ldexp(1.0, -static_cast<int>(n));
      const double excess = std::abs(p.value - target) - (kZLimit * p.std_error + kRoundingFloor);
      if (excess > worst_excess) {
        worst_excess = excess;
        worst = fmt("N=%ld p=%.6g target=%.6g stderr=%.1e", static_cast<long>(n), p.value, target, p.std_error);
      }
    }
  }
  RMatrix biv(2, 2);
  biv << 1.0, 0.5, 0.5, 1.0;
  const auto p2 = mvn_orthant_prob(RVector::Zero(2), biv, OrthantSpec(std::vector<int>{1, 1}), budget);
  const bool biv_ok = std::abs(p2.value - 1.0 / 3.0) <= kBivariateTol;
  out.passed = worst_excess <= 0.0 && biv_ok;
  out.detail = "worst identity case: " + worst + fmt("; rho=0.5: %.6f vs 1/3", p2.value);
}

ScenarioSpec grouping_scenario() {
  ScenarioSpec s;
  s.name = "grouping";
  s.sweep = SweepKind::Dim;
  s.values = {2.0};
  s.m = 1;
  s.trials = kDeskTrials;
  s.seed = kSeed;
  s.budgets.mvn.seed = kSeed;
  s.metrics = {MetricKind::Nmse};
  return s;
}

void noiseless_cme_vs_grouping(CriterionResult& out) {
  const ScenarioSpec s = grouping_scenario();
  const SystemConfig cfg = s.point(0);
  const HermitianPSD& c_h = cfg.channel_cov;

  struct Group {
    std::size_t count = 0;
    RVector sum = RVector::Zero(4);
    RVector sumsq = RVector::Zero(4);
    QuantizedObs r;
  };
  std::map<std::string, Group> groups;
  for (const auto& h : sample_complex_gaussian(c_h, kOracleSamples, derive_key(kSeed, {stream_tag::channel}))) {
    const QuantizedObs r = quantize(h);
    std::string key;
    for (Index i = 0; i < r.size(); ++i) key += fmt("%d%d", r[i].real() > 0, r[i].imag() > 0);
    Group& g = groups[key];
    const RVector x = real_stack(h);
    g.count++;
    g.sum += x;
    g.sumsq += x.cwiseProduct(x);
    g.r = r;
  }
  double max_z = 0.0;
  std::size_t compared = 0;
  for (const auto& [key, g] : groups) {
    if (g.count < kOracleMinGroup) continue;
    const auto est = cme_multivariate_noiseless(g.r, c_h, s.budgets);
    const double cnt = static_cast<double>(g.count);
    const RVector mean = g.sum / cnt;
    const RVector var = (g.sumsq / cnt - mean.cwiseProduct(mean)) * (cnt / (cnt - 1.0));
    const RVector cme = real_stack(est.estimate);
    const RVector cme_se = real_stack(est.std_error);
    for (Index k = 0; k < 4; ++k) {
      const double se = std::sqrt(var(k) / cnt + cme_se(k) * cme_se(k));
      max_z = std::max(max_z, std::abs(cme(k) - mean(k)) / se);
    }
    ++compared;
  }

  const auto e_cme = per_trial_errors(s, 0, EstimatorKind::CmeNoiseless);
  const auto e_bg = per_trial_errors(s, 0, EstimatorKind::Bussgang);
  std::vector<double> diff(e_cme.size());
  for (std::size_t t = 0; t < diff.size(); ++t) diff[t] = e_cme[t] - e_bg[t];
  const auto d = summarize(diff);
  const auto m_cme = summarize(e_cme);
  const auto m_bg = summarize(e_bg);
  const bool correlated = !c_h.is_diagonal(1e-3);
  out.passed = correlated && compared >= 8 && max_z <= kZLimit && d.value <= kZLimit * d.std_error;
  out.detail = fmt("patterns=%zu max z=%.2f; mse cme=%.4f bussgang=%.4f paired diff=%.4f+-%.4f", compared, max_z,
                   m_cme.value, m_bg.value, d.value, d.std_error);
}

void numeric_cme(CriterionResult& out) {
  CmeBudget budget;
  budget.mvn.seed = kSeed;
  double max_z = 0.0;
  bool degenerate = false;
  {
    const CMatrix a = CMatrix::Ones(1, 1);
    const NumericCme est(a, HermitianPSD::identity(1), HermitianPSD::identity(1, noise_var_from_snr(0.0)), budget);
    for (const auto& r : reachable_patterns({0.0})) {
      const auto res = est.estimate(r);
      degenerate = degenerate || res.degenerate;
      const Complex ref = cme_univariate(r[0], 1.0, noise_var_from_snr(0.0));
      max_z = std::max({max_z, std::abs(res.estimate(0).real() - ref.real()) / res.std_error(0).real(),
                        std::abs(res.estimate(0).imag() - ref.imag()) / res.std_error(0).imag()});
    }
  }
  const double z1 = max_z;
  max_z = 0.0;
  {
    const auto psi = PilotKind::optimal().phases(2);
    const CMatrix a = system_matrix(pilot_vector(PilotKind::optimal(), 2), 1);
    const NumericCme est(a, HermitianPSD::identity(1), HermitianPSD::identity(2, 1e-6), budget);
    for (const auto& r : reachable_patterns(psi)) {
      const auto res = est.estimate(r);
      degenerate = degenerate || res.degenerate;
      const Complex ref = cme_multipilot(r, 1.0);
      max_z = std::max({max_z, std::abs(res.estimate(0).real() - ref.real()) / res.std_error(0).real(),
                        std::abs(res.estimate(0).imag() - ref.imag()) / res.std_error(0).imag()});
    }
  }
  out.passed = !degenerate && z1 <= kZLimit && max_z <= kZLimit;
  out.detail = fmt("max z (N=M=1, 0 dB)=%.2f; max z (M=2, eta2=1e-6)=%.2f", z1, max_z);
}

void boundary_angle_agreement(CriterionResult& out) {
  double worst = 0.0;
  std::size_t patterns = 0;
  std::size_t seams = 0;
  bool counts_ok = true;
  bool consistent = true;
  for (Index m = 1; m <= 16; ++m) {
    const auto psi = PilotKind::optimal().phases(m);
    const auto rs = reachable_patterns(psi);
    counts_ok = counts_ok && static_cast<Index>(rs.size()) == 4 * m;
    for (const auto& r : rs) {
      const SectorBounds seq = boundary_angles(r, psi);
      const SectorBounds compact = boundary_angles_compact(r);
      consistent = consistent && seq.consistent && compact.consistent;
      worst = std::max({worst, circular_gap(seq.phi_low, compact.phi_low), std::abs(seq.width() - compact.width())});
      bool q1 = false;
      bool q4 = false;
      for (Index i = 0; i < r.size(); ++i) {
        q1 = q1 || (r[i].real() > 0 && r[i].imag() > 0);
        q4 = q4 || (r[i].real() > 0 && r[i].imag() < 0);
      }
      seams += (q1 && q4) ? 1 : 0;
      ++patterns;
    }
  }
  out.passed = counts_ok && consistent && seams > 0 && worst <= kAngleTol;
  out.detail = fmt("patterns=%zu seam patterns=%zu max deviation=%.1e", patterns, seams, worst);
}

void stochastic_resonance(CriterionResult& out) {
  ScenarioSpec s;
  s.name = "resonance";
  s.sweep = SweepKind::Snr;
  s.values = {0, 5, 10, 15, 20, 25, 30};
  s.n = 1;
  s.m = 10;
  s.estimators = {EstimatorKind::CmeNumeric};
  s.metrics = {MetricKind::Nmse};
  s.trials = kDeskTrials;
  s.seed = kSeed;
  const double limit = mse_limit(1.0);
  const SweepRow* best = nullptr;
  const auto rows = run_scenario(s);
  std::string curve;
  for (const auto& row : rows) {
    if (row.estimator != "cme_numeric" || row.metric_name != "nmse") continue;
    curve += fmt(" %g:%.4f", row.snr_db, row.value);
    if (best == nullptr || row.value < best->value) best = &row;
  }
  if (best == nullptr) {
    out.detail = "no numeric CME rows";
    return;
  }
  out.passed = best->value + kZLimit * best->std_error < limit;
  out.detail = fmt("min mse=%.4f+-%.4f at %g dB, limit=%.4f; curve", best->value, best->std_error, best->snr_db,
                   limit) + curve;
}

MeanWithError sector_cme_mse(const std::vector<double>& psi, std::vector<double>* per_trial = nullptr) {
  SystemConfig cfg;
  cfg.m = 3;
  cfg.pilot = PilotKind::explicit_phases(psi);
  cfg.seed = kSeed;
  const auto trials = simulate_trials(cfg, kDeskTrials);
  std::vector<double> err(trials.size());
  parallel_for(trials.size(), Exec::Parallel, [&](std::size_t t) {
    err[t] = std::norm(trials[t].h(0) - cme_sector(boundary_angles(trials[t].r, psi), 1.0));
  });
  if (per_trial) *per_trial = err;
  return summarize(err);
}

void pilot_optimality(CriterionResult& out) {
  const auto eq = sector_cme_mse(PilotKind::optimal().phases(3));
  Stream stream(derive_key(kSeed, {stream_tag::phases}));
  std::size_t beaten = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  double best_rand = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kRandomTriples; ++i) {
    double u = 0.0;
    double v = 0.0;
    do {
      u = 0.5 * kPi * stream.uniform_open();
      v = 0.5 * kPi * stream.uniform_open();
    } while (u == v);
    const auto rnd = sector_cme_mse({0.0, std::min(u, v), std::max(u, v)});
    const double combined = std::sqrt(eq.std_error * eq.std_error + rnd.std_error * rnd.std_error);
    const double margin = rnd.value + combined - eq.value;
    min_margin = std::min(min_margin, margin);
    best_rand = std::min(best_rand, rnd.value);
    beaten += margin < 0.0 ? 1 : 0;
  }
  out.passed = beaten == 0;
  out.detail = fmt("equidistant mse=%.4f+-%.4f best random=%.4f violations=%zu min margin=%.4f", eq.value,
                   eq.std_error, best_rand, beaten, min_margin);
}

void determinism(CriterionResult& out) {
  std::vector<ScenarioSpec> specs;
  for (auto mode : {CovMode::Fixed, CovMode::PerTrial}) {
    ScenarioSpec s;
    s.name = mode == CovMode::Fixed ? "det_fixed" : "det_per_trial";
    s.sweep = SweepKind::Snr;
    s.values = {0.0, 10.0, std::numeric_limits<double>::infinity()};
    s.n = 2;
    s.m = 1;
    s.estimators = {EstimatorKind::Bussgang, EstimatorKind::CmeClosed, EstimatorKind::CmeNumeric,
                    EstimatorKind::CmeNoiseless, EstimatorKind::UnquantizedLmmse};
    s.trials = 200;
    s.budgets.prior_samples = 2000;
    s.budgets.mvn.sample_count = 2000;
    s.cov_mode = mode;
    s.seed = kSeed;
    specs.push_back(s);
  }
  auto render = [&] {
    std::string csv;
    for (const auto& s : specs) csv += to_csv(run_scenario(s));
    return csv;
  };
  const int saved = max_threads();
  set_threads(1);
  const std::string one = render();
  set_threads(4);
  const std::string four = render();
  const std::string again = render();
  set_threads(saved);
  out.passed = one == four && four == again;
  out.detail = fmt("%zu bytes, 1 vs 4 threads %s, rerun %s", one.size(), one == four ? "identical" : "DIFFER",
                   four == again ? "identical" : "DIFFERS");
}

}  // namespace

std::vector<QuantizedObs> reachable_patterns(const std::vector<double>& psi) {
  std::vector<double> cuts;
  for (double p : psi)
    for (int k = 0; k < 4; ++k) cuts.push_back(std::fmod(k * 0.5 * kPi - p + kTwoPi, kTwoPi));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double x, double y) { return y - x < 1e-12; }), cuts.end());
  CVector a(static_cast<Index>(psi.size()));
  for (std::size_t k = 0; k < psi.size(); ++k) a(static_cast<Index>(k)) = std::polar(1.0, psi[k]);
  std::vector<QuantizedObs> out;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const double next = i + 1 < cuts.size() ? cuts[i + 1] : cuts.front() + kTwoPi;
    out.push_back(quantize(CVector(a * std::polar(1.0, 0.5 * (cuts[i] + next)))));
  }
  return out;
}

double multipilot_mse_gap(Index m_max, double k) {
  double worst = 0.0;
  for (Index m = 1; m <= m_max; ++m) {
    const CVector a = pilot_vector(PilotKind::optimal(), m);
    const HermitianPSD c_r = arcsine_law(HermitianPSD(CMatrix(a * a.adjoint())));
    const CVector x = c_r.matrix().fullPivLu().solve(a);
    const double numeric = 1.0 - k * a.dot(x).real();
    worst = std::max(worst, std::abs(mse_multipilot_closed(m, 1.0) - numeric));
  }
  return worst;
}

std::vector<Criterion> acceptance_criteria() {
  return {
      {1, "univariate-noiseless-mse", 5.0, univariate_noiseless},
      {2, "snr-crossover", 1.0, snr_crossover},
      {3, "multipilot-bussgang-mse", 1.0, multipilot_bussgang_mse},
      {4, "closed-form-cr-inverse", 1.0, closed_form_inverse},
      {5, "multipilot-cme-limit", 1.0, multipilot_limit},
      {6, "mvn-orthant-integration", 10.0, mvn_integration},
      {7, "noiseless-cme-vs-grouping", 60.0, noiseless_cme_vs_grouping},
      {8, "numeric-cme", 60.0, numeric_cme},
      {9, "boundary-angles", 1.0, boundary_angle_agreement},
      {10, "stochastic-resonance", 600.0, stochastic_resonance},
      {11, "pilot-optimality", 300.0, pilot_optimality},
      {12, "determinism", 0.0, determinism},
  };
}

std::vector<CriterionResult> run_validation(const std::vector<int>& ids) {
  std::vector<CriterionResult> results;
  for (const auto& c : acceptance_criteria()) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), c.id) == ids.end()) continue;
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.time_limit = c.time_limit;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.check(r);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && r.seconds > c.time_limit) {
      r.passed = false;
      r.detail += fmt(" (over time limit %.0f s)", c.time_limit);
    }
    results.push_back(std::move(r));
  }
  return results;
}

void write_report(std::ostream& os, const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    os << (r.passed ? "PASS" : "FAIL") << "  " << fmt("%2d %-26s %8.3fs  ", r.id, r.name.c_str(), r.seconds)
       << r.detail << '\n';
  }
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.passed; });
}

}  // namespace onebit
