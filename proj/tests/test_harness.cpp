// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "onebit/harness.hpp"
#include "onebit/metrics.hpp"
#include "onebit/parallel.hpp"
#include "onebit/validation.hpp"

using namespace onebit;

namespace {

const SweepRow* find_row(const std::vector<SweepRow>& rows, std::string_view est, std::string_view metric,
                         double snr, Index m = -1) {
  for (const auto& r : rows)
    if (r.estimator == est && r.metric_name == metric && (r.snr_db == snr || (std::isinf(snr) && std::isinf(r.snr_db))) &&
        (m < 0 || r.m == m))
      return &r;
  return nullptr;
}

ScenarioSpec small_snr_spec() {
  ScenarioSpec s;
  s.name = "t";
  s.values = {-10.0, 0.0, 2.435, 10.0, 30.0, std::numeric_limits<double>::infinity()};
  s.estimators = {EstimatorKind::CmeClosed, EstimatorKind::UnquantizedLmmse, EstimatorKind::Bussgang};
  s.trials = 20000;
  s.seed = 4;
  return s;
}

}  // namespace

TEST_SUITE("harness-cli") {
  TEST_CASE("parsers") {
    CHECK(parse_sweep_kind("dim") == SweepKind::Dim);
    CHECK_THROWS_AS(parse_sweep_kind("x"), Error);
    CHECK(parse_estimator_list("bussgang, cme_numeric") ==
          std::vector<EstimatorKind>{EstimatorKind::Bussgang, EstimatorKind::CmeNumeric});
    CHECK_THROWS_AS(parse_estimator_list("bussgang,foo"), Error);
    CHECK(parse_metric_list("rate") == std::vector<MetricKind>{MetricKind::Rate});
    CHECK(parse_pilot("ones").variant() == PilotKind::Variant::AllOnes);
    CHECK_THROWS_AS(parse_pilot("random"), Error);
    CHECK(parse_cov_mode("per_trial") == CovMode::PerTrial);
    const auto v = parse_number_list("-3, 2.5,inf");
    REQUIRE(v.size() == 3);
    CHECK(v[0] == -3.0);
    CHECK(std::isinf(v[2]));
    CHECK_THROWS_AS(parse_number_list("1,2x"), Error);
  }

  TEST_CASE("spec validation") {
    ScenarioSpec s = small_snr_spec();
    CHECK_NOTHROW(s.validate());
    s.trials = 99;
    CHECK_THROWS_AS(s.validate(), Error);
    s = small_snr_spec();
    s.values.clear();
    CHECK_THROWS_AS(s.validate(), Error);
    s = small_snr_spec();
    s.sweep = SweepKind::Dim;
    s.values = {1.5};
    CHECK_THROWS_AS(s.validate(), Error);
  }

  TEST_CASE("sweep points") {
    ScenarioSpec s;
    s.sweep = SweepKind::Dim;
    s.values = {1, 3};
    s.m = 2;
    s.snr_db = 5.0;
    const SystemConfig a = s.point(0);
    const SystemConfig b = s.point(1);
    CHECK(a.n == 1);
    CHECK(b.n == 3);
    CHECK(b.m == 2);
    CHECK(b.snr_db == 5.0);
    CHECK(b.channel_cov.size() == 3);
    CHECK(std::abs(b.channel_cov.trace() - 3.0) < 1e-10);
    CHECK(s.point(1).channel_cov.matrix() == b.channel_cov.matrix());
  }

  TEST_CASE("univariate sweep agrees with the closed forms") {
    const auto rows = run_scenario(small_snr_spec());
    for (double snr : small_snr_spec().values) {
      const SweepRow* q = find_row(rows, "cme_closed", "nmse", snr);
      const SweepRow* qc = find_row(rows, "closed_form", "nmse_quantized_closed", snr);
      const SweepRow* u = find_row(rows, "unquantized_lmmse", "nmse", snr);
      const SweepRow* uc = find_row(rows, "closed_form", "nmse_unquantized_closed", snr);
      const SweepRow* b = find_row(rows, "bussgang", "nmse", snr);
      REQUIRE(q);
      REQUIRE(qc);
      REQUIRE(u);
      REQUIRE(uc);
      REQUIRE(b);
      CHECK(std::abs(q->value - qc->value) <= 3.0 * q->std_error);
      CHECK(std::abs(u->value - uc->value) <= 3.0 * u->std_error + 1e-15);
      CHECK(b->value == doctest::Approx(q->value).epsilon(1e-12));
    }
    // The quantized curve approaches 1 - 2/pi; the unquantized one crosses it near 2.435 dB.
    CHECK(find_row(rows, "closed_form", "nmse_quantized_closed", 30.0)->value ==
          doctest::Approx(0.3634).epsilon(2e-3));
    CHECK(std::abs(find_row(rows, "closed_form", "nmse_unquantized_closed", 2.435)->value - 0.36338) < 1e-4);
    for (const auto& r : rows) {
      CHECK(std::isfinite(r.value));
      CHECK(r.std_error >= 0.0);
    }
  }

  TEST_CASE("multipilot rows agree with the closed form") {
    ScenarioSpec s;
    s.sweep = SweepKind::Pilots;
    s.values = {1, 2, 4, 8};
    s.estimators = {EstimatorKind::CmeClosed, EstimatorKind::Bussgang};
    s.metrics = {MetricKind::Nmse};
    s.trials = 20000;
    const auto rows = run_scenario(s);
    const double inf = std::numeric_limits<double>::infinity();
    for (Index m : {2, 4, 8}) {
      const SweepRow* cme = find_row(rows, "cme_closed", "nmse", inf, m);
      const SweepRow* ref = find_row(rows, "closed_form", "nmse_multipilot_closed", inf, m);
      REQUIRE(cme);
      REQUIRE(ref);
      CHECK(std::abs(cme->value - ref->value) <= 3.0 * cme->std_error);
    }
  }

  TEST_CASE("pilot sweep at 10 dB: CME below Bussgang with a growing gap") {
    ScenarioSpec s;
    s.sweep = SweepKind::Pilots;
    s.values = {2, 8};
    s.snr_db = 10.0;
    s.estimators = {EstimatorKind::CmeNumeric, EstimatorKind::Bussgang};
    s.metrics = {MetricKind::Nmse};
    s.trials = 2000;
    s.budgets.prior_samples = 4000;
    s.seed = 6;
    const auto rows = run_scenario(s);
    double gap[2];
    int i = 0;
    for (Index m : {2, 8}) {
      const SweepRow* cme = find_row(rows, "cme_numeric", "nmse", 10.0, m);
      const SweepRow* bg = find_row(rows, "bussgang", "nmse", 10.0, m);
      REQUIRE(cme);
      REQUIRE(bg);
      CHECK(cme->value <= bg->value + 3.0 * std::hypot(cme->std_error, bg->std_error));
      gap[i++] = bg->value - cme->value;
    }
    CHECK(gap[1] > gap[0]);
  }

  TEST_CASE("mismatched closed-form multipilot rows are flagged") {
    ScenarioSpec s;
    s.sweep = SweepKind::Snr;
    s.values = {0.0, std::numeric_limits<double>::infinity()};
    s.m = 4;
    s.estimators = {EstimatorKind::CmeClosed};
    s.metrics = {MetricKind::Nmse};
    s.trials = 1000;
    const auto rows = run_scenario(s);
    const SweepRow* noisy = find_row(rows, "cme_closed", "inconsistent_fraction", 0.0);
    REQUIRE(noisy);
    CHECK(noisy->value > 0.0);
    CHECK(noisy->value <= 1.0);
    CHECK_FALSE(find_row(rows, "cme_closed", "inconsistent_fraction", std::numeric_limits<double>::infinity()));
  }

  TEST_CASE("numeric CME is never worse than Bussgang") {
    for (double snr : {0.0, 10.0}) {
      ScenarioSpec s;
      s.sweep = SweepKind::Dim;
      s.values = {2};
      s.m = 2;
      s.snr_db = snr;
      s.trials = 1000;
      s.budgets.prior_samples = 4000;
      s.seed = 12;
      const auto cme = per_trial_errors(s, 0, EstimatorKind::CmeNumeric);
      const auto bg = per_trial_errors(s, 0, EstimatorKind::Bussgang);
      MetricAccumulator a;
      MetricAccumulator b;
      for (double x : cme) a.add(x);
      for (double x : bg) b.add(x);
      CHECK(a.mean() <= b.mean() + 3.0 * std::hypot(a.std_error(), b.std_error()));
    }
  }

  TEST_CASE("rate rows for N = 4 noiseless are similar for CME and Bussgang") {
    ScenarioSpec s;
    s.sweep = SweepKind::Dim;
    s.values = {4};
    s.estimators = {EstimatorKind::CmeNoiseless, EstimatorKind::Bussgang};
    s.metrics = {MetricKind::Rate};
    s.trials = 1000;
    s.budgets.mvn.sample_count = 4000;
    const auto rows = run_scenario(s);
    const double inf = std::numeric_limits<double>::infinity();
    const SweepRow* cme = find_row(rows, "cme_noiseless", "rate", inf);
    const SweepRow* bg = find_row(rows, "bussgang", "rate", inf);
    REQUIRE(cme);
    REQUIRE(bg);
    CHECK(cme->value > 1.0);
    CHECK(cme->value < 4.0);
    CHECK(bg->value > 1.0);
    CHECK(bg->value < 4.0);
    CHECK(std::abs(cme->value - bg->value) < 0.1 * std::min(cme->value, bg->value));
  }

  TEST_CASE("estimator failures become error rows") {
    ScenarioSpec s;
    s.sweep = SweepKind::Dim;
    s.values = {2};
    s.m = 2;
    s.trials = 100;
    s.estimators = {EstimatorKind::CmeNoiseless, EstimatorKind::CmeNumeric, EstimatorKind::Bussgang};
    const auto rows = run_scenario(s);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(find_row(rows, "cme_noiseless", "error:InvalidArgument", inf));
    CHECK(find_row(rows, "cme_numeric", "error:InvalidArgument", inf));
    CHECK(find_row(rows, "bussgang", "nmse", inf));

    s.estimators.clear();
    const auto empty = run_scenario(s);
    REQUIRE(empty.size() == 1);
    CHECK(empty[0].metric_name == "error:ConfigError");
  }

  TEST_CASE("CDF quantiles") {
    ScenarioSpec s;
    s.values = {std::numeric_limits<double>::infinity()};
    s.estimators = {EstimatorKind::CmeClosed};
    s.trials = 1000;
    const auto rows = run_cdf(s);
    REQUIRE(rows.size() == 101);
    CHECK(rows.front().metric_name == "nmse_q0.00");
    CHECK(rows.back().metric_name == "nmse_q1.00");
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].value >= rows[i - 1].value);

    ScenarioSpec multi = s;
    multi.values = {0.0, 1.0};
    CHECK_THROWS_AS(run_cdf(multi), Error);
  }

  TEST_CASE("CDF of a constant error is a single step") {
    // Noiseless unquantized LMMSE recovers h exactly on every trial.
    ScenarioSpec s;
    s.values = {std::numeric_limits<double>::infinity()};
    s.estimators = {EstimatorKind::UnquantizedLmmse};
    s.trials = 500;
    const auto rows = run_cdf(s);
    for (const auto& r : rows) CHECK(r.value == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("CDF around the median: CME left of Bussgang for N = 8") {
    ScenarioSpec s;
    s.sweep = SweepKind::Dim;
    s.values = {8};
    s.estimators = {EstimatorKind::CmeNoiseless, EstimatorKind::Bussgang};
    s.trials = 400;
    s.budgets.mvn.sample_count = 2000;
    s.seed = 2;
    const auto cme = per_trial_errors(s, 0, EstimatorKind::CmeNoiseless);
    const auto bg = per_trial_errors(s, 0, EstimatorKind::Bussgang);
    std::vector<double> d(cme.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = cme[i] - bg[i];
    MetricAccumulator acc;
    for (double x : d) acc.add(x);
    // Weak dominance: paired difference not significantly positive.
    CHECK(acc.mean() <= 3.0 * acc.std_error());
    auto sc = cme;
    auto sb = bg;
    std::sort(sc.begin(), sc.end());
    std::sort(sb.begin(), sb.end());
    // CME median below the upper 3-sigma order-statistic bound of the Bussgang median.
    const std::size_t mid = sc.size() / 2;
    const auto slack = static_cast<std::size_t>(3.0 * std::sqrt(static_cast<double>(sc.size()) / 4.0));
    CHECK(sc[mid] <= sb[mid + slack]);
  }

  TEST_CASE("CSV format") {
    SweepRow r;
    r.scenario = "a";
    r.estimator = "bussgang";
    r.n = 2;
    r.m = 3;
    r.snr_db = std::numeric_limits<double>::infinity();
    r.pilot = "optimal";
    r.trials = 100;
    r.seed = 9;
    r.metric_name = "nmse";
    r.value = 0.25;
    r.std_error = 0.125;
    const std::string csv = to_csv({r});
    CHECK(csv == "scenario,estimator,N,M,snr_db,pilot,trials,seed,metric_name,value,stderr\n"
                 "a,bussgang,2,3,inf,optimal,100,9,nmse,0.25,0.125\n");
  }

  TEST_CASE("CSV is byte-identical across reruns and thread counts") {
    ScenarioSpec s;
    s.sweep = SweepKind::Dim;
    s.values = {1, 2};
    s.m = 2;
    s.snr_db = 5.0;
    s.estimators = {EstimatorKind::Bussgang, EstimatorKind::CmeNumeric};
    s.trials = 200;
    s.budgets.prior_samples = 2000;
    s.cov_mode = CovMode::PerTrial;
    const int saved = max_threads();
    set_threads(1);
    const std::string a = to_csv(run_scenario(s));
    set_threads(3);
    const std::string b = to_csv(run_scenario(s));
    set_threads(saved);
    CHECK(a == b);
    CHECK(a == to_csv(run_scenario(s)));
    s.seed = 1;
    CHECK(a != to_csv(run_scenario(s)));
  }

  TEST_CASE("config parsing") {
    std::istringstream in(
        "[fig2]\n"
        "sweep = snr\n"
        "values = -10, 0, 10\n"
        "estimators = cme_closed, unquantized_lmmse\n"
        "trials = 500\n"
        "seed = 3\n"
        "\n"
        "[fig7]\n"
        "sweep = pilots\n"
        "values = 1,2,4\n"
        "snr_db = 10\n"
        "estimators = bussgang\n"
        "metrics = nmse\n"
        "prior_samples = 3000\n"
        "mvn_samples = 4000\n"
        "cov_mode = per_trial\n"
        "pilot = ones\n");
    const auto specs = parse_config(in);
    REQUIRE(specs.size() == 2);
    CHECK(specs[0].name == "fig2");
    CHECK(specs[0].values.size() == 3);
    CHECK(specs[0].trials == 500);
    CHECK(specs[0].seed == 3);
    CHECK(specs[1].sweep == SweepKind::Pilots);
    CHECK(specs[1].snr_db == 10.0);
    CHECK(specs[1].budgets.prior_samples == 3000);
    CHECK(specs[1].budgets.mvn.sample_count == 4000);
    CHECK(specs[1].cov_mode == CovMode::PerTrial);
    CHECK(specs[1].pilot.variant() == PilotKind::Variant::AllOnes);
    CHECK(specs[1].metrics == std::vector<MetricKind>{MetricKind::Nmse});

    std::istringstream unknown("[a]\nvalues = 1\ncolour = red\n");
    CHECK_THROWS_AS(parse_config(unknown), Error);
    std::istringstream few("[a]\nvalues = 1\ntrials = 10\n");
    CHECK_THROWS_AS(parse_config(few), Error);
    std::istringstream bare("values = 1\n");
    CHECK_THROWS_AS(parse_config(bare), Error);
    CHECK_THROWS_AS(load_config("/nonexistent/file.ini"), Error);
  }

  TEST_CASE("validation helpers") {
    CHECK(multipilot_mse_gap(64, 2.0 / M_PI) < 1e-10);
    // A tampered constant must be caught.
    CHECK(multipilot_mse_gap(64, 0.6) > 1e-3);
    const auto fast = run_validation({2, 4, 5, 9});
    REQUIRE(fast.size() == 4);
    CHECK(all_passed(fast));
    std::ostringstream os;
    write_report(os, fast);
    CHECK(os.str().find("PASS   2 snr-crossover") != std::string::npos);
    CHECK(os.str().find('s') != std::string::npos);
  }
}
