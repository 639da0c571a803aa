// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "onebit/channel.hpp"

namespace onebit {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // seconds; <= 0 means unlimited
  /// Fills passed and detail.
  std::function<void(CriterionResult&)> check;
};

/// The full acceptance suite, in id order.
std::vector<Criterion> acceptance_criteria();

/// Runs the selected criteria (all when `ids` is empty). A criterion that
/// throws fails with the exception text as detail. Exceeding the time limit
/// fails the criterion.
std::vector<CriterionResult> run_validation(const std::vector<int>& ids = {});

/// One line per criterion: "PASS|FAIL  <id> <name>  <seconds>s  <detail>".
void write_report(std::ostream& os, const std::vector<CriterionResult>& results);
bool all_passed(const std::vector<CriterionResult>& results);

/// Every sign pattern a noiseless single-antenna pilot sequence with the
/// given phases can produce, one per phase sector, ordered by the sector
/// start angle in [0, 2pi).
std::vector<QuantizedObs> reachable_patterns(const std::vector<double>& psi);

/// max over M in [1, m_max] of |closed-form multipilot MSE -
/// (1 - k a^H C_r^{-1} a)| with C_r from the arcsine law and a general
/// solver. k = 2/pi reproduces the Bussgang MSE.
double multipilot_mse_gap(Index m_max, double k);

}  // namespace onebit
