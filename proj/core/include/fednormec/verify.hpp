// Copyright 2026 The fednormec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEDNORMEC_VERIFY_HPP_
#define FEDNORMEC_VERIFY_HPP_

#include <string>
#include <vector>

namespace fednormec {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double elapsed_s = 0.0;
};

struct VerifyReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool all_pass() const;
};

// Executable form of the library's stated properties: lemma inequalities,
// sampling statistics, convergence/rate behavior, and bound arithmetic.
namespace checks {

CheckResult sensitivity_bound();             // criterion 1
CheckResult memory_boundedness();            // criterion 2
CheckResult ef21_fixed_point();              // criterion 3
CheckResult rate_scaling();                  // criterion 4
CheckResult noise_drift_bound();             // criterion 5
CheckResult sampling_statistics();           // criterion 6
CheckResult ig_gd_consistency();             // criterion 7
CheckResult recursion_lemmas();              // criterion 8
CheckResult bias_witness();                  // criterion 9
CheckResult theory_consistency();            // criterion 10
CheckResult amplification_monotonicity();    // criterion 11
CheckResult reproducibility();               // criterion 12

// Additional module invariants exercised by `verify`.
CheckResult aggregation_identity();
CheckResult transmit_second_moment();
CheckResult avg_gradient_norm_lemma();
CheckResult ig_inner_path_lemma();
CheckResult local_op_lipschitz_pairs();
CheckResult memory_boundedness_lemma_eta();

}  // namespace checks

// suite in {lemmas, sampling, convergence, bounds, all}; anything else
// raises ConfigError (usage error).
VerifyReport run_verify(const std::string& suite);

// One-line-per-check plus machine-readable JSON.
std::string verify_report_json(const VerifyReport& report);

// The twelve acceptance criteria, in order.
std::vector<CheckResult> acceptance_criteria();

}  // namespace fednormec

#endif  // FEDNORMEC_VERIFY_HPP_
