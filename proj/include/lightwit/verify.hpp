// Built-in property suites: LOO basis, separability soundness, channel
// invariances, the circular-channel mirror symmetry and analytic cross-checks.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lightwit::verify {

struct SuiteResult {
  std::string name;
  bool passed = true;
  int checks = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::vector<std::string> failures;  // first few offending cases
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  int trials = 200;
  /// Nonzero corrupts one LOO entry in every basis draw (negative control).
  double corrupt_loo_phase = 0.0;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool passed() const;
};

SuiteResult loo_basis_suite(const VerifyOptions& opt);
SuiteResult separability_suite(const VerifyOptions& opt);
SuiteResult real_channel_suite(const VerifyOptions& opt);
SuiteResult blind_triple_suite(const VerifyOptions& opt);
SuiteResult mirror_suite(const VerifyOptions& opt);
SuiteResult analytic_suite(const VerifyOptions& opt);

VerifyReport run_all(const VerifyOptions& opt);

/// One line per suite plus the recorded failures.
std::string format_report(const VerifyReport& report);

}  // namespace lightwit::verify
