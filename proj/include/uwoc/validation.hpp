#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace uwoc {

struct SuiteOptions {
  std::uint64_t trials = 1000000;  // per Monte Carlo check
  std::uint64_t seed = 2024;
  unsigned workers = 1;
  /// Fault injection: relative error added to every Fox-H result while the
  /// suite runs.
  double foxh_perturbation = 0.0;
};

struct CheckOutcome {
  bool pass = false;
  std::string detail;
};

/// One registered invariant or oracle comparison. Monte Carlo checks list the
/// analytic operations they cover.
struct Check {
  std::string name;
  std::string module;
  bool monte_carlo = false;
  std::vector<std::string> covers;
  std::function<CheckOutcome(const SuiteOptions&)> run;
};

struct CheckResult {
  std::string name;
  std::string module;
  bool monte_carlo = false;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  std::vector<std::string> uncovered;  // analytic operations without a Monte Carlo check
  bool pass = false;
  std::string text() const;
};

/// Analytic operations of cascade, metrics and mixed_link ("module.name").
const std::vector<std::string>& analytic_operations();
const std::vector<Check>& registered_checks();
/// Operations of analytic_operations() that no Monte Carlo check covers.
std::vector<std::string> uncovered_operations(const std::vector<Check>& checks);

/// Runs every registered check; fails on any failed check or uncovered
/// operation. A check that throws counts as failed.
SuiteReport validate_all(const SuiteOptions& opt = {});

}  // namespace uwoc
