#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uwoc/config.hpp"
#include "uwoc/montecarlo.hpp"

namespace uwoc {

enum class ToleranceProfile { strict, fast };

struct Tolerances {
  double probability = 0.05;  // outage and BER against Monte Carlo
  double capacity = 0.02;
  double quad_rel_tol = 1e-8;  // contour integrals
};
Tolerances tolerances(ToleranceProfile p);

struct Row {
  double x = 0.0;          // sweep value (dB or dBm)
  double gamma_bar = 0.0;  // terrestrial gamma_bar for mixed curves
  double analytic = 0.0;   // NaN when under the BER floor
  double asymptotic = 0.0; // NaN where no asymptote is defined
  std::optional<Estimate> mc;
};

struct Series {
  Metric metric = Metric::outage;
  std::vector<Row> rows;
  std::optional<ComparisonReport> check;
  int below_floor = 0;                 // BER points under kBerFloor
  std::optional<double> fitted_slope;  // decay exponent over the top of the sweep
};

struct CurveResult {
  std::string label;
  std::vector<Series> series;
  std::optional<double> diversity_order;
  std::optional<double> diversity_order_printed;
  bool slow_path = false;  // a mixed evaluation fell back to the composition integral
};

struct RunResult {
  std::vector<CurveResult> curves;
  ToleranceProfile profile = ToleranceProfile::strict;
  bool pass = true;  // every Monte Carlo comparison within tolerance
};

/// Analytic, asymptotic and (when cfg.plan.trials > 0) Monte Carlo series for
/// every curve and metric of the config.
RunResult run(const RunConfig& cfg, ToleranceProfile profile = ToleranceProfile::strict);

/// One CSV per metric: curve, sweep, analytic, asymptotic, then mc, mc_lo,
/// mc_hi, rel_err when Monte Carlo ran. Numbers use %.17g, empty cells mark
/// undefined values, lines end in LF.
std::string format_csv(const RunConfig& cfg, const RunResult& res, Metric metric);
std::string format_summary(const RunConfig& cfg, const RunResult& res);

/// Writes <dir>/<name>_<metric>.csv and <dir>/<name>_summary.json; returns
/// the paths written.
std::vector<std::string> write_outputs(const RunConfig& cfg, const RunResult& res,
                                       const std::string& dir);

}  // namespace uwoc
