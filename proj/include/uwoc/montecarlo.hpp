#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "uwoc/cascade.hpp"
#include "uwoc/metrics.hpp"
#include "uwoc/mixed_link.hpp"

namespace uwoc {

struct SimPlan {
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  unsigned histogram_bins = 60;
  std::vector<double> snr_grid;  // dB
};

void validate_plan(const SimPlan& plan);

/// Trials are cut into blocks of this size; block b draws from substream b and
/// partial sums merge in block order, so results do not depend on workers.
inline constexpr std::uint64_t kSimBlock = std::uint64_t{1} << 15;

/// Point estimate with a 95% normal-approximation interval.
struct Estimate {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct SimMetrics {
  double gamma_th = 1.0;
  ModulationScheme mod;
  DetectionKind det = DetectionKind::IMDD;
};

struct EmpiricalPoint {
  double x = 0.0;          // sweep value (dB or dBm)
  double gamma_bar = 0.0;  // for mixed runs: the terrestrial gamma_bar
  Estimate outage;
  Estimate ber;
  Estimate capacity;
};

struct EmpiricalSeries {
  std::vector<EmpiricalPoint> points;
  std::uint64_t trials = 0;
};

/// Per point of `gamma_bar` (linear): fraction below gamma_th, mean
/// conditional BER and mean log2(1 + kappa gamma). `x` carries the dB label.
EmpiricalSeries simulate_uwoc(const UwocStack& stack, const std::vector<double>& gamma_bar,
                              const std::vector<double>& x, const SimPlan& plan,
                              const SimMetrics& metrics = {});

/// Both hops sampled per trial, composed through the relay, at each transmit
/// power (dBm) of the grid.
EmpiricalSeries simulate_mixed(const MixedLinkConfig& cfg, const std::vector<double>& power_dbm,
                               double noise_variance, const SimPlan& plan,
                               const SimMetrics& metrics = {});

/// Sorted draws of gamma / gamma_bar = h^2 for the underwater stack.
std::vector<double> sample_uwoc_unit_snr(const UwocStack& stack, const SimPlan& plan);
/// Sorted draws of the end-to-end SNR of the mixed link.
std::vector<double> sample_mixed_snr(const MixedLinkConfig& cfg, const SimPlan& plan);

/// Fraction of sorted samples <= x.
double empirical_cdf(const std::vector<double>& sorted, double x);

struct Histogram {
  std::vector<double> edges;    // bins + 1, log-spaced
  std::vector<double> density;  // per unit x
};
Histogram empirical_histogram(const std::vector<double>& sorted, unsigned bins);

/// Kolmogorov-Smirnov distance between sorted samples and `cdf`, evaluated at
/// `nodes` sample quantiles (both sides of each jump). The sup over all x
/// exceeds this by at most the largest cdf increment between nodes.
double ks_statistic(const std::vector<double>& sorted, const std::function<double(double)>& cdf,
                    std::size_t nodes = 2000);

struct ComparisonReport {
  std::string metric;
  std::vector<double> x;
  std::vector<double> analytic;
  std::vector<Estimate> empirical;
  std::vector<double> rel_error;  // NaN where skipped
  double max_rel_error = 0.0;
  std::optional<double> ks;
  double tolerance = 0.0;
  std::vector<std::size_t> violations;
  std::vector<std::size_t> skipped;  // below the rare-event floor
  bool pass = true;
};

/// Point-wise relative error against `tolerance`. Points whose analytic value
/// is below `floor` (e.g. 100 / trials for probabilities) are skipped.
ComparisonReport compare(const std::string& metric, const std::vector<double>& x,
                         const std::vector<double>& analytic,
                         const std::vector<Estimate>& empirical, double tolerance,
                         double floor = 0.0);

/// Rare-event floor for probability estimates.
inline double probability_floor(std::uint64_t trials) { return 100.0 / static_cast<double>(trials); }

}  // namespace uwoc
