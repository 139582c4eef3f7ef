#include "uwoc/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "uwoc/errors.hpp"

namespace uwoc {
namespace {

constexpr double kZ95 = 1.959963984540054;

struct Moments {
  double count = 0.0;  // outage hits
  double ber = 0.0, ber2 = 0.0;
  double cap = 0.0, cap2 = 0.0;

  void add(const Moments& o) {
    count += o.count;
    ber += o.ber;
    ber2 += o.ber2;
    cap += o.cap;
    cap2 += o.cap2;
  }
};

std::uint64_t block_count(std::uint64_t trials) { return (trials + kSimBlock - 1) / kSimBlock; }

std::uint64_t block_size(std::uint64_t trials, std::uint64_t b) {
  return std::min(kSimBlock, trials - b * kSimBlock);
}

// Runs body(block, rng, n) for every block, spreading blocks over workers.
// Each block owns substream `block`, so the output does not depend on which
// worker ran it.
void for_each_block(const SimPlan& plan,
                    const std::function<void(std::uint64_t, Rng&, std::uint64_t)>& body) {
  const std::uint64_t blocks = block_count(plan.trials);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= blocks || failed.load()) return;
      try {
        Rng rng(plan.seed, b);
        body(b, rng, block_size(plan.trials, b));
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(plan.workers, static_cast<unsigned>(blocks)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// Conditional BER, with the phi = 1/2 case through erfc (the common one).
double fast_ber(const ModulationScheme& mod, double gamma) {
  if (mod.phi == 0.5) {
    double acc = 0.0;
    for (double q : mod.q) acc += std::erfc(std::sqrt(q * gamma));
    return 0.5 * mod.delta * acc;
  }
  return conditional_ber(mod, gamma);
}

void accumulate(Moments& m, double gamma, const SimMetrics& met, double kappa) {
  if (gamma < met.gamma_th) m.count += 1.0;
  const double b = fast_ber(met.mod, gamma);
  m.ber += b;
  m.ber2 += b * b;
  const double c = std::log2(1.0 + kappa * gamma);
  m.cap += c;
  m.cap2 += c * c;
}

Estimate proportion(double hits, double n) {
  const double p = hits / n;
  const double w = kZ95 * std::sqrt(std::max(p * (1.0 - p), 0.0) / n);
  return {p, std::max(0.0, p - w), std::min(1.0, p + w)};
}

Estimate mean(double s, double s2, double n) {
  const double m = s / n;
  const double var = std::max(s2 / n - m * m, 0.0) * n / std::max(n - 1.0, 1.0);
  const double w = kZ95 * std::sqrt(var / n);
  return {m, m - w, m + w};
}

// Shared driver: `draw` produces one trial's per-point SNRs into `out`.
EmpiricalSeries run(const SimPlan& plan, const SimMetrics& metrics, std::size_t points,
                    const std::function<void(Rng&, std::vector<double>&)>& draw) {
  validate_plan(plan);
  validate_modulation(metrics.mod);
  const double kappa = capacity_kappa(metrics.det);
  const std::uint64_t blocks = block_count(plan.trials);
  std::vector<std::vector<Moments>> partial(blocks, std::vector<Moments>(points));
  for_each_block(plan, [&](std::uint64_t b, Rng& rng, std::uint64_t n) {
    std::vector<double> g(points);
    auto& acc = partial[b];
    for (std::uint64_t i = 0; i < n; ++i) {
      draw(rng, g);
      for (std::size_t j = 0; j < points; ++j) accumulate(acc[j], g[j], metrics, kappa);
    }
  });
  std::vector<Moments> total(points);
  for (const auto& blk : partial)
    for (std::size_t j = 0; j < points; ++j) total[j].add(blk[j]);
  EmpiricalSeries out;
  out.trials = plan.trials;
  const double n = static_cast<double>(plan.trials);
  out.points.resize(points);
  for (std::size_t j = 0; j < points; ++j) {
    out.points[j].outage = proportion(total[j].count, n);
    out.points[j].ber = mean(total[j].ber, total[j].ber2, n);
    out.points[j].capacity = mean(total[j].cap, total[j].cap2, n);
  }
  return out;
}

std::vector<double> sorted_samples(const SimPlan& plan, const std::function<double(Rng&)>& draw) {
  validate_plan(plan);
  std::vector<double> out(plan.trials);
  for_each_block(plan, [&](std::uint64_t b, Rng& rng, std::uint64_t n) {
    double* dst = out.data() + b * kSimBlock;
    for (std::uint64_t i = 0; i < n; ++i) dst[i] = draw(rng);
  });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void validate_plan(const SimPlan& plan) {
  if (plan.trials < 10000) throw ParameterError("plan.trials must be >= 10000");
  if (plan.workers < 1) throw ParameterError("plan.workers must be >= 1");
  if (plan.histogram_bins < 1) throw ParameterError("plan.histogram_bins must be >= 1");
  if (!std::is_sorted(plan.snr_grid.begin(), plan.snr_grid.end()))
    throw ParameterError("plan.snr_grid must be sorted");
}

EmpiricalSeries simulate_uwoc(const UwocStack& stack, const std::vector<double>& gamma_bar,
                              const std::vector<double>& x, const SimPlan& plan,
                              const SimMetrics& metrics) {
  validate_stack(stack);
  if (x.size() != gamma_bar.size()) throw ParameterError("sweep labels and gamma_bar differ in length");
  for (double g : gamma_bar)
    if (!(g > 0.0)) throw ParameterError("gamma_bar grid entries must be > 0");
  EmpiricalSeries s = run(plan, metrics, gamma_bar.size(), [&](Rng& rng, std::vector<double>& g) {
    const double h = sample_combined(stack, rng);
    for (std::size_t j = 0; j < g.size(); ++j) g[j] = gamma_bar[j] * h * h;
  });
  for (std::size_t j = 0; j < x.size(); ++j) {
    s.points[j].x = x[j];
    s.points[j].gamma_bar = gamma_bar[j];
  }
  return s;
}

EmpiricalSeries simulate_mixed(const MixedLinkConfig& cfg, const std::vector<double>& power_dbm,
                               double noise_variance, const SimPlan& plan,
                               const SimMetrics& metrics) {
  const MixedSampler smp(cfg);
  std::vector<double> gt, gu;
  for (double p : power_dbm) {
    const MixedLinkConfig c = at_power(cfg, p, noise_variance);
    gt.push_back(c.towc_gamma_bar);
    gu.push_back(c.uwoc_gamma_bar);
  }
  EmpiricalSeries s = run(plan, metrics, power_dbm.size(), [&](Rng& rng, std::vector<double>& g) {
    const double ht = smp.towc_gain(rng), hu = smp.uwoc_gain(rng);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double a = gt[j] * ht * ht, b = gu[j] * hu * hu;
      g[j] = a * b / (b + cfg.C);
    }
  });
  for (std::size_t j = 0; j < power_dbm.size(); ++j) {
    s.points[j].x = power_dbm[j];
    s.points[j].gamma_bar = gt[j];
  }
  return s;
}

std::vector<double> sample_uwoc_unit_snr(const UwocStack& stack, const SimPlan& plan) {
  validate_stack(stack);
  return sorted_samples(plan, [&](Rng& rng) {
    const double h = sample_combined(stack, rng);
    return h * h;
  });
}

std::vector<double> sample_mixed_snr(const MixedLinkConfig& cfg, const SimPlan& plan) {
  const MixedSampler smp(cfg);
  return sorted_samples(plan, [&](Rng& rng) { return smp.snr(rng); });
}

double empirical_cdf(const std::vector<double>& sorted, double x) {
  if (sorted.empty()) return 0.0;
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

Histogram empirical_histogram(const std::vector<double>& sorted, unsigned bins) {
  Histogram h;
  if (sorted.empty() || bins == 0) return h;
  const auto pos = std::find_if(sorted.begin(), sorted.end(), [](double v) { return v > 0.0; });
  if (pos == sorted.end()) return h;
  const double lo = std::log(*pos), hi = std::log(sorted.back());
  const double w = (hi - lo) / bins;
  h.edges.resize(bins + 1);
  for (unsigned i = 0; i <= bins; ++i) h.edges[i] = std::exp(lo + w * i);
  h.edges.back() = sorted.back();
  h.density.assign(bins, 0.0);
  const double n = static_cast<double>(sorted.size());
  auto cursor = pos;
  for (unsigned i = 0; i < bins; ++i) {
    const auto end = i + 1 == bins ? sorted.end()
                                   : std::upper_bound(cursor, sorted.end(), h.edges[i + 1]);
    h.density[i] = static_cast<double>(end - cursor) / n / (h.edges[i + 1] - h.edges[i]);
    cursor = end;
  }
  return h;
}

double ks_statistic(const std::vector<double>& sorted, const std::function<double(double)>& cdf,
                    std::size_t nodes) {
  if (sorted.empty()) throw ParameterError("KS statistic needs samples");
  const std::size_t n = sorted.size();
  nodes = std::max<std::size_t>(2, std::min(nodes, n));
  double d = 0.0;
  for (std::size_t k = 0; k < nodes; ++k) {
    std::size_t i = k * (n - 1) / (nodes - 1);
    // Last index of a run of ties, so i + 1 samples are <= x.
    while (i + 1 < n && sorted[i + 1] == sorted[i]) ++i;
    std::size_t first = i;
    while (first > 0 && sorted[first - 1] == sorted[i]) --first;
    const double f = cdf(sorted[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i + 1) / n),
                  std::abs(f - static_cast<double>(first) / n)});
  }
  return d;
}

ComparisonReport compare(const std::string& metric, const std::vector<double>& x,
                         const std::vector<double>& analytic,
                         const std::vector<Estimate>& empirical, double tolerance, double floor) {
  if (x.size() != analytic.size() || x.size() != empirical.size())
    throw ParameterError("compare: series lengths differ");
  ComparisonReport r;
  r.metric = metric;
  r.x = x;
  r.analytic = analytic;
  r.empirical = empirical;
  r.tolerance = tolerance;
  r.rel_error.assign(x.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = analytic[i], e = empirical[i].value;
    if (!(std::abs(a) >= floor) || !std::isfinite(a)) {
      r.skipped.push_back(i);
      continue;
    }
    const double err = a == e ? 0.0 : std::abs(e - a) / std::abs(a);
    r.rel_error[i] = err;
    r.max_rel_error = std::max(r.max_rel_error, err);
    if (!(err <= tolerance)) r.violations.push_back(i);
  }
  r.pass = r.violations.empty();
  return r;
}

}  // namespace uwoc
