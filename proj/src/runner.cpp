#include "uwoc/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "uwoc/errors.hpp"

namespace uwoc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Points at the top of the sweep used for the fitted decay exponent.
constexpr std::size_t kSlopePoints = 5;

std::string num(double v) {
  if (!std::isfinite(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double gamma_bar_at(const RunConfig& cfg, const UwocStack& stack, double x) {
  return cfg.sweep.axis == SweepAxis::snr_db
             ? db_to_linear(x)
             : link_gamma_bar(x, stack.path, cfg.link.noise_variance);
}

std::optional<double> fitted_slope(const std::vector<Row>& rows) {
  std::vector<double> x, y;
  for (const auto& r : rows)
    if (std::isfinite(r.analytic) && r.analytic > 0.0) {
      x.push_back(linear_to_db(r.gamma_bar));
      y.push_back(r.analytic);
    }
  if (x.size() < 3) return std::nullopt;
  const std::size_t k = std::min(kSlopePoints, x.size());
  x.erase(x.begin(), x.end() - static_cast<std::ptrdiff_t>(k));
  y.erase(y.begin(), y.end() - static_cast<std::ptrdiff_t>(k));
  return -loglog_slope(x, y);
}

void attach_mc(Series& s, const EmpiricalSeries& e, const Tolerances& tol, std::uint64_t trials) {
  std::vector<double> x, a;
  std::vector<Estimate> m;
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    const EmpiricalPoint& p = e.points[i];
    const Estimate est = s.metric == Metric::outage ? p.outage
                         : s.metric == Metric::ber  ? p.ber
                                                    : p.capacity;
    s.rows[i].mc = est;
    x.push_back(s.rows[i].x);
    a.push_back(s.rows[i].analytic);
    m.push_back(est);
  }
  const bool prob = s.metric != Metric::capacity;
  s.check = compare(to_string(s.metric), x, a, m, prob ? tol.probability : tol.capacity,
                    prob ? probability_floor(trials) : 0.0);
}

CurveResult run_uwoc(const RunConfig& cfg, const CurveSpec& curve, const Tolerances& tol) {
  const UwocStack stack = build_stack(cfg, curve);
  validate_stack(stack);
  CascadeOptions opt;
  opt.quad.rel_tol = tol.quad_rel_tol;
  const double th = db_to_linear(cfg.gamma_th_db);
  const std::vector<double> xs = cfg.sweep.values();

  CurveResult out;
  out.label = curve.label;
  out.diversity_order = diversity_order(stack);
  out.diversity_order_printed = diversity_order_printed(stack);
  std::vector<double> gb;
  for (double x : xs) gb.push_back(gamma_bar_at(cfg, stack, x));

  for (Metric m : cfg.metrics) {
    Series s;
    s.metric = m;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      Row r{xs[i], gb[i], kNaN, kNaN, std::nullopt};
      switch (m) {
        case Metric::outage:
          r.analytic = outage(stack, gb[i], th, opt);
          r.asymptotic = outage_asymptotic(stack, gb[i], th, opt);
          break;
        case Metric::ber:
          r.analytic = avg_ber(stack, gb[i], cfg.modulation, opt);
          r.asymptotic = avg_ber_asymptotic(stack, gb[i], cfg.modulation, opt);
          if (r.analytic < kBerFloor) {
            r.analytic = kNaN;
            ++s.below_floor;
          }
          break;
        case Metric::capacity:
          r.analytic = ergodic_capacity(stack, gb[i], cfg.detection, opt);
          break;
      }
      s.rows.push_back(r);
    }
    if (m != Metric::capacity) s.fitted_slope = fitted_slope(s.rows);
    out.series.push_back(std::move(s));
  }

  if (cfg.plan.trials > 0) {
    SimPlan plan;
    plan.trials = cfg.plan.trials;
    plan.seed = cfg.plan.seed;
    plan.workers = cfg.plan.workers;
    SimMetrics met{th, cfg.modulation, cfg.detection};
    const EmpiricalSeries e = simulate_uwoc(stack, gb, xs, plan, met);
    for (auto& s : out.series) attach_mc(s, e, tol, plan.trials);
  }
  return out;
}

CurveResult run_mixed(const RunConfig& cfg, const CurveSpec& curve, const Tolerances& tol) {
  const MixedLinkConfig base = build_mixed(cfg, curve);
  validate_mixed(base);
  MixedOptions opt;
  opt.cascade.quad.rel_tol = tol.quad_rel_tol;
  const double th = db_to_linear(cfg.gamma_th_db);
  const std::vector<double> xs = cfg.sweep.values();

  CurveResult out;
  out.label = curve.label;
  for (Metric m : cfg.metrics) {
    Series s;
    s.metric = m;
    for (double x : xs) {
      const MixedLinkConfig c = at_power(base, x, cfg.link.noise_variance);
      Row r{x, c.towc_gamma_bar, kNaN, kNaN, std::nullopt};
      if (m == Metric::outage) {
        const MixedValue v = mixed_cdf_detailed(c, th, opt);
        r.analytic = v.value;
        out.slow_path = out.slow_path || v.slow_path;
      } else if (m == Metric::ber) {
        const MixedValue v = mixed_avg_ber_detailed(c, cfg.modulation, opt);
        r.analytic = v.value;
        out.slow_path = out.slow_path || v.slow_path;
        if (r.analytic < kBerFloor) {
          r.analytic = kNaN;
          ++s.below_floor;
        }
      } else {
        throw ParameterError("capacity is not available for scenario mixed");
      }
      s.rows.push_back(r);
    }
    s.fitted_slope = fitted_slope(s.rows);
    out.series.push_back(std::move(s));
  }

  if (cfg.plan.trials > 0) {
    SimPlan plan;
    plan.trials = cfg.plan.trials;
    plan.seed = cfg.plan.seed;
    plan.workers = cfg.plan.workers;
    SimMetrics met{th, cfg.modulation, cfg.detection};
    const EmpiricalSeries e = simulate_mixed(base, xs, cfg.link.noise_variance, plan, met);
    for (auto& s : out.series) attach_mc(s, e, tol, plan.trials);
  }
  return out;
}

const Series* find_series(const CurveResult& c, Metric m) {
  for (const auto& s : c.series)
    if (s.metric == m) return &s;
  return nullptr;
}

}  // namespace

Tolerances tolerances(ToleranceProfile p) {
  if (p == ToleranceProfile::fast) return {0.10, 0.05, 1e-6};
  return {};
}

RunResult run(const RunConfig& cfg, ToleranceProfile profile) {
  const Tolerances tol = tolerances(profile);
  validate_modulation(cfg.modulation);
  RunResult res;
  res.profile = profile;
  for (const auto& curve : cfg.curves) {
    res.curves.push_back(cfg.scenario == Scenario::uwoc ? run_uwoc(cfg, curve, tol)
                                                        : run_mixed(cfg, curve, tol));
    for (const auto& s : res.curves.back().series)
      if (s.check && !s.check->pass) res.pass = false;
  }
  return res;
}

std::string format_csv(const RunConfig& cfg, const RunResult& res, Metric metric) {
  const bool mc = cfg.plan.trials > 0;
  std::string out = "curve,";
  out += cfg.sweep.axis == SweepAxis::snr_db ? "snr_db" : "power_dbm";
  out += ",analytic,asymptotic";
  if (mc) out += ",mc,mc_lo,mc_hi,rel_err";
  out += "\n";
  for (const auto& c : res.curves) {
    const Series* s = find_series(c, metric);
    if (!s) continue;
    for (const auto& r : s->rows) {
      out += c.label + "," + num(r.x) + "," + num(r.analytic) + "," + num(r.asymptotic);
      if (mc) {
        if (r.mc) {
          const double err = std::isfinite(r.analytic) && r.analytic != 0.0
                                 ? std::abs(r.mc->value - r.analytic) / std::abs(r.analytic)
                                 : kNaN;
          out += "," + num(r.mc->value) + "," + num(r.mc->lo) + "," + num(r.mc->hi) + "," + num(err);
        } else {
          out += ",,,,";
        }
      }
      out += "\n";
    }
  }
  return out;
}

std::string format_summary(const RunConfig& cfg, const RunResult& res) {
  using json = nlohmann::ordered_json;
  json j;
  j["name"] = cfg.name;
  j["scenario"] = to_string(cfg.scenario);
  j["sweep"] = cfg.sweep.axis == SweepAxis::snr_db ? "snr_db" : "power_dbm";
  j["gamma_th_db"] = cfg.gamma_th_db;
  j["trials"] = cfg.plan.trials;
  j["seed"] = cfg.plan.seed;
  j["tolerance_profile"] = res.profile == ToleranceProfile::strict ? "strict" : "fast";
  j["curves"] = json::array();
  for (const auto& c : res.curves) {
    json cj;
    cj["label"] = c.label;
    if (c.diversity_order) cj["diversity_order"] = *c.diversity_order;
    if (c.diversity_order_printed) cj["diversity_order_printed"] = *c.diversity_order_printed;
    if (cfg.scenario == Scenario::mixed) cj["slow_path"] = c.slow_path;
    for (const auto& s : c.series) {
      json sj;
      if (s.fitted_slope) sj["fitted_slope"] = *s.fitted_slope;
      if (s.metric == Metric::ber) sj["below_ber_floor"] = s.below_floor;
      if (s.check) {
        json v = json::array(), k = json::array();
        for (auto i : s.check->violations) v.push_back(s.check->x[i]);
        for (auto i : s.check->skipped) k.push_back(s.check->x[i]);
        sj["mc_check"] = {{"pass", s.check->pass},
                          {"tolerance", s.check->tolerance},
                          {"max_rel_error", s.check->max_rel_error},
                          {"violations", v},
                          {"skipped_below_floor", k}};
      }
      cj[to_string(s.metric)] = sj;
    }
    j["curves"].push_back(cj);
  }
  j["pass"] = res.pass;
  return j.dump(2) + "\n";
}

std::vector<std::string> write_outputs(const RunConfig& cfg, const RunResult& res,
                                       const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> paths;
  auto put = [&](const std::string& file, const std::string& body) {
    const std::string p = (fs::path(dir) / file).string();
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + p);
    f << body;
    paths.push_back(p);
  };
  for (Metric m : cfg.metrics) put(cfg.name + "_" + to_string(m) + ".csv", format_csv(cfg, res, m));
  put(cfg.name + "_summary.json", format_summary(cfg, res));
  return paths;
}

}  // namespace uwoc
