// Acceptance criteria 1-8. One PASS/FAIL line per criterion; exit status 1 if
// any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "uwoc/cascade.hpp"
#include "uwoc/config.hpp"
#include "uwoc/malaga.hpp"
#include "uwoc/metrics.hpp"
#include "uwoc/mixed_link.hpp"
#include "uwoc/montecarlo.hpp"
#include "uwoc/quadrature.hpp"
#include "uwoc/reference_params.hpp"
#include "uwoc/runner.hpp"
#include "uwoc/special_fn.hpp"

using namespace uwoc;

namespace {

constexpr std::uint64_t kSeed = 20240601;
constexpr std::uint64_t kBigTrials = 10000000;

double rel(double got, double want) {
  return got == want ? 0.0 : std::abs(got - want) / std::abs(want);
}

// Accumulates sub-checks of one criterion.
struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  Verdict() { detail.precision(4); }
  // Records `name: value (limit)` and folds ok into the verdict.
  void item(const std::string& name, double value, const std::string& limit, bool ok) {
    if (detail.tellp() > 0) detail << "; ";
    detail << name << " " << value << " (" << limit << ")" << (ok ? "" : " FAILED");
    pass = pass && ok;
  }
  void max_rel(const std::string& name, double err, double tol) {
    std::ostringstream l;
    l << "<= " << tol;
    item(name, err, l.str(), err <= tol);
  }
};

UwocStack stack_of(std::vector<LayerModel> layers, double rho2) {
  return {std::move(layers), {rho2, ref::kA0}, {ref::kExtinction, ref::kUnderwaterLength}};
}

std::vector<LayerModel> first(const std::vector<LayerModel>& all, std::size_t n) {
  return {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n)};
}

std::vector<LayerModel> copies(const LayerModel& m, std::size_t n) {
  return std::vector<LayerModel>(n, m);
}

SimPlan plan(std::uint64_t trials, std::uint64_t salt, unsigned workers = 1) {
  SimPlan p;
  p.trials = trials;
  p.seed = kSeed + salt;
  p.workers = workers;
  return p;
}

// ---------------------------------------------------------------------------

void criterion1(Verdict& v) {
  double e_exp = 0.0, e_bessel = 0.0, e_rational = 0.0, e_incgamma = 0.0;
  std::vector<double> zs;
  for (double z = 0.05; z <= 20.0 + 1e-12; z *= 1.25) zs.push_back(z);
  zs.push_back(20.0);

  FoxHSpec ex;
  ex.lower_left = {{0.0, 1.0}};
  for (double z : zs) e_exp = std::max(e_exp, rel(foxh(ex, z), std::exp(-z)));

  for (double nu : {0.0, 0.5, 1.0, 2.5}) {
    FoxHSpec k;
    k.lower_left = {{0.5 * nu, 1.0}, {-0.5 * nu, 1.0}};
    for (double z : zs)
      e_bessel = std::max(e_bessel, rel(meijerg(k, z), 2.0 * std::cyl_bessel_k(nu, 2.0 * std::sqrt(z))));
  }
  // G^{1,1}_{1,1}(z | 0; 0) = 1 / (1 + z)
  FoxHSpec r;
  r.upper_left = {{0.0, 1.0}};
  r.lower_left = {{0.0, 1.0}};
  for (double z : zs) e_rational = std::max(e_rational, rel(meijerg(r, z), 1.0 / (1.0 + z)));
  // G^{1,1}_{1,2}(z | 1; a, 0) = lower incomplete gamma(a, z)
  for (double a : {0.5, 2.0, 3.7}) {
    FoxHSpec g;
    g.upper_left = {{1.0, 1.0}};
    g.lower_left = {{a, 1.0}};
    g.lower_right = {{0.0, 1.0}};
    for (double z : zs) e_incgamma = std::max(e_incgamma, rel(meijerg(g, z), boost::math::tgamma_lower(a, z)));
  }
  v.max_rel("H10_01=exp", e_exp, 1e-9);
  v.max_rel("G20_02=2K_nu", e_bessel, 1e-9);
  v.max_rel("G11_11=1/(1+z)", e_rational, 1e-9);
  v.max_rel("G11_12=lower gamma", e_incgamma, 1e-9);

  // Contour shift: fixed abscissae where H = O(1); saddle placement against a
  // 30-digit reference where H is exponentially small.
  FoxHSpec s;
  s.lower_left = {{0.3, 1.0}, {1.2, 0.5}};
  s.upper_right = {{0.7, 1.0}};
  double e_shift = 0.0;
  for (double z : {0.05, 0.1, 1.0, 2.0})
    for (double c : {0.5, 1.0, 2.0})
      e_shift = std::max(e_shift, rel(foxh_detailed(s, z, {}, c).value, foxh_detailed(s, z, {}, 0.1).value));
  e_shift = std::max(e_shift, rel(foxh(s, 3.0), 1.10822744223318954e-3));
  e_shift = std::max(e_shift, rel(foxh(s, 7.0), 1.79516264999948154e-20));
  v.max_rel("contour shift", e_shift, 1e-8);
}

// ---------------------------------------------------------------------------

struct Family {
  std::string name;
  std::vector<LayerModel> (*stack)(std::size_t);
};

std::vector<LayerModel> gg_n(std::size_t n) { return first(ref::gg5(), n); }
std::vector<LayerModel> egg_n(std::size_t n) { return first(ref::egg5(), n); }
std::vector<LayerModel> ew_n(std::size_t n) { return copies(ref::ew(), n); }
std::vector<LayerModel> gamma_gamma_n(std::size_t n) { return copies(ref::gamma_gamma(), n); }

void criterion2(Verdict& v) {
  const std::vector<Family> fams{{"GG", gg_n}, {"EGG", egg_n}, {"EW", ew_n}, {"GammaGamma", gamma_gamma_n}};
  double e_norm = 0.0, e_quad = 0.0, e_mc = 0.0, se_mc = 0.0;
  std::string w_norm, w_quad, w_mc;
  std::vector<std::string> unresolved;  // cases whose MC standard error exceeds 1%/3
  quad::Options q;
  q.rel_tol = 1e-10;
  std::uint64_t salt = 0;
  for (const auto& f : fams)
    for (std::size_t n : {1u, 2u, 5u}) {
      const auto layers = f.stack(n);
      const std::string tag = f.name + " N=" + std::to_string(n);
      auto pdf = [&](double h) { return cascaded_pdf(layers, h); };
      const double mass = quad::integrate_half_line(pdf, 1.0, q).value;
      if (std::abs(mass - 1.0) > e_norm) e_norm = std::abs(mass - 1.0), w_norm = tag;

      // Monte Carlo: product of independent layer draws.
      Rng rng(kSeed, 200 + salt++);
      double s1 = 0.0, s2 = 0.0, s4 = 0.0;
      for (std::uint64_t t = 0; t < kBigTrials; ++t) {
        double h = 1.0;
        for (const auto& l : layers) h *= sample_layer(l, rng);
        s1 += h;
        s2 += h * h;
        s4 += h * h * h * h;
      }
      const double n_d = static_cast<double>(kBigTrials);
      const double mc[2] = {s1 / n_d, s2 / n_d};
      // Relative standard error of each sample mean.
      const double se[2] = {std::sqrt((s2 / n_d - mc[0] * mc[0]) / n_d) / mc[0],
                            std::sqrt((s4 / n_d - mc[1] * mc[1]) / n_d) / mc[1]};

      for (int m : {1, 2}) {
        double analytic = 1.0;
        for (const auto& l : layers) analytic *= moment_layer(l, m);
        const double num =
            quad::integrate_half_line([&](double h) { return std::pow(h, m) * pdf(h); }, 1.0, q).value;
        const std::string at = tag + " n=" + std::to_string(m);
        if (rel(analytic, num) > e_quad) e_quad = rel(analytic, num), w_quad = at;
        if (rel(mc[m - 1], analytic) > e_mc) e_mc = rel(mc[m - 1], analytic), w_mc = at, se_mc = se[m - 1];
        if (se[m - 1] > 0.01 / 3.0) unresolved.push_back(at);
      }
    }
  v.max_rel("normalization |mass-1| [" + w_norm + "]", e_norm, 1e-4);
  v.max_rel("moment vs PDF quadrature [" + w_quad + "]", e_quad, 1e-6);
  std::ostringstream mc_label;
  mc_label.precision(3);
  mc_label << "moment vs 1e7 MC [" << w_mc << ", MC rel SE " << se_mc << "]";
  v.max_rel(mc_label.str(), e_mc, 0.01);
  // Informational: where 1e7 draws cannot resolve 1%.
  if (!unresolved.empty()) {
    std::string list;
    for (const auto& u : unresolved) list += (list.empty() ? "" : ", ") + u;
    v.detail << "; MC SE > 1%/3 for " << list;
  }
}

// ---------------------------------------------------------------------------

// Upper bound on sup_x |F_n(x) - F(x)| from F evaluated at `nodes` order
// statistics: between consecutive nodes both functions are monotone.
double ks_upper_bound(const std::vector<double>& sorted, const std::function<double(double)>& cdf,
                      std::size_t nodes, double& at_nodes) {
  const double n = static_cast<double>(sorted.size());
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < nodes; ++j)
    idx.push_back(static_cast<std::size_t>(std::llround(j * (n - 1.0) / (nodes - 1.0))));
  std::vector<double> F;
  for (auto i : idx) F.push_back(cdf(sorted[i]));
  double bound = F.front();  // below the first node F_n = 0
  at_nodes = 0.0;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const double lo = static_cast<double>(idx[j]) / n, hi = (idx[j] + 1.0) / n;
    at_nodes = std::max({at_nodes, std::abs(F[j] - lo), std::abs(F[j] - hi)});
    if (j + 1 < idx.size()) {
      const double next_lo = static_cast<double>(idx[j + 1]) / n;
      bound = std::max({bound, next_lo - F[j], F[j + 1] - hi});
    }
  }
  bound = std::max({bound, at_nodes, 1.0 - F.back()});
  return bound;
}

void criterion3(Verdict& v) {
  double e_fd = 0.0;
  bool monotone = true;
  const std::vector<std::pair<std::string, UwocStack>> stacks{{"GG N=5", stack_of(ref::gg5(), 1.0)},
                                                              {"EGG N=5", stack_of(ref::egg5(), 1.0)}};
  for (const auto& [name, s] : stacks) {
    const double gb = 1e8;
    for (double g : {1e-3, 1e-1, 1.0, 10.0, 100.0, 1e3}) {
      const double h = 1e-4 * g;
      const double fd = (snr_cdf(s, {g + h, gb}) - snr_cdf(s, {g - h, gb})) / (2.0 * h);
      e_fd = std::max(e_fd, rel(fd, snr_pdf(s, {g, gb})));
    }
    double prev = 0.0;
    for (double ldb = -60.0; ldb <= 60.0; ldb += 3.0) {
      const double f = snr_cdf(s, {db_to_linear(ldb), gb});
      monotone = monotone && f >= prev && f <= 1.0 + 1e-9;
      prev = f;
    }
  }
  v.max_rel("FD(cdf) vs pdf", e_fd, 1e-4);
  v.item("monotone", monotone ? 1.0 : 0.0, "== 1", monotone);

  std::uint64_t salt = 300;
  for (const auto& [name, s] : stacks) {
    const auto smp = sample_uwoc_unit_snr(s, plan(kBigTrials, salt++));
    double at_nodes = 0.0;
    const double ks = ks_upper_bound(smp, [&](double g) { return snr_cdf(s, {g, 1.0}); }, 4000, at_nodes);
    std::ostringstream label;
    label.precision(3);
    label << "KS sup bound " << name << " (at nodes " << at_nodes << ")";
    v.item(label.str(), ks, "< 0.001", ks < 1e-3);
  }
}

// ---------------------------------------------------------------------------

void criterion4(Verdict& v) {
  const double th = db_to_linear(preset("fig2a").gamma_th_db);
  const std::vector<std::pair<std::string, UwocStack>> stacks{
      {"GG5 rho2=1", stack_of(ref::gg5(), 1.0)},
      {"GG5 rho2=6", stack_of(ref::gg5(), 6.0)},
      {"GG5 modified-d rho2=6", stack_of(ref::gg5_modified_d(), 6.0)},
      {"EGG5 rho2=1", stack_of(ref::egg5(), 1.0)},
      {"EW rho2=1", stack_of({ref::ew()}, 1.0)},
      {"GammaGamma rho2=1", stack_of({ref::gamma_gamma()}, 1.0)}};
  std::vector<double> x, gb;
  for (double db = 40.0; db <= 90.0; db += 10.0) {
    x.push_back(db);
    gb.push_back(db_to_linear(db));
  }
  double eo = 0.0, eb = 0.0, ec = 0.0;
  std::size_t asserted = 0;
  std::string wo, wb, wc;
  std::uint64_t salt = 400;
  for (const auto& [name, s] : stacks) {
    std::vector<double> po, pb, pc;
    for (double g : gb) {
      po.push_back(outage(s, g, th));
      pb.push_back(avg_ber(s, g));
      pc.push_back(ergodic_capacity(s, g, DetectionKind::IMDD));
    }
    const auto e = simulate_uwoc(s, gb, x, plan(kBigTrials, salt++), {th});
    std::vector<Estimate> mo, mb, mc;
    for (const auto& p : e.points) {
      mo.push_back(p.outage);
      mb.push_back(p.ber);
      mc.push_back(p.capacity);
    }
    const auto ro = compare("outage", x, po, mo, 0.05, 1e-4);
    const auto rb = compare("ber", x, pb, mb, 0.05, 1e-4);
    const auto rc = compare("capacity", x, pc, mc, 0.02);
    asserted += 3 * x.size() - ro.skipped.size() - rb.skipped.size();
    if (ro.max_rel_error > eo) eo = ro.max_rel_error, wo = name;
    if (rb.max_rel_error > eb) eb = rb.max_rel_error, wb = name;
    if (rc.max_rel_error > ec) ec = rc.max_rel_error, wc = name;
  }
  v.max_rel("outage [" + wo + "]", eo, 0.05);
  v.max_rel("BER [" + wb + "]", eb, 0.05);
  v.max_rel("capacity [" + wc + "]", ec, 0.02);
  v.item("points asserted", static_cast<double>(asserted), "> 0", asserted > 0);
}

// ---------------------------------------------------------------------------

// Decay exponent over [hi - 20 dB, hi], five points.
double slope_of(const std::function<double(double)>& f, double hi_db) {
  std::vector<double> xs, ys;
  for (double db = hi_db - 20.0; db <= hi_db + 1e-9; db += 5.0) {
    xs.push_back(db);
    ys.push_back(f(db_to_linear(db)));
  }
  return -loglog_slope(xs, ys);
}

void criterion5(Verdict& v) {
  const std::vector<std::pair<std::string, UwocStack>> variants{
      {"table rho2=1", stack_of(ref::gg5(), 1.0)},
      {"modified-d rho2=1", stack_of(ref::gg5_modified_d(), 1.0)},
      {"table rho2=6", stack_of(ref::gg5(), 6.0)},
      {"modified-d rho2=6", stack_of(ref::gg5_modified_d(), 6.0)}};
  // High enough that the leading pole dominates; the BER window stays above the
  // 1e-12 floor.
  constexpr double kTop = 200.0;
  double worst = 0.0;
  std::string where;
  for (const auto& [name, s] : variants) {
    const double d = diversity_order(s);
    const double so = slope_of([&](double g) { return outage(s, g, 1.0); }, kTop);
    const double sb = slope_of([&](double g) { return avg_ber(s, g); }, kTop);
    if (rel(so, d) > worst) worst = rel(so, d), where = name + " outage";
    if (rel(sb, d) > worst) worst = rel(sb, d), where = name + " BER";
  }
  v.max_rel("fitted slope vs diversity_order [" + where + "]", worst, 0.05);

  const UwocStack t1 = stack_of(ref::gg5(), 1.0), t6 = stack_of(ref::gg5(), 6.0);
  double dsum = 0.0;
  for (const auto& l : ref::gg5()) dsum += std::get<GGParams>(l).d;
  v.item("printed shape term sum(d)", dsum, "== 12.9316 = 2 x 6.4658", std::abs(dsum / 2.0 - 6.4658) < 1e-9);
  v.item("printed rho2=1 value", diversity_order_printed(t1), "== 0.5",
         std::abs(diversity_order_printed(t1) - 0.5) < 1e-12);
  v.item("printed rho2=6 value", diversity_order_printed(t6), "== 3",
         std::abs(diversity_order_printed(t6) - 3.0) < 1e-12);
  const double s6 = slope_of([&](double g) { return outage(t6, g, 1.0); }, kTop);
  v.item("fitted outage slope at rho2=6", s6, "printed 3 within 5%", rel(s6, 3.0) <= 0.05);
}

// ---------------------------------------------------------------------------

void criterion6(Verdict& v) {
  const RunConfig fig2a = preset("fig2a");
  const double th = db_to_linear(fig2a.gamma_th_db);
  const double g80 = db_to_linear(80.0);
  for (const auto& c : fig2a.curves) {
    const double p = outage(build_stack(fig2a, c), g80, th);
    const bool ok = std::abs(std::log10(p) + 3.0) <= 0.5;
    v.item("outage " + c.label + " @80dB", p, "1e-3 within 10^+-0.5", ok);
  }

  const UwocStack a = stack_of(ref::gg5(), 6.0), b = stack_of(ref::gg5_modified_d(), 6.0);
  const double ratio = avg_ber(a, g80) / avg_ber(b, g80);
  v.item("BER ratio d-set change @80dB", ratio, "10 within x/2", ratio >= 5.0 && ratio <= 20.0);

  const RunConfig fig4a = preset("fig4a");
  for (const auto& c : fig4a.curves) {
    const UwocStack s = build_stack(fig4a, c);
    const double cap = ergodic_capacity(s, link_gamma_bar(20.0, s.path, fig4a.link.noise_variance),
                                        DetectionKind::IMDD);
    v.item("capacity " + c.label + " @20dBm", cap, "10 +- 1.5", std::abs(cap - 10.0) <= 1.5);
  }
  const double gb20 = link_gamma_bar(20.0, a.path, ref::kNoiseVariance);
  const double gain = ergodic_capacity(stack_of(ref::gg5(), 6.0), gb20, DetectionKind::IMDD) -
                      ergodic_capacity(stack_of(ref::gg5(), 1.0), gb20, DetectionKind::IMDD);
  v.item("capacity gain rho2 1->6", gain, "3 +- 1", std::abs(gain - 3.0) <= 1.0);
}

// ---------------------------------------------------------------------------

MixedLinkConfig mixed_egg2_light(double power_dbm) {
  MixedLinkConfig c;
  c.towc = make_malaga_fog(ref::kMalaga[0].alpha, ref::kMalaga[0].beta, ref::kFog[0].k,
                           fog_rate(ref::kFog[0].beta_f, ref::kTerrestrialLength), 1.0, ref::kA0);
  c.stack = stack_of(ref::egg2(), 1.0);
  return at_power(c, power_dbm, ref::kNoiseVariance);
}

// Transmit power at which the curve's outage crosses `target`.
double power_at_outage(const MixedLinkConfig& base, double th, double target) {
  auto f = [&](double p) {
    return std::log(mixed_outage(at_power(base, p, ref::kNoiseVariance), th)) - std::log(target);
  };
  double lo = -10.0, hi = 90.0;
  for (int i = 0; i < 14; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void criterion7(Verdict& v) {
  const MixedLinkConfig c = mixed_egg2_light(20.0);
  const auto smp = sample_mixed_snr(c, plan(2000000, 700));
  const std::vector<double> levels{0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9};
  MixedOptions biv, cmp;
  biv.route = MixedRoute::bivariate;
  cmp.route = MixedRoute::composition;
  double e_oracle = 0.0, e_mc = 0.0;
  for (double p : levels) {
    const double g = smp[static_cast<std::size_t>(p * static_cast<double>(smp.size() - 1))];
    const double fb = mixed_cdf(c, g, biv);
    e_oracle = std::max(e_oracle, rel(fb, mixed_cdf(c, g, cmp)));
    e_mc = std::max(e_mc, rel(fb, empirical_cdf(smp, g)));
  }
  v.max_rel("bivariate vs composition CDF (10 pts)", e_oracle, 1e-3);
  v.max_rel("bivariate CDF vs MC (fog shape rounded in analytic)", e_mc, 0.05);

  // Closed-form BER (bivariate) against quadrature of the factorized CDF.
  const ModulationScheme mod;
  MixedOptions fac;
  fac.route = MixedRoute::factorized;
  quad::Options q;
  q.rel_tol = 1e-7;
  double want = 0.0;
  for (double qn : mod.q)
    want += std::pow(qn, mod.phi) *
            quad::integrate_half_line(
                [&](double g) {
                  return std::pow(g, mod.phi - 1.0) * std::exp(-qn * g) * mixed_cdf(c, g, fac);
                },
                1.0 / qn, q)
                .value;
  want *= mod.delta / (2.0 * std::tgamma(mod.phi));
  v.max_rel("BER closed form vs CDF quadrature", rel(mixed_avg_ber(c, mod, biv), want), 1e-3);

  // Figure trends at the 1e-3 outage operating point, gamma_th = 0 dB.
  const RunConfig fig5a = preset("fig5a");
  const double th = db_to_linear(fig5a.gamma_th_db);
  std::vector<double> p;
  for (const auto& curve : fig5a.curves) p.push_back(power_at_outage(build_mixed(fig5a, curve), th, 1e-3));
  // curves: light/weak rho2=1, moderate/moderate rho2=1, light/weak rho2=6, moderate/moderate rho2=6
  const double fog1 = p[1] - p[0], fog6 = p[3] - p[2];
  const double pe_light = p[0] - p[2], pe_moderate = p[1] - p[3];
  v.item("fog gap rho2=1 dBm", fog1, "20 +- 5", std::abs(fog1 - 20.0) <= 5.0);
  v.item("fog gap rho2=6 dBm", fog6, "20 +- 5", std::abs(fog6 - 20.0) <= 5.0);
  v.item("pointing penalty light fog dBm", pe_light, "10 +- 5", std::abs(pe_light - 10.0) <= 5.0);
  v.item("pointing penalty moderate fog dBm", pe_moderate, "10 +- 5", std::abs(pe_moderate - 10.0) <= 5.0);
}

// ---------------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// Writes the config's outputs under `dir` for each worker count and compares
// every file byte for byte, including a repeat of the first run.
bool identical_outputs(RunConfig cfg, const std::filesystem::path& dir, std::size_t& files) {
  std::vector<std::vector<std::string>> runs;
  for (unsigned w : {1u, 3u, 1u}) {
    cfg.plan.workers = w;
    const auto out = dir / (cfg.name + "_w" + std::to_string(w) + "_" + std::to_string(runs.size()));
    std::vector<std::string> bodies;
    for (const auto& f : write_outputs(cfg, run(cfg), out.string())) bodies.push_back(slurp(f));
    runs.push_back(bodies);
  }
  files += runs[0].size();
  return runs[0] == runs[1] && runs[0] == runs[2] && !runs[0].empty();
}

void criterion8(Verdict& v) {
  const auto dir = std::filesystem::temp_directory_path() / "uwoc_acceptance";
  std::filesystem::remove_all(dir);
  RunConfig u = preset("fig2b");
  u.sweep = {SweepAxis::snr_db, 60.0, 90.0, 10.0};
  u.metrics = {Metric::outage, Metric::ber, Metric::capacity};
  u.plan = {200000, 99, 1};
  RunConfig m = preset("fig5a");
  m.curves.resize(1);
  m.sweep = {SweepAxis::power_dbm, 20.0, 30.0, 10.0};
  m.plan = {100000, 99, 1};
  std::size_t files = 0;
  const bool same_u = identical_outputs(u, dir, files);
  const bool same_m = identical_outputs(m, dir, files);
  v.item("uwoc CSV/summary identical (runs x workers 1,3)", same_u ? 1.0 : 0.0, "== 1", same_u);
  v.item("mixed CSV/summary identical (runs x workers 1,3)", same_m ? 1.0 : 0.0, "== 1", same_m);
  v.item("files compared", static_cast<double>(files), "> 0", files > 0);
  std::filesystem::remove_all(dir);
}

}  // namespace

int main() {
  const std::vector<std::pair<int, void (*)(Verdict&)>> criteria{
      {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
      {5, criterion5}, {6, criterion6}, {7, criterion7}, {8, criterion8}};
  bool all = true;
  // Runtime limits in seconds, where one is stated.
  const std::map<int, double> limits{{1, 10.0}, {2, 600.0}, {4, 1800.0}};
  for (const auto& [id, fn] : criteria) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "; exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (const auto it = limits.find(id); it != limits.end()) {
      std::ostringstream l;
      l << "< " << it->second << " s";
      v.item("runtime", secs, l.str(), secs < it->second);
    }
    std::printf("criterion %d: %s  %s  [%.1f s]\n", id, v.pass ? "PASS" : "FAIL", v.detail.str().c_str(), secs);
    std::fflush(stdout);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
