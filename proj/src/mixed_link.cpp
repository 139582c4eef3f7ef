#include "uwoc/mixed_link.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "uwoc/errors.hpp"
#include "uwoc/log.hpp"
#include "uwoc/quadrature.hpp"

namespace uwoc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.69314718055994530942;

double check_probability(double v, double rel_tol) {
  const double slack = 10.0 * rel_tol;
  if (v < -slack || v > 1.0 + slack) {
    std::ostringstream os;
    os << "mixed distribution function evaluated to " << v << ", outside [0, 1] beyond tolerance";
    throw ConvergenceError(os.str());
  }
  return std::clamp(v, 0.0, 1.0);
}

cplx ber_kernel(cplx s, double phi) { return log_gamma_complex(phi - 0.5 * s) - std::log(-s); }

// U-side factor of every left-form kernel:
// Gamma(s2/2) Gamma((s1 - s2)/2) E_U(s2) Z2^{s2} / 2.
struct UwocSide {
  ChannelMellin M;
  double log_z2;
  cplx operator()(cplx s1, cplx s2) const {
    return log_gamma_complex(0.5 * s2) + log_gamma_complex(0.5 * (s1 - s2)) + M(s2) +
           s2 * log_z2 - kLn2;
  }
};

UwocSide uwoc_side(const MixedLinkConfig& cfg) {
  return {ChannelMellin(cfg.stack.layers, cfg.stack.pe), 0.5 * std::log(cfg.uwoc_gamma_bar / cfg.C)};
}

// Contour pair for the left form: max(first pole of T, -2) < c1 < 0 and
// max(first pole of U, -2) < c2 < c1, at the minimum of the real-axis
// modulus.
std::pair<double, double> choose_left_contour(const std::function<double(double, double)>& obj,
                                              double pole_t, double pole_u, double margin) {
  const double lo1 = std::max(pole_t, -2.0) + margin, hi1 = -margin;
  const double lo2 = std::max(pole_u, -2.0) + margin;
  auto f = [&](double c1, double c2) {
    if (!(c1 > lo1 - 1e-15 && c1 < hi1 + 1e-15 && c2 > lo2 - 1e-15 && c2 < c1 - margin + 1e-15))
      return kInf;
    try {
      const double v = obj(c1, c2);
      return std::isnan(v) ? kInf : v;
    } catch (const PoleError&) {
      return kInf;
    }
  };
  if (!(hi1 > lo1) || !(hi1 - margin > lo2))
    throw ContourError("no contour pair fits between the two hops' poles and zero");
  constexpr int kGrid = 24;
  double best = kInf, b1 = 0.0, b2 = 0.0;
  for (int i = 1; i < kGrid; ++i) {
    const double c1 = lo1 + (hi1 - lo1) * i / kGrid;
    const double top = c1 - margin;
    if (!(top > lo2)) continue;
    for (int j = 1; j < kGrid; ++j) {
      const double c2 = lo2 + (top - lo2) * j / kGrid;
      const double v = f(c1, c2);
      if (v < best) {
        best = v;
        b1 = c1;
        b2 = c2;
      }
    }
  }
  if (!std::isfinite(best)) throw ContourError("left-form contour search found no finite point");
  for (int round = 0; round < 4; ++round) {
    b1 = minimise_on_interval([&](double c) { return f(c, b2); }, std::max(lo1, b2 + margin), hi1,
                              24);
    b2 = minimise_on_interval([&](double c) { return f(b1, c); }, lo2, b1 - margin, 24);
  }
  if (!std::isfinite(f(b1, b2))) throw ContourError("left-form contour search failed");
  return {b1, b2};
}

double towc_scale_argument(const MixedLinkConfig& cfg, double gamma) {
  return std::sqrt(gamma / cfg.towc_gamma_bar);
}

// T-side first pole of one Malaga term: Gamma(alpha+s) Gamma(m+s) Gamma(z+s)^k
// Gamma(rho2+s).
double term_first_pole(const MalagaFogParams& p, int m) {
  return std::max({-p.alphaM, -static_cast<double>(m), -p.z_fog, -p.rho2_T});
}

double term_first_pole(const UnifiedTerm& t, double rho2) {
  double f = -rho2;
  for (const auto& g : t.D) f = std::max(f, -g.b / g.B);
  return f;
}

enum class Stat { pdf, cdf, ber };

// Double integral of the left form on the factorized route. `q` is only used
// for the BER.
double plane_factorized(const MixedLinkConfig& cfg, Stat stat, double gamma, double phi, double q,
                        const QuadratureConfig& quad) {
  const MalagaFogParams& P = cfg.towc;
  const UwocSide U = uwoc_side(cfg);
  double log_z1 = 0.0;
  if (stat == Stat::ber)
    log_z1 = -0.5 * std::log(q * cfg.towc_gamma_bar);
  else
    log_z1 = std::log(towc_scale_argument(cfg, gamma));
  auto t_side = [&](cplx s1) -> cplx {
    cplx v = towc_log_mellin(P, s1) - s1 * log_z1 - kLn2;
    if (stat == Stat::pdf) return v - log_gamma_complex(0.5 * s1);
    v -= log_gamma_complex(1.0 + 0.5 * s1);
    if (stat == Stat::ber) v += log_gamma_complex(phi - 0.5 * s1);
    return v;
  };
  auto logg = [&](cplx s1, cplx s2) { return t_side(s1) + U(s1, s2); };
  const auto [c1, c2] = choose_left_contour(
      [&](double a, double b) { return logg(a, b).real(); }, towc_first_pole(P),
      U.M.first_pole(), quad.pole_margin);
  const double sign = stat == Stat::pdf ? 1.0 : -1.0;
  cplx last_s1(kInf, 0.0), last_t;
  auto g = [&](cplx s1, cplx s2) {
    if (s1 != last_s1) {
      last_t = t_side(s1);
      last_s1 = s1;
    }
    return std::exp(last_t + U(s1, s2));
  };
  double v = sign * integrate_plane(g, c1, c2, quad).value;
  if (stat == Stat::pdf) v /= gamma;
  return v;
}

// Same double integral as a sum of bivariate Fox-H functions, one per Malaga
// term and underwater expansion term.
double plane_bivariate(const MixedLinkConfig& cfg, Stat stat, double gamma, double phi, double q,
                       const CascadeOptions& copt) {
  const MalagaFogParams& P = cfg.towc;
  const auto terms_t = towc_terms(P);
  const UnifiedExpansion ex = unified_expansion(cfg.stack.layers, copt.ew_trunc, copt.cap);
  const double rho2_u = cfg.stack.pe.rho2, A0 = cfg.stack.pe.A0;
  const double z2_scale = std::sqrt(cfg.C / cfg.uwoc_gamma_bar) / A0;
  const double t_arg = stat == Stat::ber ? 1.0 / std::sqrt(q * cfg.towc_gamma_bar)
                                         : towc_scale_argument(cfg, gamma);
  double acc = 0.0;
  for (std::size_t m = 0; m < terms_t.size(); ++m) {
    const TowcTerm& tt = terms_t[m];
    for (const auto& tu : ex.terms) {
      BivariateFoxHSpec spec;
      spec.axis1 = tt.spec;
      if (stat == Stat::pdf) {
        spec.axis1.upper_right.push_back({0.0, 0.5});
      } else {
        spec.axis1.upper_right.push_back({1.0, 0.5});
        if (stat == Stat::ber) spec.axis1.upper_left.push_back({1.0 - phi, 0.5});
      }
      spec.axis2 = pdf_term_spec(tu, rho2_u);
      spec.axis2.lower_left.push_back({0.0, 0.5});
      spec.joint_upper.push_back({{0.0, 1.0}, 0.5, -0.5});
      spec.z1 = tt.scale * t_arg;
      spec.z2 = tu.E * z2_scale;
      const auto contour = choose_left_contour(
          [&](double a, double b) { return bivariate_log_kernel(spec, a, b).real(); },
          term_first_pole(P, static_cast<int>(m) + 1), term_first_pole(tu, rho2_u),
          copt.quad.pole_margin);
      acc += tt.coefficient * rho2_u * tu.coefficient *
             bivariate_foxh_detailed(spec, copt.quad, contour).value;
    }
  }
  // Kernel constants: 1/4 with a minus sign for the distribution function
  // and the BER, 1/(4 gamma) for the density.
  return stat == Stat::pdf ? acc / (4.0 * gamma) : -acc / 4.0;
}

// E_U[...] over the underwater SNR density.
double over_uwoc(const MixedLinkConfig& cfg, const std::function<double(double)>& f,
                 const MixedOptions& opt) {
  quad::Options q;
  q.rel_tol = std::max(1e-10, 0.1 * opt.cascade.quad.rel_tol);
  const double center = cfg.uwoc_gamma_bar * combined_moment(cfg.stack, 2.0);
  auto integrand = [&](double x) {
    const double fu = snr_pdf(cfg.stack, {x, cfg.uwoc_gamma_bar}, opt.cascade);
    return fu == 0.0 ? 0.0 : f(x) * fu;
  };
  return quad::integrate_half_line(integrand, center, q).value;
}

MixedLinkConfig prepared(const MixedLinkConfig& cfg, const MixedOptions& opt) {
  validate_mixed(cfg);
  MixedLinkConfig c = cfg;
  c.towc = analytic_towc(cfg.towc, opt.exact_fog_shape);
  return c;
}

double composition(const MixedLinkConfig& c, Stat stat, double gamma, const ModulationScheme& mod,
                   const MixedOptions& opt) {
  const QuadratureConfig& quad = opt.cascade.quad;
  switch (stat) {
    case Stat::pdf:
      return over_uwoc(
          c,
          [&](double x) {
            const double r = (x + c.C) / x;
            return towc_snr_pdf(c, gamma * r, TowcRoute::factorized, quad) * r;
          },
          opt);
    case Stat::cdf:
      return over_uwoc(
          c,
          [&](double x) {
            return towc_snr_cdf(c, gamma * (1.0 + c.C / x), TowcRoute::factorized, quad);
          },
          opt);
    case Stat::ber:
      // Given gamma_U the end-to-end SNR is gamma_T scaled by x / (x + C).
      return over_uwoc(
          c,
          [&](double x) {
            MixedLinkConfig s = c;
            s.towc_gamma_bar = c.towc_gamma_bar * x / (x + c.C);
            return towc_avg_ber(s, mod, TowcRoute::factorized, quad);
          },
          opt);
  }
  return 0.0;
}

// Evaluates one statistic on the requested route. The plane routes add the
// terrestrial-only part; an over-budget double contour drops to composition.
MixedValue evaluate(const MixedLinkConfig& cfg, Stat stat, double gamma, const ModulationScheme& mod,
                    const MixedOptions& opt) {
  const MixedLinkConfig c = prepared(cfg, opt);
  MixedValue out;
  MixedRoute route = opt.route == MixedRoute::automatic ? MixedRoute::factorized : opt.route;
  if (route == MixedRoute::bivariate && opt.exact_fog_shape &&
      c.towc.k_fog != std::round(c.towc.k_fog))
    throw ParameterError("the bivariate route needs an integer fog shape");
  const QuadratureConfig& quad = opt.cascade.quad;
  if (route != MixedRoute::composition) {
    try {
      const TowcRoute tr = route == MixedRoute::bivariate ? TowcRoute::meijer : TowcRoute::factorized;
      double v = 0.0;
      if (stat == Stat::ber) {
        const double pre = mod.delta / (2.0 * std::tgamma(mod.phi));
        v = towc_avg_ber(c, mod, tr, quad);
        for (double q : mod.q)
          v += pre * (route == MixedRoute::bivariate
                          ? plane_bivariate(c, stat, gamma, mod.phi, q, opt.cascade)
                          : plane_factorized(c, stat, gamma, mod.phi, q, quad));
      } else {
        v = stat == Stat::pdf ? towc_snr_pdf(c, gamma, tr, quad) : towc_snr_cdf(c, gamma, tr, quad);
        v += route == MixedRoute::bivariate ? plane_bivariate(c, stat, gamma, 0.0, 0.0, opt.cascade)
                                            : plane_factorized(c, stat, gamma, 0.0, 0.0, quad);
      }
      out.value = v;
      out.route = route;
      return out;
    } catch (const ConvergenceError& e) {
      if (std::string(e.what()).find("exceeded") == std::string::npos) throw;
      log_warning(std::string("double contour over budget, using the composition integral: ") +
                  e.what());
      out.slow_path = true;
    }
  }
  out.value = composition(c, stat, gamma, mod, opt);
  out.route = MixedRoute::composition;
  return out;
}

}  // namespace

void validate_mixed(const MixedLinkConfig& cfg) {
  validate_malaga(cfg.towc);
  validate_stack(cfg.stack);
  if (!(cfg.towc_gamma_bar > 0.0) || !std::isfinite(cfg.towc_gamma_bar))
    throw ParameterError("towc_gamma_bar must be positive and finite");
  if (!(cfg.uwoc_gamma_bar > 0.0) || !std::isfinite(cfg.uwoc_gamma_bar))
    throw ParameterError("uwoc_gamma_bar must be positive and finite");
  if (!(cfg.C > 0.0)) throw ParameterError("C must be > 0");
  if (!(cfg.l_T > 0.0)) throw ParameterError("l_T must be > 0");
}

cplx towc_log_mellin(const MalagaFogParams& p, cplx s) {
  return malaga_log_mellin(p, s) + p.k_fog * (std::log(p.z_fog) - std::log(p.z_fog + s)) +
         std::log(p.rho2_T) + s * std::log(p.A_T) - std::log(p.rho2_T + s);
}

double towc_first_pole(const MalagaFogParams& p) {
  return std::max({-p.alphaM, -1.0, -p.z_fog, -p.rho2_T});
}

int towc_integer_k(const MalagaFogParams& p) {
  return std::max(1, static_cast<int>(std::lround(p.k_fog)));
}

MalagaFogParams analytic_towc(const MalagaFogParams& p, bool exact_fog_shape) {
  MalagaFogParams out = p;
  if (exact_fog_shape) return out;
  const int k = towc_integer_k(p);
  if (static_cast<double>(k) != p.k_fog) {
    std::ostringstream os;
    os << "fog shape k = " << p.k_fog << " rounded to " << k
       << " for the closed-form statistics (Monte Carlo keeps the real value)";
    log_warning(os.str());
    out.k_fog = k;
  }
  return out;
}

std::vector<TowcTerm> towc_terms(const MalagaFogParams& p) {
  validate_malaga(p);
  const int k = towc_integer_k(p);
  if (static_cast<double>(k) != p.k_fog) {
    std::ostringstream os;
    os << "fog shape k = " << p.k_fog << " rounded to " << k << " in the Meijer-G form";
    log_warning(os.str());
  }
  const double zk = std::pow(p.z_fog, k);
  std::vector<TowcTerm> out;
  for (int m = 1; m <= p.betaM; ++m) {
    TowcTerm t;
    t.coefficient = 0.5 * p.Amg * p.b_m[m - 1] * zk * p.rho2_T;
    t.spec.lower_left = {{p.alphaM, 1.0}, {static_cast<double>(m), 1.0}};
    for (int i = 0; i < k; ++i) {
      t.spec.lower_left.push_back({p.z_fog, 1.0});
      t.spec.upper_right.push_back({p.z_fog + 1.0, 1.0});
    }
    t.spec.lower_left.push_back({p.rho2_T, 1.0});
    t.spec.upper_right.push_back({1.0 + p.rho2_T, 1.0});
    t.scale = malaga_scale(p) / p.A_T;
    out.push_back(std::move(t));
  }
  return out;
}

double towc_snr_pdf(const MixedLinkConfig& cfg, double gamma, TowcRoute route,
                    const QuadratureConfig& quad) {
  validate_malaga(cfg.towc);
  if (!(cfg.towc_gamma_bar > 0.0)) throw ParameterError("towc_gamma_bar must be > 0");
  if (!(gamma > 0.0)) return 0.0;
  const double x = towc_scale_argument(cfg, gamma);
  if (route == TowcRoute::factorized) {
    auto M = [&](cplx s) { return towc_log_mellin(cfg.towc, s); };
    auto zero = [](cplx) { return cplx(0.0); };
    return std::max(0.0, mellin_line(M, towc_first_pole(cfg.towc), zero, -kInf, kInf, std::log(x),
                                      quad)
                             .value) /
           (2.0 * gamma);
  }
  double acc = 0.0;
  for (const auto& t : towc_terms(cfg.towc)) acc += t.coefficient * meijerg(t.spec, t.scale * x, quad);
  return std::max(0.0, acc) / (2.0 * gamma);
}

double towc_snr_cdf(const MixedLinkConfig& cfg, double gamma, TowcRoute route,
                    const QuadratureConfig& quad) {
  validate_malaga(cfg.towc);
  if (!(cfg.towc_gamma_bar > 0.0)) throw ParameterError("towc_gamma_bar must be > 0");
  if (!(gamma > 0.0)) return 0.0;
  const double x = towc_scale_argument(cfg, gamma);
  double v = 0.0;
  if (route == TowcRoute::factorized) {
    auto M = [&](cplx s) { return towc_log_mellin(cfg.towc, s); };
    auto kernel = [](cplx s) { return -std::log(-s); };
    v = mellin_line(M, towc_first_pole(cfg.towc), kernel, -kInf, 0.0, std::log(x), quad).value;
  } else {
    for (const auto& t : towc_terms(cfg.towc)) {
      FoxHSpec s = t.spec;
      s.upper_left.push_back({1.0, 1.0});
      s.lower_right.push_back({0.0, 1.0});
      v += t.coefficient * meijerg(s, t.scale * x, quad);
    }
  }
  return check_probability(v, quad.rel_tol);
}

double towc_avg_ber(const MixedLinkConfig& cfg, const ModulationScheme& mod, TowcRoute route,
                    const QuadratureConfig& quad) {
  validate_malaga(cfg.towc);
  validate_modulation(mod);
  if (!(cfg.towc_gamma_bar > 0.0)) throw ParameterError("towc_gamma_bar must be > 0");
  const double pre = mod.delta / (2.0 * std::tgamma(mod.phi));
  double acc = 0.0;
  if (route == TowcRoute::factorized) {
    auto M = [&](cplx s) { return towc_log_mellin(cfg.towc, s); };
    auto kernel = [&](cplx s) { return ber_kernel(s, mod.phi); };
    for (double q : mod.q)
      acc += mellin_line(M, towc_first_pole(cfg.towc), kernel, -kInf, 0.0,
                         -0.5 * std::log(q * cfg.towc_gamma_bar), quad)
                 .value;
  } else {
    const auto terms = towc_terms(cfg.towc);
    for (double q : mod.q)
      for (const auto& t : terms) {
        FoxHSpec s = t.spec;
        s.upper_left.push_back({1.0, 1.0});
        s.lower_right.push_back({0.0, 1.0});
        s.upper_left.push_back({1.0 - mod.phi, 0.5});
        acc += t.coefficient * foxh(s, t.scale / std::sqrt(q * cfg.towc_gamma_bar), quad);
      }
  }
  return pre * acc;
}

MixedValue mixed_pdf_detailed(const MixedLinkConfig& cfg, double gamma, const MixedOptions& opt) {
  if (!(gamma > 0.0)) {
    validate_mixed(cfg);
    return {0.0, opt.route, false};
  }
  MixedValue v = evaluate(cfg, Stat::pdf, gamma, {}, opt);
  v.value = std::max(v.value, 0.0);
  return v;
}

MixedValue mixed_cdf_detailed(const MixedLinkConfig& cfg, double gamma, const MixedOptions& opt) {
  if (!(gamma > 0.0)) {
    validate_mixed(cfg);
    return {0.0, opt.route, false};
  }
  MixedValue v = evaluate(cfg, Stat::cdf, gamma, {}, opt);
  v.value = check_probability(v.value, opt.cascade.quad.rel_tol);
  return v;
}

MixedValue mixed_avg_ber_detailed(const MixedLinkConfig& cfg, const ModulationScheme& mod,
                                  const MixedOptions& opt) {
  validate_modulation(mod);
  return evaluate(cfg, Stat::ber, 0.0, mod, opt);
}

double mixed_pdf(const MixedLinkConfig& cfg, double gamma, const MixedOptions& opt) {
  return mixed_pdf_detailed(cfg, gamma, opt).value;
}

double mixed_cdf(const MixedLinkConfig& cfg, double gamma, const MixedOptions& opt) {
  return mixed_cdf_detailed(cfg, gamma, opt).value;
}

double mixed_outage(const MixedLinkConfig& cfg, double gamma_th, const MixedOptions& opt) {
  return mixed_cdf(cfg, gamma_th, opt);
}

double mixed_avg_ber(const MixedLinkConfig& cfg, const ModulationScheme& mod,
                     const MixedOptions& opt) {
  return mixed_avg_ber_detailed(cfg, mod, opt).value;
}

double mixed_pdf_composition(const MixedLinkConfig& cfg, double gamma, const MixedOptions& opt) {
  if (!(gamma > 0.0)) return 0.0;
  return composition(prepared(cfg, opt), Stat::pdf, gamma, {}, opt);
}

double mixed_cdf_composition(const MixedLinkConfig& cfg, double gamma, const MixedOptions& opt) {
  if (!(gamma > 0.0)) return 0.0;
  return check_probability(composition(prepared(cfg, opt), Stat::cdf, gamma, {}, opt),
                           opt.cascade.quad.rel_tol);
}

MixedSampler::MixedSampler(const MixedLinkConfig& cfg)
    : cfg_(cfg), malaga_(std::make_shared<const MalagaSampler>(cfg.towc)) {
  validate_mixed(cfg);
}

double MixedSampler::towc_gain(Rng& rng) const {
  const PointingError pe{cfg_.towc.rho2_T, cfg_.towc.A_T};
  return sample_fog_gain(cfg_.towc.k_fog, cfg_.towc.z_fog, rng) * (*malaga_)(rng) *
         sample_pointing(pe, rng);
}

double MixedSampler::uwoc_gain(Rng& rng) const { return sample_combined(cfg_.stack, rng); }

double MixedSampler::snr(Rng& rng) const {
  const double ht = towc_gain(rng), hu = uwoc_gain(rng);
  const double gt = cfg_.towc_gamma_bar * ht * ht, gu = cfg_.uwoc_gamma_bar * hu * hu;
  return gt * gu / (gu + cfg_.C);
}

MixedLinkConfig at_power(MixedLinkConfig cfg, double power_dbm, double noise_variance) {
  cfg.towc_gamma_bar = link_gamma_bar(power_dbm, PathGain{}, noise_variance);
  cfg.uwoc_gamma_bar = link_gamma_bar(power_dbm, cfg.stack.path, noise_variance);
  return cfg;
}

}  // namespace uwoc
