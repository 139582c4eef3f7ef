#include "uwoc/metrics.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "uwoc/errors.hpp"

namespace uwoc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double check_gamma_bar(double gamma_bar) {
  if (!(gamma_bar > 0.0) || !std::isfinite(gamma_bar))
    throw ParameterError("gamma_bar must be positive and finite");
  return gamma_bar;
}

// Per-term kernels shared by the exact and asymptotic forms.
FoxHSpec ber_term_spec(const UnifiedTerm& t, double rho2, double phi) {
  FoxHSpec s = cdf_term_spec(t, rho2);
  s.upper_left.push_back({1.0 - phi, 0.5});
  return s;
}

FoxHSpec capacity_term_spec(const UnifiedTerm& t, double rho2) {
  FoxHSpec s = pdf_term_spec(t, rho2);
  s.lower_left.push_back({0.0, 0.5});
  s.lower_left.push_back({0.0, 0.5});
  s.upper_left.push_back({0.0, 0.5});
  s.upper_right.push_back({1.0, 0.5});
  return s;
}

// Mellin-side kernels for the factorized route, in s = Mellin variable of h.
cplx cdf_kernel(cplx s) { return -std::log(-s); }

cplx ber_kernel(cplx s, double phi) { return log_gamma_complex(phi - 0.5 * s) - std::log(-s); }

// pi / (s sin(pi s / 2)) written through Gamma functions so it stays finite in
// log form far up the line.
cplx capacity_kernel(cplx s) {
  return 2.0 * log_gamma_complex(0.5 * s) + log_gamma_complex(1.0 - 0.5 * s) -
         log_gamma_complex(1.0 + 0.5 * s) - std::log(2.0);
}

}  // namespace

void validate_modulation(const ModulationScheme& mod) {
  if (!(mod.delta > 0.0)) throw ParameterError("modulation.delta must be > 0");
  if (!(mod.phi > 0.0)) throw ParameterError("modulation.phi must be > 0");
  if (mod.q.empty()) throw ParameterError("modulation.q must have at least one entry");
  for (double q : mod.q)
    if (!(q > 0.0)) throw ParameterError("modulation.q entries must be > 0");
}

double conditional_ber(const ModulationScheme& mod, double gamma) {
  double acc = 0.0;
  for (double q : mod.q) acc += boost::math::gamma_q(mod.phi, q * std::max(gamma, 0.0));
  return 0.5 * mod.delta * acc;
}

double capacity_kappa(DetectionKind kind) {
  return kind == DetectionKind::IMDD ? std::numbers::e / (2.0 * std::numbers::pi) : 1.0;
}

double outage(const UwocStack& stack, double gamma_bar, double gamma_th,
              const CascadeOptions& opt) {
  return snr_cdf(stack, {gamma_th, check_gamma_bar(gamma_bar)}, opt);
}

double outage_asymptotic(const UwocStack& stack, double gamma_bar, double gamma_th,
                         const CascadeOptions& opt) {
  validate_stack(stack);
  check_gamma_bar(gamma_bar);
  if (!(gamma_th > 0.0)) return 0.0;
  const double x = std::sqrt(gamma_th / gamma_bar);
  if (resolve_route(stack.layers, opt) == Route::factorized) {
    const ChannelMellin M(stack.layers, stack.pe);
    const double lx = std::log(x);
    auto g = [&](cplx s) { return std::exp(M(s) + cdf_kernel(s) - s * lx); };
    return leading_residues(g, M.leading_poles(), M.poles(2.0));
  }
  const UnifiedExpansion ex = unified_expansion(stack.layers, opt.ew_trunc, opt.cap);
  double acc = 0.0;
  for (const auto& t : ex.terms)
    acc += t.coefficient *
           foxh_leading_residues(cdf_term_spec(t, stack.pe.rho2), t.E / stack.pe.A0 * x);
  return stack.pe.rho2 * acc;
}

double diversity_order(const UwocStack& stack) {
  validate_stack(stack);
  return -ChannelMellin(stack.layers, stack.pe).first_pole() / 2.0;
}

double diversity_order_printed(const UwocStack& stack) {
  validate_stack(stack);
  const auto& L = stack.layers;
  const double cap = stack.pe.rho2 / 2.0;
  auto all_of = [&](auto tag) {
    return std::all_of(L.begin(), L.end(), [](const LayerModel& l) {
      return std::holds_alternative<decltype(tag)>(l);
    });
  };
  auto sum = [&](auto field) {
    double acc = 0.0;
    for (const auto& l : L) acc += field(l);
    return acc;
  };
  if (all_of(GGParams{}))
    return std::min(sum([](const LayerModel& l) { return std::get<GGParams>(l).d; }) / 2.0, cap);
  if (all_of(EGGParams{}))
    return std::min({L.size() / 2.0,
                     sum([](const LayerModel& l) { return std::get<EGGParams>(l).d; }) / 2.0,
                     cap});
  if (all_of(EWParams{}))
    return std::min(sum([](const LayerModel& l) { return std::get<EWParams>(l).beta; }) / 2.0,
                    cap);
  if (all_of(GammaGammaParams{}))
    return std::min(
        {sum([](const LayerModel& l) { return std::get<GammaGammaParams>(l).alpha; }) / 2.0,
         sum([](const LayerModel& l) { return std::get<GammaGammaParams>(l).beta; }) / 2.0, cap});
  // Mixed families: the same summation applied to each layer's leading pole.
  return std::min(sum([](const LayerModel& l) { return -LayerMellin(l).first_pole(); }) / 2.0,
                  cap);
}

double avg_ber(const UwocStack& stack, double gamma_bar, const ModulationScheme& mod,
               const CascadeOptions& opt) {
  validate_stack(stack);
  validate_modulation(mod);
  check_gamma_bar(gamma_bar);
  const double pre = mod.delta / (2.0 * std::tgamma(mod.phi));
  double acc = 0.0;
  if (resolve_route(stack.layers, opt) == Route::factorized) {
    const ChannelMellin M(stack.layers, stack.pe);
    auto kernel = [&](cplx s) { return ber_kernel(s, mod.phi); };
    for (double q : mod.q)
      acc += mellin_line(M, M.first_pole(), kernel, -kInf, 0.0, -0.5 * std::log(q * gamma_bar),
                         opt.quad)
                 .value;
  } else {
    const UnifiedExpansion ex = unified_expansion(stack.layers, opt.ew_trunc, opt.cap);
    for (double q : mod.q)
      for (const auto& t : ex.terms)
        acc += t.coefficient * foxh(ber_term_spec(t, stack.pe.rho2, mod.phi),
                                    t.E / stack.pe.A0 / std::sqrt(q * gamma_bar), opt.quad);
    acc *= stack.pe.rho2;
  }
  return pre * acc;
}

double avg_ber_asymptotic(const UwocStack& stack, double gamma_bar, const ModulationScheme& mod,
                          const CascadeOptions& opt) {
  validate_stack(stack);
  validate_modulation(mod);
  check_gamma_bar(gamma_bar);
  const double pre = mod.delta / (2.0 * std::tgamma(mod.phi));
  double acc = 0.0;
  if (resolve_route(stack.layers, opt) == Route::factorized) {
    const ChannelMellin M(stack.layers, stack.pe);
    for (double q : mod.q) {
      const double lz = -0.5 * std::log(q * gamma_bar);
      auto g = [&](cplx s) { return std::exp(M(s) + ber_kernel(s, mod.phi) - s * lz); };
      acc += leading_residues(g, M.leading_poles(), M.poles(2.0));
    }
  } else {
    const UnifiedExpansion ex = unified_expansion(stack.layers, opt.ew_trunc, opt.cap);
    for (double q : mod.q)
      for (const auto& t : ex.terms)
        acc += t.coefficient * foxh_leading_residues(ber_term_spec(t, stack.pe.rho2, mod.phi),
                                                     t.E / stack.pe.A0 / std::sqrt(q * gamma_bar));
    acc *= stack.pe.rho2;
  }
  return pre * acc;
}

double ergodic_capacity(const UwocStack& stack, double gamma_bar, DetectionKind det,
                        const CascadeOptions& opt) {
  validate_stack(stack);
  check_gamma_bar(gamma_bar);
  const double kg = capacity_kappa(det) * gamma_bar;
  double acc = 0.0;
  if (resolve_route(stack.layers, opt) == Route::factorized) {
    const ChannelMellin M(stack.layers, stack.pe);
    acc = mellin_line(M, M.first_pole(), capacity_kernel, 0.0, 2.0, -0.5 * std::log(kg), opt.quad)
              .value;
  } else {
    const UnifiedExpansion ex = unified_expansion(stack.layers, opt.ew_trunc, opt.cap);
    for (const auto& t : ex.terms)
      acc += t.coefficient *
             foxh(capacity_term_spec(t, stack.pe.rho2), t.E / stack.pe.A0 / std::sqrt(kg), opt.quad);
    acc *= 0.5 * stack.pe.rho2;
  }
  return std::max(acc, 0.0) / std::numbers::ln2;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double x) { return 10.0 * std::log10(x); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double link_gamma_bar(double power_dbm, const PathGain& path, double noise_variance) {
  if (!(noise_variance > 0.0)) throw ParameterError("noise variance must be > 0");
  const double p = dbm_to_watts(power_dbm) * path.gain();
  return p * p / noise_variance;
}

double gamma_bar_from_mean_snr(const UwocStack& stack, double mean_snr) {
  validate_stack(stack);
  return mean_snr / combined_moment(stack, 2.0);
}

double loglog_slope(const std::vector<double>& x_db, const std::vector<double>& y) {
  if (x_db.size() != y.size() || x_db.size() < 2)
    throw ParameterError("slope fit needs two or more matched points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x_db.size());
  for (std::size_t i = 0; i < x_db.size(); ++i) {
    if (!(y[i] > 0.0)) throw ParameterError("slope fit needs positive values");
    const double u = x_db[i] / 10.0, v = std::log10(y[i]);
    sx += u;
    sy += v;
    sxx += u * u;
    sxy += u * v;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace uwoc
