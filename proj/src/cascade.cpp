#include "uwoc/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "uwoc/errors.hpp"

namespace uwoc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<double> branch_leading_poles(const LayerModel& model) {
  return std::visit(overloaded{[](const GGParams& m) { return std::vector<double>{-m.d}; },
                               [](const EGGParams& m) {
                                 std::vector<double> out;
                                 if (m.omega > 0.0) out.push_back(-1.0);
                                 if (m.omega < 1.0) out.push_back(-m.d);
                                 return out;
                               },
                               [](const EWParams& m) {
                                 return std::vector<double>{-m.alpha * m.beta};
                               },
                               [](const GammaGammaParams& m) {
                                 return std::vector<double>{-m.alpha, -m.beta};
                               }},
                    model);
}

bool has_ew(const std::vector<LayerModel>& layers) {
  return std::any_of(layers.begin(), layers.end(),
                     [](const LayerModel& l) { return std::holds_alternative<EWParams>(l); });
}

double check_probability(double v, double rel_tol) {
  const double slack = 10.0 * rel_tol;
  if (v < -slack || v > 1.0 + slack) {
    std::ostringstream os;
    os << "distribution function evaluated to " << v << ", outside [0, 1] beyond tolerance";
    throw ConvergenceError(os.str());
  }
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace

void validate_stack(const UwocStack& stack) {
  if (stack.layers.empty()) throw ParameterError("stack needs at least one layer");
  for (const auto& l : stack.layers) validate_layer(l);
  validate_pointing(stack.pe);
  (void)stack.path.gain();
}

Route resolve_route(const std::vector<LayerModel>& layers, const CascadeOptions& opt) {
  if (opt.route != Route::automatic) return opt.route;
  if (has_ew(layers)) return Route::factorized;
  if (expansion_size(layers, opt.ew_trunc) > static_cast<double>(opt.cap))
    return Route::factorized;
  return Route::terms;
}

FoxHSpec pdf_term_spec(const UnifiedTerm& t, double rho2) {
  FoxHSpec s;
  s.lower_left = t.D;
  s.lower_left.push_back({rho2, 1.0});
  s.upper_right.push_back({1.0 + rho2, 1.0});
  return s;
}

FoxHSpec cdf_term_spec(const UnifiedTerm& t, double rho2) {
  FoxHSpec s = pdf_term_spec(t, rho2);
  s.upper_left.push_back({1.0, 1.0});
  s.lower_right.push_back({0.0, 1.0});
  return s;
}

ChannelMellin::ChannelMellin(const std::vector<LayerModel>& layers) {
  if (layers.empty()) throw ParameterError("stack needs at least one layer");
  first_pole_ = -kInf;
  for (const auto& l : layers) {
    layers_.emplace_back(l);
    first_pole_ = std::max(first_pole_, layers_.back().first_pole());
    for (double p : branch_leading_poles(l)) leading_.push_back(p);
  }
}

ChannelMellin::ChannelMellin(const std::vector<LayerModel>& layers, const PointingError& pe)
    : ChannelMellin(layers) {
  validate_pointing(pe);
  has_pe_ = true;
  pe_ = pe;
  first_pole_ = std::max(first_pole_, -pe.rho2);
  leading_.push_back(-pe.rho2);
}

cplx ChannelMellin::operator()(cplx s) const {
  cplx acc = 0.0;
  for (const auto& l : layers_) acc += l(s);
  if (has_pe_) acc += std::log(pe_.rho2) + s * std::log(pe_.A0) - std::log(pe_.rho2 + s);
  return acc;
}

std::vector<double> ChannelMellin::poles(double span) const {
  std::vector<double> out;
  const double floor = first_pole_ - span;
  for (const auto& l : layers_) {
    // Each layer reports relative to its own first pole.
    for (double p : l.poles(l.first_pole() - floor))
      if (p >= floor) out.push_back(p);
  }
  if (has_pe_)
    for (double p = -pe_.rho2; p >= floor; p -= 1.0) out.push_back(p);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

LineIntegral mellin_line(const std::function<cplx(cplx)>& log_mellin, double first_pole,
                         const std::function<cplx(cplx)>& log_kernel, double lo, double hi,
                         double log_z, const QuadratureConfig& cfg) {
  const double left = std::max(lo, first_pole) + cfg.pole_margin;
  if (std::isfinite(hi) && !(hi - cfg.pole_margin > left))
    throw ContourError("no admissible abscissa between the channel poles and the kernel poles");
  auto objective = [&](double c) {
    try {
      const double v = (log_mellin(c) + log_kernel(c)).real() - c * log_z;
      return std::isnan(v) ? kInf : v;
    } catch (const PoleError&) {
      return kInf;
    }
  };
  double reach = std::clamp(2.0 * std::abs(log_z) + 10.0, 10.0, 150.0);
  double c = left;
  for (int round = 0;; ++round) {
    const double right = std::isfinite(hi) ? hi - cfg.pole_margin : left + reach;
    c = minimise_on_interval(objective, left, right);
    const double edge = 2.0 * (right - left) / 48.0;
    if (std::isfinite(hi) || right - c >= edge || round == 8) break;
    reach *= 2.0;
  }
  auto g = [&](cplx s) { return std::exp(log_mellin(s) + log_kernel(s) - s * log_z); };
  return integrate_vertical(g, c, cfg);
}

double cascaded_pdf(const std::vector<LayerModel>& layers, double h, const CascadeOptions& opt) {
  if (!(h > 0.0)) return 0.0;
  for (const auto& l : layers) validate_layer(l);
  if (resolve_route(layers, opt) == Route::factorized) {
    const ChannelMellin M(layers);
    auto zero = [](cplx) { return cplx(0.0); };
    return mellin_line(M, M.first_pole(), zero, -kInf, kInf, std::log(h), opt.quad).value / h;
  }
  const UnifiedExpansion ex = unified_expansion(layers, opt.ew_trunc, opt.cap);
  double acc = 0.0;
  for (const auto& t : ex.terms) {
    FoxHSpec s;
    s.lower_left = t.D;
    acc += t.coefficient * foxh(s, t.E * h, opt.quad);
  }
  return acc / h;
}

double snr_pdf(const UwocStack& stack, SnrPoint pt, const CascadeOptions& opt) {
  validate_stack(stack);
  if (!(pt.gamma_bar > 0.0)) throw ParameterError("gamma_bar must be > 0");
  if (!(pt.gamma > 0.0)) return 0.0;
  const double x = std::sqrt(pt.gamma / pt.gamma_bar);
  if (resolve_route(stack.layers, opt) == Route::factorized) {
    const ChannelMellin M(stack.layers, stack.pe);
    auto zero = [](cplx) { return cplx(0.0); };
    return mellin_line(M, M.first_pole(), zero, -kInf, kInf, std::log(x), opt.quad).value /
           (2.0 * pt.gamma);
  }
  const UnifiedExpansion ex = unified_expansion(stack.layers, opt.ew_trunc, opt.cap);
  const double rho2 = stack.pe.rho2;
  double acc = 0.0;
  for (const auto& t : ex.terms)
    acc += t.coefficient * foxh(pdf_term_spec(t, rho2), t.E / stack.pe.A0 * x, opt.quad);
  return rho2 * acc / (2.0 * pt.gamma);
}

double snr_cdf(const UwocStack& stack, SnrPoint pt, const CascadeOptions& opt) {
  validate_stack(stack);
  if (!(pt.gamma_bar > 0.0)) throw ParameterError("gamma_bar must be > 0");
  if (!(pt.gamma > 0.0)) return 0.0;
  const double x = std::sqrt(pt.gamma / pt.gamma_bar);
  double v = 0.0;
  if (resolve_route(stack.layers, opt) == Route::factorized) {
    const ChannelMellin M(stack.layers, stack.pe);
    auto kernel = [](cplx s) { return -std::log(-s); };
    v = mellin_line(M, M.first_pole(), kernel, -kInf, 0.0, std::log(x), opt.quad).value;
  } else {
    const UnifiedExpansion ex = unified_expansion(stack.layers, opt.ew_trunc, opt.cap);
    for (const auto& t : ex.terms)
      v += t.coefficient * foxh(cdf_term_spec(t, stack.pe.rho2), t.E / stack.pe.A0 * x, opt.quad);
    v *= stack.pe.rho2;
  }
  return check_probability(v, opt.quad.rel_tol);
}

double sample_combined(const UwocStack& stack, Rng& rng) {
  double h = sample_pointing(stack.pe, rng);
  for (const auto& l : stack.layers) h *= sample_layer(l, rng);
  return h;
}

double combined_moment(const UwocStack& stack, double n) {
  double m = stack.pe.rho2 * std::pow(stack.pe.A0, n) / (stack.pe.rho2 + n);
  for (const auto& l : stack.layers) m *= moment_layer(l, n);
  return m;
}

}  // namespace uwoc
