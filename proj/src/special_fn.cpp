#include "uwoc/special_fn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "uwoc/errors.hpp"
#include "uwoc/quadrature.hpp"

namespace uwoc {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Lanczos g = 7, n = 9.
constexpr double kLanczos[9] = {0.99999999999980993,   676.5203681218851,
                                -1259.1392167224028,   771.32342877765313,
                                -176.61502916214059,   12.507343278686905,
                                -0.13857109526572012,  9.9843695780195716e-6,
                                1.5056327351493116e-7};

cplx lanczos_log_gamma(cplx z) {
  z -= 1.0;
  cplx sum = kLanczos[0];
  for (int k = 1; k < 9; ++k) sum += kLanczos[k] / (z + static_cast<double>(k));
  const cplx t = z + 7.5;
  return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(sum);
}

// Stirling series through B_16; |z| >= 12, Re z >= 0.
cplx stirling_log_gamma(cplx z) {
  const cplx w = 1.0 / z;
  const cplx w2 = w * w;
  const cplx series =
      w * (1.0 / 12 +
           w2 * (-1.0 / 360 +
                 w2 * (1.0 / 1260 +
                       w2 * (-1.0 / 1680 +
                             w2 * (1.0 / 1188 +
                                   w2 * (-691.0 / 360360 +
                                         w2 * (1.0 / 156 + w2 * (-3617.0 / 122400))))))));
  return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + series;
}

cplx log_gamma_right(cplx z) {
  if (std::abs(z) >= 12.0 && z.real() >= 0.0) return stirling_log_gamma(z);
  return lanczos_log_gamma(z);
}

// log(1/Gamma(z)); -inf at the zeros of 1/Gamma.
cplx log_rgamma(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    return cplx(-kInf, 0.0);
  return -log_gamma_complex(z);
}

std::string factor_name(const char* list, std::size_t i, const GammaFactor& g) {
  std::ostringstream os;
  os << list << "[" << i << "]=(" << g.b << "," << g.B << ")";
  return os.str();
}

}  // namespace

cplx log_gamma_complex(cplx z) {
  if (z.imag() == 0.0) {
    const double x = z.real();
    if (x <= 0.0 && x == std::floor(x)) {
      std::ostringstream os;
      os << "log_gamma_complex: pole at " << x;
      throw PoleError(os.str());
    }
    if (x > 0.0) return {std::lgamma(x), 0.0};
    z = cplx(x, 0.0);  // drop a signed zero so log() lands on +i pi
  }
  if (z.real() >= 0.5) return log_gamma_right(z);
  const int n = static_cast<int>(std::ceil(0.5 - z.real()));
  cplx acc = 0.0;
  for (int k = 0; k < n; ++k) acc += std::log(z + static_cast<double>(k));
  return log_gamma_right(z + static_cast<double>(n)) - acc;
}

FoxHConvergence foxh_convergence(const FoxHSpec& spec) {
  double a_star = 0.0, delta = 0.0, mu = 0.0;
  for (const auto& g : spec.upper_left) {
    a_star += g.B;
    delta -= g.B;
    mu -= g.b;
  }
  for (const auto& g : spec.upper_right) {
    a_star -= g.B;
    delta -= g.B;
    mu -= g.b;
  }
  for (const auto& g : spec.lower_left) {
    a_star += g.B;
    delta += g.B;
    mu += g.b;
  }
  for (const auto& g : spec.lower_right) {
    a_star -= g.B;
    delta += g.B;
    mu += g.b;
  }
  const double p = static_cast<double>(spec.upper_left.size() + spec.upper_right.size());
  const double q = static_cast<double>(spec.lower_left.size() + spec.lower_right.size());
  mu += 0.5 * (p - q);
  return {a_star, delta, mu};
}

ContourStrip legal_strip(const FoxHSpec& spec, double pole_margin) {
  double lo = -kInf, hi = kInf;
  std::size_t lo_idx = 0, hi_idx = 0;
  auto check_slope = [](const GammaFactor& g) {
    if (!(g.B > 0.0) || !std::isfinite(g.b))
      throw ParameterError("Gamma factor needs finite shift and positive slope");
  };
  for (auto* list : {&spec.upper_right, &spec.lower_right})
    for (const auto& g : *list) check_slope(g);
  for (std::size_t i = 0; i < spec.lower_left.size(); ++i) {
    const auto& g = spec.lower_left[i];
    check_slope(g);
    const double pole = -g.b / g.B;
    if (pole > lo) {
      lo = pole;
      lo_idx = i;
    }
  }
  for (std::size_t i = 0; i < spec.upper_left.size(); ++i) {
    const auto& g = spec.upper_left[i];
    check_slope(g);
    const double pole = (1.0 - g.b) / g.B;
    if (pole < hi) {
      hi = pole;
      hi_idx = i;
    }
  }
  if (std::isfinite(lo) && std::isfinite(hi) && hi - lo <= 2.0 * pole_margin) {
    std::ostringstream os;
    os << "no separating contour: rightmost left pole " << lo << " from "
       << factor_name("lower_left", lo_idx, spec.lower_left[lo_idx])
       << " vs leftmost right pole " << hi << " from "
       << factor_name("upper_left", hi_idx, spec.upper_left[hi_idx]);
    throw ContourError(os.str());
  }
  return {lo, hi};
}

double choose_contour(const FoxHSpec& spec, const QuadratureConfig& cfg) {
  const ContourStrip s = legal_strip(spec, cfg.pole_margin);
  if (!std::isfinite(s.lo) && !std::isfinite(s.hi)) return 0.0;
  const double lo = std::isfinite(s.lo) ? s.lo : s.hi - 1.0;
  const double hi = std::isfinite(s.hi) ? s.hi : s.lo + 1.0;
  return 0.5 * (lo + hi);
}

cplx foxh_log_kernel(const FoxHSpec& spec, cplx s) {
  cplx acc = 0.0;
  for (const auto& g : spec.lower_left) acc += log_gamma_complex(g.b + g.B * s);
  for (const auto& g : spec.upper_left) acc += log_gamma_complex(1.0 - g.b - g.B * s);
  for (const auto& g : spec.upper_right) acc += log_rgamma(g.b + g.B * s);
  for (const auto& g : spec.lower_right) acc += log_rgamma(1.0 - g.b - g.B * s);
  return acc;
}

double minimise_on_interval(const std::function<double(double)>& f, double lo, double hi,
                            int grid) {
  if (!(hi > lo)) return lo;
  double best_x = lo, best_f = kInf;
  int best_i = 0;
  const double h = (hi - lo) / grid;
  for (int i = 0; i <= grid; ++i) {
    const double x = lo + h * i;
    const double v = f(x);
    if (v < best_f) {
      best_f = v;
      best_x = x;
      best_i = i;
    }
  }
  if (!std::isfinite(best_f)) return 0.5 * (lo + hi);
  double a = lo + h * std::max(best_i - 1, 0);
  double b = lo + h * std::min(best_i + 1, grid);
  constexpr double kPhi = 0.61803398874989484820;
  double x1 = b - kPhi * (b - a), x2 = a + kPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 40 && b - a > 1e-7 * (1.0 + std::abs(a)); ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kPhi * (b - a);
      f2 = f(x2);
    }
  }
  const double x = 0.5 * (a + b);
  return f(x) <= best_f ? x : best_x;
}

double choose_contour(const FoxHSpec& spec, double z, const QuadratureConfig& cfg) {
  const ContourStrip s = legal_strip(spec, cfg.pole_margin);
  const double logz = std::log(z);
  const FoxHConvergence conv = foxh_convergence(spec);
  auto objective = [&](double c) {
    try {
      const double v = foxh_log_kernel(spec, cplx(c, 0.0)).real() - c * logz;
      return std::isnan(v) ? kInf : v;
    } catch (const PoleError&) {
      return kInf;
    }
  };
  // Open sides start a modest distance out and are pushed further while the
  // minimiser sits at the artificial end.
  double reach = std::clamp(2.0 * std::abs(logz) + 10.0, 10.0, 150.0);
  for (int round = 0;; ++round) {
    double lo = std::isfinite(s.lo) ? s.lo + cfg.pole_margin : -reach;
    double hi = std::isfinite(s.hi) ? s.hi - cfg.pole_margin : reach;
    if (!std::isfinite(s.lo) && std::isfinite(s.hi)) lo = s.hi - reach;
    if (std::isfinite(s.lo) && !std::isfinite(s.hi)) hi = s.lo + reach;
    if (std::abs(conv.a_star) < 1e-12) {
      // Algebraic decay only: need delta*c + mu < -1 on the line.
      if (conv.delta > 0) hi = std::min(hi, (-1.0 - conv.mu) / conv.delta - cfg.pole_margin);
      if (conv.delta < 0) lo = std::max(lo, (-1.0 - conv.mu) / conv.delta + cfg.pole_margin);
      if (!(hi > lo)) throw ContourError("H-function integrand does not decay on any line");
    }
    const double c = minimise_on_interval(objective, lo, hi);
    const double edge = 2.0 * (hi - lo) / 48.0;
    const bool at_open_lo = !std::isfinite(s.lo) && c - lo < edge;
    const bool at_open_hi = !std::isfinite(s.hi) && hi - c < edge;
    if ((!at_open_lo && !at_open_hi) || round == 8) return c;
    reach *= 2.0;
  }
}

LineIntegral integrate_vertical(const std::function<cplx(cplx)>& g, double c,
                                const QuadratureConfig& cfg) {
  std::size_t nodes = 0;
  auto f = [&](double t) {
    const cplx v = g(cplx(c, t));
    if (!std::isfinite(v.real())) {
      if (std::isnan(v.real()) || std::abs(v.real()) == kInf)
        throw ConvergenceError("Mellin-Barnes integrand overflowed on the contour");
    }
    return v.real();
  };
  quad::Options opt;
  opt.rel_tol = 0.25 * cfg.rel_tol;
  opt.max_evals = cfg.max_nodes;
  double height = cfg.contour_height;
  quad::Result r = quad::gauss_kronrod(f, 0.0, height, opt);
  nodes += r.evals;
  double value = r.value, error = r.error, l1 = r.l1;
  bool converged = r.converged;
  for (;;) {
    quad::Result seg = quad::gauss_kronrod(f, height, 2.0 * height, opt);
    nodes += seg.evals;
    value += seg.value;
    error += seg.error;
    l1 += seg.l1;
    converged = converged && seg.converged;
    height *= 2.0;
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * l1;
    if (seg.l1 <= std::max(0.1 * cfg.rel_tol * std::abs(value), floor)) break;
    if (nodes > cfg.max_nodes) {
      std::ostringstream os;
      os << "contour tail " << seg.l1 << " above tolerance at Im s = " << height << " after "
         << nodes << " nodes";
      throw ConvergenceError(os.str());
    }
  }
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * l1;
  if (!converged && error > std::max(cfg.rel_tol * std::abs(value), floor)) {
    std::ostringstream os;
    os << "contour quadrature error " << error << " above tolerance for value " << value;
    throw ConvergenceError(os.str());
  }
  LineIntegral out;
  out.value = value / std::numbers::pi;
  out.error = error / std::numbers::pi;
  out.l1 = l1 / std::numbers::pi;
  out.nodes = nodes;
  out.abscissa = c;
  out.height = height;
  return out;
}

LineIntegral foxh_detailed(const FoxHSpec& spec, double z, const QuadratureConfig& cfg,
                           std::optional<double> abscissa) {
  if (!(z > 0.0) || !std::isfinite(z)) throw ParameterError("foxh: argument must be positive");
  const FoxHConvergence conv = foxh_convergence(spec);
  if (conv.a_star < -1e-12) {
    std::ostringstream os;
    os << "H-function outside its convergence sector (a* = " << conv.a_star << ")";
    throw ContourError(os.str());
  }
  const ContourStrip strip = legal_strip(spec, cfg.pole_margin);
  const double c = abscissa ? *abscissa : choose_contour(spec, z, cfg);
  if (!(c > strip.lo) || !(c < strip.hi))
    throw ContourError("requested abscissa lies outside the legal strip");
  const double logz = std::log(z);
  auto g = [&](cplx s) { return std::exp(foxh_log_kernel(spec, s) - s * logz); };
  LineIntegral out = integrate_vertical(g, c, cfg);
  out.value *= 1.0 + foxh_perturbation();
  return out;
}

namespace {
std::atomic<double> g_perturbation{0.0};
}

void set_foxh_perturbation(double rel) { g_perturbation.store(rel); }
double foxh_perturbation() { return g_perturbation.load(); }

double foxh(const FoxHSpec& spec, double z, const QuadratureConfig& cfg) {
  return foxh_detailed(spec, z, cfg).value;
}

double meijerg(const FoxHSpec& spec, double z, const QuadratureConfig& cfg) {
  for (auto* list : {&spec.upper_left, &spec.upper_right, &spec.lower_left, &spec.lower_right})
    for (const auto& g : *list)
      if (g.B != 1.0) throw ParameterError("meijerg: all slopes must equal 1");
  return foxh(spec, z, cfg);
}

double leading_residues(const std::function<cplx(cplx)>& g, std::vector<double> first_poles,
                        const std::vector<double>& all_poles) {
  std::sort(first_poles.begin(), first_poles.end(), std::greater<>());
  constexpr double kGroup = 1e-3;
  constexpr int kNodes = 128;
  double total = 0.0;
  std::size_t i = 0;
  while (i < first_poles.size()) {
    std::size_t j = i + 1;
    while (j < first_poles.size() && first_poles[j - 1] - first_poles[j] < kGroup) ++j;
    const double top = first_poles[i], bottom = first_poles[j - 1];
    const double center = 0.5 * (top + bottom);
    const double spread = 0.5 * (top - bottom);
    double gap = kInf;
    for (double p : all_poles) {
      const double d = std::abs(p - center);
      if (d > spread + kGroup) gap = std::min(gap, d);
    }
    const double radius = std::min(0.25, spread + 0.45 * (gap - spread));
    cplx acc = 0.0;
    for (int k = 0; k < kNodes; ++k) {
      const double theta = 2.0 * std::numbers::pi * (k + 0.5) / kNodes;
      const cplx e = std::polar(1.0, theta);
      acc += g(center + radius * e) * e;
    }
    total += (acc * radius / static_cast<double>(kNodes)).real();
    i = j;
  }
  return total;
}

double foxh_leading_residues(const FoxHSpec& spec, double z) {
  std::vector<double> first, all;
  double leftmost = kInf;
  for (const auto& f : spec.lower_left) {
    first.push_back(-f.b / f.B);
    leftmost = std::min(leftmost, -f.b / f.B);
  }
  for (const auto& f : spec.lower_left)
    for (int k = 0;; ++k) {
      const double p = -(f.b + k) / f.B;
      if (p < leftmost - 2.0) break;
      all.push_back(p);
    }
  const double logz = std::log(z);
  auto g = [&](cplx s) { return std::exp(foxh_log_kernel(spec, s) - s * logz); };
  return leading_residues(g, first, all);
}

}  // namespace uwoc
