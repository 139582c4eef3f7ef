#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>

#include "uwoc/errors.hpp"
#include "uwoc/quadrature.hpp"
#include "uwoc/special_fn.hpp"

namespace uwoc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Budget {
  std::size_t nodes = 0;
  void charge(std::size_t n) {
    nodes += n;
    if (nodes > kPlaneNodeBudget) {
      std::ostringstream os;
      os << "bivariate contour quadrature exceeded " << kPlaneNodeBudget << " nodes";
      throw ConvergenceError(os.str());
    }
  }
};

struct TrapResult {
  double value = 0.0;
  double l1 = 0.0;
};

// Trapezoid rule for an analytic integrand on the real line (or on t >= 0
// with even symmetry), halving the step until two levels agree. The rule
// converges geometrically in 1/h, so the last difference bounds the error of
// the finer level. The range is scanned out from [lo_keep, hi_keep] with the
// first step until four consecutive nodes fall below `floor`.
TrapResult trapezoid(const std::function<cplx(double)>& f, bool half_line, double lo_keep,
                     double hi_keep, double h0, double rel_tol, double abs_tol, double floor,
                     Budget& budget) {
  std::vector<double> t{0.0};
  std::vector<double> v{f(0.0).real()};
  double l1 = std::abs(v[0]);
  auto scan = [&](double dir, double keep) {
    int quiet = 0;
    for (int k = 1; k < 100000; ++k) {
      const double x = dir * h0 * k;
      const cplx y = f(x);
      t.push_back(x);
      v.push_back(y.real());
      l1 += std::abs(y);
      quiet = std::abs(y) < floor ? quiet + 1 : 0;
      if (quiet >= 4 && dir * x > dir * keep) return;
    }
    throw ConvergenceError("bivariate contour integrand does not decay");
  };
  scan(1.0, hi_keep);
  if (!half_line) scan(-1.0, lo_keep);
  budget.charge(t.size());
  const double a = *std::min_element(t.begin(), t.end());
  const double b = *std::max_element(t.begin(), t.end());
  double h = h0;
  double sum = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) sum += (half_line && t[i] == 0.0) ? 0.5 * v[i] : v[i];
  double prev = h * sum;
  for (int level = 0; level < 14; ++level) {
    // Midpoints of the current grid.
    double mids = 0.0;
    std::size_t count = 0;
    const auto n = static_cast<std::size_t>(std::llround((b - a) / h));
    for (std::size_t i = 0; i < n; ++i) {
      mids += f(a + (i + 0.5) * h).real();
      ++count;
    }
    budget.charge(count);
    sum += mids;
    h *= 0.5;
    const double cur = h * sum;
    const double diff = std::abs(cur - prev);
    prev = cur;
    if (level >= 1 && diff <= std::max({rel_tol * std::abs(cur), abs_tol,
                                        64.0 * std::numeric_limits<double>::epsilon() * l1 * h}))
      return {cur, l1 * h};
  }
  throw ConvergenceError("bivariate trapezoid rule did not settle");
}

}  // namespace

PlaneIntegral integrate_plane(const std::function<cplx(cplx, cplx)>& g, double c1, double c2,
                              const QuadratureConfig& cfg) {
  Budget budget;
  const cplx g0 = g(cplx(c1, 0.0), cplx(c2, 0.0));
  if (!std::isfinite(std::abs(g0)))
    throw ConvergenceError("bivariate integrand overflowed on the contour");
  const double scale = std::max(std::abs(g0), std::numeric_limits<double>::min());
  // Nodes below this are negligible against the peak on every line.
  const double floor = 1e-4 * cfg.rel_tol * scale;
  constexpr double kStep = 0.5;
  auto inner = [&](double t1) {
    auto f = [&](double t2) {
      const cplx v = g(cplx(c1, t1), cplx(c2, t2));
      if (std::isnan(v.real()) || std::abs(v.real()) == kInf)
        throw ConvergenceError("bivariate integrand overflowed on the contour");
      return v;
    };
    // The joint factor can carry the ridge towards t2 = t1.
    const TrapResult r = trapezoid(f, false, std::min(0.0, t1) - 2.0, std::max(0.0, t1) + 2.0,
                                   kStep, 0.25 * cfg.rel_tol, 1e-3 * cfg.rel_tol * scale, floor,
                                   budget);
    return r;
  };
  const double inner0 = std::abs(inner(0.0).value);
  // The outer scan runs on |f|; carrying the inner L1 in the imaginary part
  // keeps a line whose signed integral cancels from ending the support.
  auto outer_fn = [&](double t1) {
    const TrapResult r = inner(t1);
    return cplx(r.value, r.l1);
  };
  const TrapResult r = trapezoid(outer_fn, true, 0.0, 2.0, kStep, 0.25 * cfg.rel_tol,
                                 1e-3 * cfg.rel_tol * std::max(inner0, floor), floor, budget);
  PlaneIntegral out;
  constexpr double kNorm = 1.0 / (2.0 * std::numbers::pi * std::numbers::pi);
  out.value = r.value * kNorm;
  out.error = cfg.rel_tol * std::abs(out.value);
  out.nodes = budget.nodes;
  out.c1 = c1;
  out.c2 = c2;
  return out;
}

cplx bivariate_log_kernel(const BivariateFoxHSpec& spec, cplx s1, cplx s2) {
  cplx acc = foxh_log_kernel(spec.axis1, s1) + foxh_log_kernel(spec.axis2, s2);
  for (const auto& j : spec.joint_upper)
    acc += log_gamma_complex(j.factor.b + j.w1 * s1 + j.w2 * s2);
  for (const auto& j : spec.joint_lower) {
    const cplx arg = j.factor.b + j.w1 * s1 + j.w2 * s2;
    if (arg.imag() == 0.0 && arg.real() <= 0.0 && arg.real() == std::floor(arg.real()))
      return cplx(-kInf, 0.0);
    acc -= log_gamma_complex(arg);
  }
  return acc - s1 * std::log(spec.z1) - s2 * std::log(spec.z2);
}

namespace {

// Smallest distance (in units of the Gamma argument) from every numerator
// factor to its first pole; positive means the pair is admissible.
double admissibility(const BivariateFoxHSpec& spec, double c1, double c2) {
  double m = kInf;
  for (const auto& g : spec.axis1.lower_left) m = std::min(m, g.b + g.B * c1);
  for (const auto& g : spec.axis1.upper_left) m = std::min(m, 1.0 - g.b - g.B * c1);
  for (const auto& g : spec.axis2.lower_left) m = std::min(m, g.b + g.B * c2);
  for (const auto& g : spec.axis2.upper_left) m = std::min(m, 1.0 - g.b - g.B * c2);
  for (const auto& j : spec.joint_upper) m = std::min(m, j.factor.b + j.w1 * c1 + j.w2 * c2);
  return m;
}

}  // namespace

std::pair<double, double> choose_bivariate_contour(const BivariateFoxHSpec& spec,
                                                   const QuadratureConfig& cfg) {
  auto box = [&](const FoxHSpec& axis, double reach) {
    double lo = -kInf, hi = kInf;
    for (const auto& g : axis.lower_left) lo = std::max(lo, -g.b / g.B);
    for (const auto& g : axis.upper_left) hi = std::min(hi, (1.0 - g.b) / g.B);
    if (!std::isfinite(lo) && !std::isfinite(hi)) return std::pair{-reach, reach};
    if (!std::isfinite(lo)) lo = hi - reach;
    if (!std::isfinite(hi)) hi = lo + reach;
    return std::pair{lo, hi};
  };
  auto objective = [&](double c1, double c2) {
    if (admissibility(spec, c1, c2) < cfg.pole_margin) return kInf;
    try {
      const double v = bivariate_log_kernel(spec, c1, c2).real();
      return std::isnan(v) ? kInf : v;
    } catch (const PoleError&) {
      return kInf;
    }
  };
  constexpr int kGrid = 32;
  double best = kInf, b1 = 0.0, b2 = 0.0;
  double lo1 = 0, hi1 = 0, lo2 = 0, hi2 = 0;
  // Joint factors can confine the admissible region to a small corner of the
  // per-axis box, so the open sides shrink until the grid lands inside it.
  for (double reach : {20.0, 4.0, 1.0, 0.25}) {
    std::tie(lo1, hi1) = box(spec.axis1, reach);
    std::tie(lo2, hi2) = box(spec.axis2, reach);
    for (int i = 1; i < kGrid; ++i)
      for (int j = 1; j < kGrid; ++j) {
        const double c1 = lo1 + (hi1 - lo1) * i / kGrid;
        const double c2 = lo2 + (hi2 - lo2) * j / kGrid;
        const double v = objective(c1, c2);
        if (v < best) {
          best = v;
          b1 = c1;
          b2 = c2;
        }
      }
    if (std::isfinite(best)) break;
  }
  if (!std::isfinite(best))
    throw ContourError("no contour pair separates the bivariate pole sequences");
  double step1 = (hi1 - lo1) / kGrid, step2 = (hi2 - lo2) / kGrid;
  for (int round = 0; round < 6; ++round) {
    b1 = minimise_on_interval([&](double c) { return objective(c, b2); }, b1 - step1,
                              b1 + step1, 16);
    b2 = minimise_on_interval([&](double c) { return objective(b1, c); }, b2 - step2,
                              b2 + step2, 16);
    step1 *= 0.5;
    step2 *= 0.5;
  }
  if (!std::isfinite(objective(b1, b2)))
    throw ContourError("bivariate contour search left the admissible region");
  return {b1, b2};
}

PlaneIntegral bivariate_foxh_detailed(const BivariateFoxHSpec& spec, const QuadratureConfig& cfg,
                                      std::optional<std::pair<double, double>> contour) {
  if (!(spec.z1 > 0.0) || !(spec.z2 > 0.0))
    throw ParameterError("bivariate H: arguments must be positive");
  const auto [c1, c2] = contour ? *contour : choose_bivariate_contour(spec, cfg);
  if (!contour && admissibility(spec, c1, c2) < cfg.pole_margin)
    throw ContourError("bivariate contour inadmissible");
  // The s1-axis kernel is constant along each inner integral; keep the last one.
  cplx last_s1(kInf, 0.0), last_axis1;
  const double lz1 = std::log(spec.z1), lz2 = std::log(spec.z2);
  auto g = [&](cplx s1, cplx s2) {
    if (s1 != last_s1) {
      last_axis1 = foxh_log_kernel(spec.axis1, s1) - s1 * lz1;
      last_s1 = s1;
    }
    cplx acc = last_axis1 + foxh_log_kernel(spec.axis2, s2) - s2 * lz2;
    for (const auto& j : spec.joint_upper) acc += log_gamma_complex(j.factor.b + j.w1 * s1 + j.w2 * s2);
    for (const auto& j : spec.joint_lower) {
      const cplx arg = j.factor.b + j.w1 * s1 + j.w2 * s2;
      if (arg.imag() == 0.0 && arg.real() <= 0.0 && arg.real() == std::floor(arg.real()))
        return cplx(0.0);
      acc -= log_gamma_complex(arg);
    }
    return std::exp(acc);
  };
  PlaneIntegral out = integrate_plane(g, c1, c2, cfg);
  out.value *= 1.0 + foxh_perturbation();
  return out;
}

double bivariate_foxh(const BivariateFoxHSpec& spec, const QuadratureConfig& cfg) {
  return bivariate_foxh_detailed(spec, cfg).value;
}

}  // namespace uwoc
