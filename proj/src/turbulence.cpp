#include "uwoc/turbulence.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "uwoc/errors.hpp"
#include "uwoc/quadrature.hpp"

namespace uwoc {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& family, const std::string& field, const char* rule) {
  if (!ok) throw ParameterError(family + "." + field + " must be " + rule);
}

double gg_pdf(double a, double d, double p, double x) {
  const double lx = std::log(x / a);
  return p / a * std::exp((d - 1.0) * lx - std::exp(p * lx) - std::lgamma(d / p));
}

double gg_cdf(double a, double d, double p, double x) {
  return boost::math::gamma_p(d / p, std::pow(x / a, p));
}

// log(exp(x) + exp(y)) for complex x, y.
cplx log_add(cplx x, cplx y) {
  if (x.real() < y.real()) std::swap(x, y);
  if (!std::isfinite(y.real()) && y.real() < 0) return x;
  return x + std::log(1.0 + std::exp(y - x));
}

// Expansion Gamma(n - alpha) / Gamma(n) = n^{-alpha} sum_k e_k n^{-k} from the
// Stirling series, as power series in u = 1/n.
std::vector<double> gamma_ratio_expansion(double alpha, int order) {
  const int n = order + 1;
  std::vector<double> P(n, 0.0);
  // (1/u - alpha - 1/2) log(1 - alpha u) + alpha
  for (int k = 1; k <= n; ++k) {
    const double c = -std::pow(alpha, k) / k;  // coefficient of u^k in log(1 - alpha u)
    if (k - 1 < n) P[k - 1] += c;
    if (k < n) P[k] += -(alpha + 0.5) * c;
  }
  P[0] += alpha;
  static const double kB2k[] = {1.0 / 6,   -1.0 / 30,   1.0 / 42,   -1.0 / 30,
                                5.0 / 66,  -691.0 / 2730, 7.0 / 6, -3617.0 / 510};
  for (int k = 1; k <= 8 && 2 * k < n; ++k) {
    const double w = kB2k[k - 1] / (2.0 * k * (2.0 * k - 1.0));
    // u^{2k-1} ((1 - alpha u)^{1-2k} - 1)
    double binom = 1.0;
    for (int m = 1; 2 * k - 1 + m < n; ++m) {
      binom *= (2.0 * k - 2.0 + m) / m;
      P[2 * k - 1 + m] += w * binom * std::pow(alpha, m);
    }
  }
  std::vector<double> e(n, 0.0);
  e[0] = std::exp(P[0]);
  for (int k = 1; k < n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * P[j] * e[k - j];
    e[k] = acc / k;
  }
  return e;
}

// sum_{n >= N} n^{-sigma} by Euler-Maclaurin; analytic in sigma except at 1.
cplx hurwitz_tail(cplx sigma, double N, double logN) {
  static const double kB2kFact[] = {1.0 / 12,         -1.0 / 720,         1.0 / 30240,
                                    -1.0 / 1209600,   1.0 / 47900160,     -691.0 / 1307674368000.0,
                                    1.0 / 74724249600.0, -3617.0 / 10670622842880000.0};
  const cplx Ns = std::exp(-sigma * logN);
  cplx acc = Ns * N / (sigma - 1.0) + 0.5 * Ns;
  cplx rising = sigma;  // (sigma)_{2k-1}
  cplx pw = Ns / N;     // N^{-sigma-2k+1}
  for (int k = 1; k <= 8; ++k) {
    acc += kB2kFact[k - 1] * rising * pw;
    rising *= (sigma + (2.0 * k - 1.0)) * (sigma + 2.0 * k);
    pw /= N * N;
  }
  return acc;
}

constexpr int kEwOrder = 14;
constexpr int kEwMaxDirect = 2048;

}  // namespace

std::string family_name(const LayerModel& model) {
  return std::visit(overloaded{[](const GGParams&) { return std::string("GG"); },
                               [](const EGGParams&) { return std::string("EGG"); },
                               [](const EWParams&) { return std::string("EW"); },
                               [](const GammaGammaParams&) { return std::string("GammaGamma"); }},
                    model);
}

void validate_layer(const LayerModel& model) {
  auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  std::visit(overloaded{[&](const GGParams& m) {
                          require(pos(m.a), "GG", "a", "> 0");
                          require(pos(m.d), "GG", "d", "> 0");
                          require(pos(m.p), "GG", "p", "> 0");
                        },
                        [&](const EGGParams& m) {
                          require(m.omega >= 0.0 && m.omega <= 1.0, "EGG", "omega", "in [0, 1]");
                          require(pos(m.lambda), "EGG", "lambda", "> 0");
                          require(pos(m.a), "EGG", "a", "> 0");
                          require(pos(m.d), "EGG", "d", "> 0");
                          require(pos(m.p), "EGG", "p", "> 0");
                        },
                        [&](const EWParams& m) {
                          require(pos(m.alpha), "EW", "alpha", "> 0");
                          require(pos(m.beta), "EW", "beta", "> 0");
                          require(pos(m.eta), "EW", "eta", "> 0");
                        },
                        [&](const GammaGammaParams& m) {
                          require(pos(m.alpha), "GammaGamma", "alpha", "> 0");
                          require(pos(m.beta), "GammaGamma", "beta", "> 0");
                        }},
             model);
}

void validate_pointing(const PointingError& pe) {
  require(std::isfinite(pe.rho2) && pe.rho2 > 0.0, "pointing", "rho2", "> 0");
  require(pe.A0 > 0.0 && pe.A0 <= 1.0, "pointing", "A0", "in (0, 1]");
}

double PathGain::gain() const {
  if (!(alpha_ext >= 0.0) || !(length >= 0.0))
    throw ParameterError("path.alpha_ext and path.length must be >= 0");
  return std::exp(-alpha_ext * length);
}

double pdf_layer(const LayerModel& model, double x) {
  if (!(x > 0.0)) return 0.0;
  return std::visit(
      overloaded{[&](const GGParams& m) { return gg_pdf(m.a, m.d, m.p, x); },
                 [&](const EGGParams& m) {
                   return m.omega / m.lambda * std::exp(-x / m.lambda) +
                          (1.0 - m.omega) * gg_pdf(m.a, m.d, m.p, x);
                 },
                 [&](const EWParams& m) {
                   const double u = std::pow(x / m.eta, m.beta);
                   return m.alpha * m.beta / x * u * std::exp(-u) *
                          std::pow(-std::expm1(-u), m.alpha - 1.0);
                 },
                 [&](const GammaGammaParams& m) {
                   const double ab = m.alpha * m.beta;
                   const double arg = 2.0 * std::sqrt(ab * x);
                   const double k = std::cyl_bessel_k(std::abs(m.alpha - m.beta), arg);
                   if (k == 0.0) return 0.0;
                   return 2.0 *
                          std::exp(0.5 * (m.alpha + m.beta) * std::log(ab * x) -
                                   std::lgamma(m.alpha) - std::lgamma(m.beta)) /
                          x * k;
                 }},
      model);
}

double cdf_layer(const LayerModel& model, double x) {
  if (!(x > 0.0)) return 0.0;
  return std::visit(
      overloaded{[&](const GGParams& m) { return gg_cdf(m.a, m.d, m.p, x); },
                 [&](const EGGParams& m) {
                   return m.omega * -std::expm1(-x / m.lambda) +
                          (1.0 - m.omega) * gg_cdf(m.a, m.d, m.p, x);
                 },
                 [&](const EWParams& m) {
                   return std::pow(-std::expm1(-std::pow(x / m.eta, m.beta)), m.alpha);
                 },
                 [&](const GammaGammaParams& m) {
                   const LayerModel self = m;
                   auto f = [&](double u) {
                     const double t = std::exp(u);
                     return pdf_layer(self, t) * t;
                   };
                   quad::Options opt;
                   opt.rel_tol = 1e-12;
                   const double lo = std::log(x) - 60.0 / std::min(m.alpha, m.beta);
                   return std::min(1.0, quad::gauss_kronrod(f, lo, std::log(x), opt).value);
                 }},
      model);
}

double moment_layer(const LayerModel& model, double n) {
  if (!(n >= 0.0)) throw ParameterError("moment order must be >= 0");
  if (n == 0.0) return 1.0;
  return std::visit(
      overloaded{
          [&](const GGParams& m) {
            return std::exp(n * std::log(m.a) + std::lgamma((n + m.d) / m.p) -
                            std::lgamma(m.d / m.p));
          },
          [&](const EGGParams& m) {
            return m.omega * std::exp(n * std::log(m.lambda) + std::lgamma(1.0 + n)) +
                   (1.0 - m.omega) * std::exp(n * std::log(m.a) + std::lgamma((n + m.d) / m.p) -
                                              std::lgamma(m.d / m.p));
          },
          [&](const EWParams& m) {
            // alpha Gamma(1 + n/beta) eta^n sum_j binom(alpha-1, j) (-1)^j (j+1)^{-1-n/beta}
            const double expo = 1.0 + n / m.beta;
            const double p = m.alpha + expo;  // terms decay like j^{-p}
            double b = 1.0, sum = 0.0;
            constexpr long kMaxTerms = 10'000'000;
            long j = 0;
            for (; j < kMaxTerms; ++j) {
              const double t = b * std::pow(j + 1.0, -expo);
              sum += t;
              if (t == 0.0 && b == 0.0) break;
              if (j > m.alpha + 2.0 && std::abs(t) * (j + 1.0) / (p - 1.0) < 1e-13 * std::abs(sum))
                break;
              b *= (j + 1.0 - m.alpha) / (j + 1.0);
            }
            if (j == kMaxTerms) throw ConvergenceError("EW moment series did not converge");
            return m.alpha * std::exp(std::lgamma(expo) + n * std::log(m.eta)) * sum;
          },
          [&](const GammaGammaParams& m) {
            return std::exp(std::lgamma(m.alpha + n) + std::lgamma(m.beta + n) -
                            std::lgamma(m.alpha) - std::lgamma(m.beta) -
                            n * std::log(m.alpha * m.beta));
          }},
      model);
}

LayerMellin::LayerMellin(const LayerModel& model) : model_(model) {
  validate_layer(model);
  std::visit(overloaded{[&](const GGParams& m) { first_pole_ = -m.d; },
                        [&](const EGGParams& m) {
                          first_pole_ = -std::numeric_limits<double>::infinity();
                          if (m.omega > 0.0) first_pole_ = -1.0;
                          if (m.omega < 1.0) first_pole_ = std::max(first_pole_, -m.d);
                        },
                        [&](const EWParams& m) {
                          first_pole_ = -m.alpha * m.beta;
                          // c_j = binom(alpha-1, j) (-1)^j
                          double b = 1.0;
                          for (int j = 0; j < kEwMaxDirect; ++j) {
                            ew_coef_.push_back(b);
                            ew_logn_.push_back(std::log(j + 1.0));
                            b *= (j + 1.0 - m.alpha) / (j + 1.0);
                          }
                          ew_asym_ = gamma_ratio_expansion(m.alpha, kEwOrder);
                          // 1 / Gamma(1 - alpha), zero for integer alpha.
                          ew_rgamma_ = m.alpha == std::round(m.alpha)
                                           ? 0.0
                                           : std::tgamma(m.alpha) *
                                                 std::sin(std::numbers::pi * m.alpha) /
                                                 std::numbers::pi;
                        },
                        [&](const GammaGammaParams& m) {
                          first_pole_ = -std::min(m.alpha, m.beta);
                        }},
             model);
}

cplx LayerMellin::operator()(cplx s) const {
  return std::visit(
      overloaded{
          [&](const GGParams& m) {
            return s * std::log(m.a) + log_gamma_complex((m.d + s) / m.p) - std::lgamma(m.d / m.p);
          },
          [&](const EGGParams& m) {
            const double inf = std::numeric_limits<double>::infinity();
            cplx e = -inf, g = -inf;
            if (m.omega > 0.0)
              e = std::log(m.omega) + s * std::log(m.lambda) + log_gamma_complex(1.0 + s);
            if (m.omega < 1.0)
              g = std::log1p(-m.omega) + s * std::log(m.a) + log_gamma_complex((m.d + s) / m.p) -
                  std::lgamma(m.d / m.p);
            return log_add(e, g);
          },
          [&](const EWParams& m) {
            // E[h^s] = alpha eta^s Gamma(1 + w) sum_j c_j (j+1)^{-1-w}, w = s/beta.
            // Direct sum to N - 1, then the asymptotic form of c_j turns the
            // remainder into Hurwitz tails, which also continue the sum past
            // its abscissa of convergence.
            const cplx w = s / m.beta;
            const cplx sigma = 1.0 + w;
            const int N = static_cast<int>(std::min<double>(
                kEwMaxDirect, 32.0 + std::ceil(0.5 * std::abs(sigma + m.alpha))));
            cplx sum = 0.0;
            for (int n = 1; n < N; ++n)
              sum += ew_coef_[n - 1] * std::exp(-sigma * ew_logn_[n - 1]);
            if (ew_rgamma_ != 0.0) {
              const double logN = std::log(static_cast<double>(N));
              cplx tail = 0.0;
              for (std::size_t k = 0; k < ew_asym_.size(); ++k)
                tail += ew_asym_[k] * hurwitz_tail(sigma + m.alpha + static_cast<double>(k),
                                                   static_cast<double>(N), logN);
              sum += ew_rgamma_ * tail;
            }
            return std::log(m.alpha) + s * std::log(m.eta) + log_gamma_complex(sigma) +
                   std::log(sum);
          },
          [&](const GammaGammaParams& m) {
            return log_gamma_complex(m.alpha + s) + log_gamma_complex(m.beta + s) -
                   std::lgamma(m.alpha) - std::lgamma(m.beta) - s * std::log(m.alpha * m.beta);
          }},
      model_);
}

std::vector<double> LayerMellin::poles(double span) const {
  std::vector<double> out;
  auto seq = [&](double first, double step) {
    for (double p = first; p >= first_pole_ - span; p -= step) out.push_back(p);
  };
  std::visit(overloaded{[&](const GGParams& m) { seq(-m.d, m.p); },
                        [&](const EGGParams& m) {
                          if (m.omega > 0.0) seq(-1.0, 1.0);
                          if (m.omega < 1.0) seq(-m.d, m.p);
                        },
                        [&](const EWParams& m) { seq(-m.alpha * m.beta, m.beta); },
                        [&](const GammaGammaParams& m) {
                          seq(-m.alpha, 1.0);
                          seq(-m.beta, 1.0);
                        }},
             model_);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double ew_quantile(const EWParams& m, double u) {
  return m.eta * std::pow(-std::log1p(-std::pow(u, 1.0 / m.alpha)), 1.0 / m.beta);
}

double sample_layer(const LayerModel& model, Rng& rng) {
  return std::visit(
      overloaded{[&](const GGParams& m) { return m.a * std::pow(rng.gamma(m.d / m.p), 1.0 / m.p); },
                 [&](const EGGParams& m) {
                   if (rng.uniform() < m.omega) return -m.lambda * std::log(rng.uniform());
                   return m.a * std::pow(rng.gamma(m.d / m.p), 1.0 / m.p);
                 },
                 [&](const EWParams& m) { return ew_quantile(m, rng.uniform()); },
                 [&](const GammaGammaParams& m) {
                   return rng.gamma(m.alpha) / m.alpha * (rng.gamma(m.beta) / m.beta);
                 }},
      model);
}

double sample_pointing(const PointingError& pe, Rng& rng) {
  return pe.A0 * std::pow(rng.uniform(), 1.0 / pe.rho2);
}

double sample_fog_gain(double k, double z, Rng& rng) { return std::exp(-rng.gamma(k) / z); }

UnifiedExpansion layer_terms(const LayerModel& model, int ew_trunc) {
  validate_layer(model);
  UnifiedExpansion out;
  std::visit(
      overloaded{
          [&](const GGParams& m) {
            out.terms.push_back(
                {1.0 / std::tgamma(m.d / m.p), {{m.d / m.p, 1.0 / m.p}}, 1.0 / m.a, 1, 1});
          },
          [&](const EGGParams& m) {
            out.terms.push_back({m.omega, {{1.0, 1.0}}, 1.0 / m.lambda, 1, 1});
            out.terms.push_back({(1.0 - m.omega) / std::tgamma(m.d / m.p),
                                 {{m.d / m.p, 1.0 / m.p}},
                                 1.0 / m.a,
                                 1,
                                 1});
          },
          [&](const EWParams& m) {
            if (ew_trunc < 1 || ew_trunc > kMaxEwTrunc) {
              std::ostringstream os;
              os << "ew_trunc must be in [1, " << kMaxEwTrunc << "]";
              throw ParameterError(os.str());
            }
            // C_j = alpha binom(alpha-1, j) (-1)^j / (j+1), E_j = (j+1)^{1/beta} / eta.
            double b = 1.0;
            long j = 0;
            for (; j < ew_trunc; ++j) {
              out.terms.push_back({m.alpha * b / (j + 1.0),
                                   {{1.0, 1.0 / m.beta}},
                                   std::pow(j + 1.0, 1.0 / m.beta) / m.eta,
                                   1,
                                   1});
              b *= (j + 1.0 - m.alpha) / (j + 1.0);
            }
            // Neglected mass: |C_j| ~ j^{-alpha-1}; sum far out, then the
            // power-law remainder.
            double tail = 0.0, last = 0.0;
            for (; j < 200000 && b != 0.0; ++j) {
              last = std::abs(m.alpha * b / (j + 1.0));
              tail += last;
              b *= (j + 1.0 - m.alpha) / (j + 1.0);
            }
            if (b != 0.0) tail += last * j / m.alpha;
            out.truncation_error_bound = tail;
          },
          [&](const GammaGammaParams& m) {
            out.terms.push_back({1.0 / (std::tgamma(m.alpha) * std::tgamma(m.beta)),
                                 {{m.alpha, 1.0}, {m.beta, 1.0}},
                                 m.alpha * m.beta,
                                 2,
                                 2});
          }},
      model);
  return out;
}

double expansion_size(const std::vector<LayerModel>& layers, int ew_trunc) {
  double n = 1.0;
  for (const auto& l : layers)
    n *= std::visit(overloaded{[](const GGParams&) { return 1.0; },
                               [](const EGGParams&) { return 2.0; },
                               [&](const EWParams&) { return static_cast<double>(ew_trunc); },
                               [](const GammaGammaParams&) { return 1.0; }},
                    l);
  return n;
}

UnifiedExpansion unified_expansion(const std::vector<LayerModel>& layers, int ew_trunc,
                                   std::size_t cap) {
  if (layers.empty()) throw ParameterError("stack needs at least one layer");
  const double size = expansion_size(layers, ew_trunc);
  if (size > static_cast<double>(cap)) {
    std::ostringstream os;
    os << "unified expansion would have " << size << " terms (cap " << cap << ")";
    throw ParameterError(os.str());
  }
  UnifiedExpansion acc;
  acc.terms.push_back({1.0, {}, 1.0, 0, 0});
  double kept_all = 1.0, total_all = 1.0;
  for (const auto& layer : layers) {
    const UnifiedExpansion lt = layer_terms(layer, ew_trunc);
    double kept = 0.0;
    for (const auto& t : lt.terms) {
      double mass = t.coefficient;
      for (const auto& f : t.D) mass *= std::tgamma(f.b);
      kept += std::abs(mass);
    }
    kept_all *= kept;
    total_all *= kept + lt.truncation_error_bound;
    std::vector<UnifiedTerm> next;
    next.reserve(acc.terms.size() * lt.terms.size());
    for (const auto& a : acc.terms)
      for (const auto& b : lt.terms) {
        UnifiedTerm t = a;
        t.coefficient *= b.coefficient;
        t.D.insert(t.D.end(), b.D.begin(), b.D.end());
        t.E *= b.E;
        t.m += b.m;
        t.q += b.q;
        next.push_back(std::move(t));
      }
    acc.terms = std::move(next);
  }
  acc.truncation_error_bound = total_all - kept_all;
  return acc;
}

}  // namespace uwoc
