#include "uwoc/malaga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "uwoc/errors.hpp"

namespace uwoc {

double MalagaShape::g() const { return 2.0 * b0 * (1.0 - rho); }

double MalagaShape::Omega_prime() const {
  return Omega + 2.0 * b0 * rho + 2.0 * std::sqrt(2.0 * b0 * Omega * rho) * std::cos(phase);
}

void compute_malaga_constants(MalagaFogParams& p) {
  const double a = p.alphaM, g = p.gM, W = p.OmegaM;
  const int B = p.betaM;
  if (!(a > 0.0) || B < 1 || !(g > 0.0) || !(W > 0.0))
    throw ParameterError("malaga: alphaM, gM, OmegaM must be > 0 and betaM >= 1");
  const double gbw = g * B + W;
  p.Amg = std::exp(std::log(2.0) + 0.5 * a * std::log(a) - (1.0 + 0.5 * a) * std::log(g) -
                   std::lgamma(a) + (B + 0.5 * a) * std::log(g * B / gbw));
  const double c = a * B / gbw;
  p.b_m.assign(B, 0.0);
  for (int k = 1; k <= B; ++k) {
    // a_k = C(B-1, k-1) gbw^{1-k/2} (W/g)^{k-1} (a/B)^{k/2} / (k-1)!
    const double log_binom = std::lgamma(B) - std::lgamma(k) - std::lgamma(B - k + 1.0);
    const double log_ak = log_binom + (1.0 - 0.5 * k) * std::log(gbw) +
                          (k - 1.0) * std::log(W / g) + 0.5 * k * std::log(a / B) -
                          std::lgamma(k);
    p.b_m[k - 1] = std::exp(log_ak - 0.5 * (a + k) * std::log(c));
  }
}

MalagaFogParams make_malaga_fog(double alphaM, double betaM, double k_fog, double z_fog,
                                double rho2_T, double A_T, const MalagaShape& shape) {
  MalagaFogParams p;
  p.alphaM = alphaM;
  p.betaM = std::max(1, static_cast<int>(std::lround(betaM)));
  p.gM = shape.g();
  p.OmegaM = shape.Omega_prime();
  p.k_fog = k_fog;
  p.z_fog = z_fog;
  p.rho2_T = rho2_T;
  p.A_T = A_T;
  compute_malaga_constants(p);
  return p;
}

double fog_rate(double beta_f_db_per_km, double length_m) {
  if (!(beta_f_db_per_km > 0.0) || !(length_m > 0.0))
    throw ParameterError("fog attenuation and hop length must be > 0");
  return 4.343 / (beta_f_db_per_km * length_m * 1e-3);
}

void validate_malaga(const MalagaFogParams& p) {
  auto bad = [](const char* f, const char* rule) {
    throw ParameterError(std::string("towc.") + f + " must be " + rule);
  };
  if (!(p.alphaM > 0.0)) bad("alphaM", "> 0");
  if (p.betaM < 1) bad("betaM", "an integer >= 1");
  if (!(p.gM > 0.0)) bad("gM", "> 0");
  if (!(p.OmegaM >= 0.0)) bad("OmegaM", ">= 0");
  if (!(p.Amg > 0.0)) bad("Amg", "> 0");
  if (static_cast<int>(p.b_m.size()) != p.betaM) bad("b_m", "of length betaM");
  for (double b : p.b_m)
    if (!(b > 0.0)) bad("b_m", "positive");
  if (!(p.k_fog > 0.0)) bad("k_fog", "> 0");
  if (!(p.z_fog > 0.0)) bad("z_fog", "> 0");
  if (!(p.rho2_T > 0.0)) bad("rho2_T", "> 0");
  if (!(p.A_T > 0.0 && p.A_T <= 1.0)) bad("A_T", "in (0, 1]");
}

double malaga_scale(const MalagaFogParams& p) {
  return p.alphaM * p.betaM / (p.gM * p.betaM + p.OmegaM);
}

double malaga_pdf(const MalagaFogParams& p, double I) {
  if (!(I > 0.0)) return 0.0;
  const double c = malaga_scale(p);
  const double arg = 2.0 * std::sqrt(c * I);
  double acc = 0.0;
  for (int m = 1; m <= p.betaM; ++m) {
    const double k = std::cyl_bessel_k(std::abs(p.alphaM - m), arg);
    if (k == 0.0) continue;
    // b_m c^{(alpha+m)/2} I^{(alpha+m)/2-1} = b_m (cI)^{(alpha+m)/2} / I
    acc += p.b_m[m - 1] * std::exp(0.5 * (p.alphaM + m) * std::log(c * I)) * k;
  }
  return p.Amg * acc / I;
}

cplx malaga_log_mellin(const MalagaFogParams& p, cplx s) {
  const double c = malaga_scale(p);
  const cplx common = std::log(0.5 * p.Amg) - s * std::log(c) + log_gamma_complex(p.alphaM + s);
  cplx sum = 0.0;
  cplx ref = 0.0;
  bool first = true;
  for (int m = 1; m <= p.betaM; ++m) {
    const cplx t = std::log(p.b_m[m - 1]) + log_gamma_complex(static_cast<double>(m) + s);
    if (first) {
      ref = t;
      first = false;
    }
    sum += std::exp(t - ref);
  }
  return common + ref + std::log(sum);
}

MalagaSampler::MalagaSampler(const MalagaFogParams& p) {
  validate_malaga(p);
  constexpr std::size_t kNodes = std::size_t{1} << 16;
  const double c = malaga_scale(p);
  // Density ~ I^{min(alpha,1)-1} at the origin and ~ exp(-2 sqrt(cI)) far out.
  const double lo = std::log(1e-16 / c), hi = std::log(2500.0 / c);
  const double h = (hi - lo) / (kNodes - 1);
  logx_.resize(kNodes);
  cdf_.resize(kNodes);
  double prev = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < kNodes; ++i) {
    const double u = lo + h * i;
    const double x = std::exp(u);
    const double v = malaga_pdf(p, x) * x;
    if (i > 0) acc += 0.5 * h * (prev + v);
    logx_[i] = u;
    cdf_[i] = acc;
    prev = v;
  }
  // Mass below the first node, from the leading power law.
  const double head = cdf_.size() > 1 ? malaga_pdf(p, std::exp(lo)) * std::exp(lo) /
                                            std::min(p.alphaM, 1.0)
                                      : 0.0;
  for (double& v : cdf_) v += head;
  mass_ = cdf_.back();
  if (std::abs(mass_ - 1.0) > 1e-6) {
    std::ostringstream os;
    os << "Malaga density table integrates to " << mass_ << ", not 1";
    throw ConvergenceError(os.str());
  }
  for (double& v : cdf_) v /= mass_;
}

double MalagaSampler::operator()(Rng& rng) const {
  const double u = rng.uniform();
  if (u <= cdf_.front()) return std::exp(logx_.front());
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) return std::exp(logx_.back());
  const std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
  const double w = (u - cdf_[i - 1]) / (cdf_[i] - cdf_[i - 1]);
  return std::exp(logx_[i - 1] + w * (logx_[i] - logx_[i - 1]));
}

}  // namespace uwoc
