#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "uwoc/rng.hpp"
#include "uwoc/special_fn.hpp"

namespace uwoc {

/// Generalized Gamma: f(x) = p x^{d-1} exp(-(x/a)^p) / (a^d Gamma(d/p)).
struct GGParams {
  double a = 1.0;
  double d = 1.0;
  double p = 1.0;
  bool operator==(const GGParams&) const = default;
};

/// Mixture of Exponential(mean lambda) with weight omega and a GG branch.
struct EGGParams {
  double omega = 0.5;
  double lambda = 1.0;
  double a = 1.0;
  double d = 1.0;
  double p = 1.0;
  bool operator==(const EGGParams&) const = default;
};

/// Exponentiated Weibull: F(x) = (1 - exp(-(x/eta)^beta))^alpha.
struct EWParams {
  double alpha = 1.0;
  double beta = 1.0;
  double eta = 1.0;
  bool operator==(const EWParams&) const = default;
};

/// Unit-mean product of Gamma(alpha, 1/alpha) and Gamma(beta, 1/beta).
struct GammaGammaParams {
  double alpha = 1.0;
  double beta = 1.0;
  bool operator==(const GammaGammaParams&) const = default;
};

using LayerModel = std::variant<GGParams, EGGParams, EWParams, GammaGammaParams>;

std::string family_name(const LayerModel& model);

/// Throws ParameterError naming the offending field.
void validate_layer(const LayerModel& model);

/// Zero-boresight pointing loss: f(h) = rho2 h^{rho2-1} / A0^{rho2} on (0, A0].
struct PointingError {
  double rho2 = 1.0;
  double A0 = 1.0;
  bool operator==(const PointingError&) const = default;
};

void validate_pointing(const PointingError& pe);

/// Deterministic attenuation exp(-alpha_ext * length).
struct PathGain {
  double alpha_ext = 0.0;
  double length = 0.0;
  double gain() const;
};

double pdf_layer(const LayerModel& model, double x);
double cdf_layer(const LayerModel& model, double x);

/// E[h^n]. EW sums the binomial series until a power-law tail estimate drops
/// below 1e-12 of the running sum; throws ConvergenceError past 10^7 terms.
double moment_layer(const LayerModel& model, double n);

/// log E[h^s] for complex s right of the first pole. Exact for every family:
/// EW uses alpha Gamma(1 + s/beta) times its binomial Dirichlet series, whose
/// remainder is summed in closed form; this continues past the first pole and
/// decays like a Gamma function along vertical lines.
class LayerMellin {
 public:
  explicit LayerMellin(const LayerModel& model);
  cplx operator()(cplx s) const;
  /// Rightmost pole of E[h^s] (the density behaves like x^{-pole-1} near 0).
  double first_pole() const { return first_pole_; }
  /// Every pole of E[h^s] in [first_pole - span, first_pole].
  std::vector<double> poles(double span) const;

 private:
  LayerModel model_;
  double first_pole_ = 0.0;
  std::vector<double> ew_coef_;  // EW binomial coefficients c_j
  std::vector<double> ew_logn_;  // log(j + 1)
  std::vector<double> ew_asym_;  // large-j expansion of c_j
  double ew_rgamma_ = 0.0;       // 1 / Gamma(1 - alpha)
};

/// Closed-form inverse of the EW distribution function.
double ew_quantile(const EWParams& m, double u);

double sample_layer(const LayerModel& model, Rng& rng);
double sample_pointing(const PointingError& pe, Rng& rng);
/// exp(-t) with t ~ Gamma(shape k, rate z).
double sample_fog_gain(double k, double z, Rng& rng);

/// One expansion term: coefficient * E^{-s} * prod Gamma(b + B s) is its
/// Mellin transform E[h^s] contribution.
struct UnifiedTerm {
  double coefficient = 1.0;
  std::vector<GammaFactor> D;
  double E = 1.0;
  int m = 0;
  int q = 0;
};

struct UnifiedExpansion {
  std::vector<UnifiedTerm> terms;
  double truncation_error_bound = 0.0;  // bound on the neglected probability mass
};

inline constexpr int kDefaultEwTrunc = 60;
inline constexpr int kMaxEwTrunc = 200;
inline constexpr std::size_t kDefaultExpansionCap = 4096;

/// Per-layer branch lists multiplied out over all layers. Throws
/// ParameterError when the term count would exceed `cap`.
UnifiedExpansion unified_expansion(const std::vector<LayerModel>& layers,
                                   int ew_trunc = kDefaultEwTrunc,
                                   std::size_t cap = kDefaultExpansionCap);

/// Branch list of a single layer (the N = 1 expansion) and its tail bound.
UnifiedExpansion layer_terms(const LayerModel& model, int ew_trunc = kDefaultEwTrunc);

/// Number of product terms without building them.
double expansion_size(const std::vector<LayerModel>& layers, int ew_trunc = kDefaultEwTrunc);

}  // namespace uwoc
