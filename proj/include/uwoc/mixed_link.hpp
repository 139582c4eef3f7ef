#pragma once

#include <memory>

#include "uwoc/cascade.hpp"
#include "uwoc/malaga.hpp"
#include "uwoc/metrics.hpp"

namespace uwoc {

/// Fixed-gain AF relay joining a fog + Malaga + pointing terrestrial hop to
/// the underwater stack: gamma = gamma_T gamma_U / (gamma_U + C).
struct MixedLinkConfig {
  MalagaFogParams towc;
  double towc_gamma_bar = 1.0;
  UwocStack stack;
  double uwoc_gamma_bar = 1.0;
  double C = 1.0;
  double l_T = 400.0;
};

void validate_mixed(const MixedLinkConfig& cfg);

/// How the end-to-end statistics are evaluated.
///   bivariate   - per-term bivariate Fox-H sums (fog shape rounded to an
///                 integer, as the Meijer-G form needs repeated factors)
///   factorized  - one double Mellin-Barnes integral of the exact hop
///                 transforms (real fog shape)
///   composition - one-dimensional integral of the terrestrial law against
///                 the underwater SNR density
///   automatic   - factorized, falling back to composition when the double
///                 contour exceeds its node budget
enum class MixedRoute { automatic, bivariate, factorized, composition };

struct MixedOptions {
  CascadeOptions cascade;
  MixedRoute route = MixedRoute::automatic;
  /// The analytic statistics use the fog shape rounded to an integer (with a
  /// logged warning when that changes it). Set to keep the real shape on the
  /// factorized and composition routes.
  bool exact_fog_shape = false;
};

struct MixedValue {
  double value = 0.0;
  MixedRoute route = MixedRoute::automatic;  // route that produced the value
  bool slow_path = false;                    // double contour over budget
};

/// log E[h_T^s] of the terrestrial gain h_f I h_p (real fog shape).
cplx towc_log_mellin(const MalagaFogParams& p, cplx s);
double towc_first_pole(const MalagaFogParams& p);

/// Fog shape used by the Meijer-G form (nearest integer, at least 1).
int towc_integer_k(const MalagaFogParams& p);

/// Per-Malaga-term Meijer-G kernels of the terrestrial SNR; the k fog factors
/// enter as repeated (z, 1) / (z + 1, 1) pairs. Coefficient is
/// (A/2) b_m z^k rho2_T and the argument scale is c / A_T.
struct TowcTerm {
  double coefficient;
  FoxHSpec spec;
  double scale;
};
std::vector<TowcTerm> towc_terms(const MalagaFogParams& p);

enum class TowcRoute { factorized, meijer };

double towc_snr_pdf(const MixedLinkConfig& cfg, double gamma, TowcRoute route = TowcRoute::factorized,
                    const QuadratureConfig& quad = {});
double towc_snr_cdf(const MixedLinkConfig& cfg, double gamma, TowcRoute route = TowcRoute::factorized,
                    const QuadratureConfig& quad = {});
double towc_avg_ber(const MixedLinkConfig& cfg, const ModulationScheme& mod = {},
                    TowcRoute route = TowcRoute::factorized, const QuadratureConfig& quad = {});

/// Copy of the terrestrial parameters as the analytic routes see them.
MalagaFogParams analytic_towc(const MalagaFogParams& p, bool exact_fog_shape);

MixedValue mixed_pdf_detailed(const MixedLinkConfig& cfg, double gamma, const MixedOptions& opt = {});
MixedValue mixed_cdf_detailed(const MixedLinkConfig& cfg, double gamma, const MixedOptions& opt = {});
MixedValue mixed_avg_ber_detailed(const MixedLinkConfig& cfg, const ModulationScheme& mod = {},
                                  const MixedOptions& opt = {});

double mixed_pdf(const MixedLinkConfig& cfg, double gamma, const MixedOptions& opt = {});
double mixed_cdf(const MixedLinkConfig& cfg, double gamma, const MixedOptions& opt = {});
double mixed_outage(const MixedLinkConfig& cfg, double gamma_th, const MixedOptions& opt = {});
double mixed_avg_ber(const MixedLinkConfig& cfg, const ModulationScheme& mod = {},
                     const MixedOptions& opt = {});

/// Composition-integral oracles (one-dimensional quadrature over gamma_U).
double mixed_pdf_composition(const MixedLinkConfig& cfg, double gamma, const MixedOptions& opt = {});
double mixed_cdf_composition(const MixedLinkConfig& cfg, double gamma, const MixedOptions& opt = {});

/// Draws of the two hop gains. The Malaga sampler table is built once.
class MixedSampler {
 public:
  explicit MixedSampler(const MixedLinkConfig& cfg);
  double towc_gain(Rng& rng) const;
  double uwoc_gain(Rng& rng) const;
  /// End-to-end SNR from one draw of each hop.
  double snr(Rng& rng) const;

 private:
  MixedLinkConfig cfg_;
  std::shared_ptr<const MalagaSampler> malaga_;
};

/// Both hops driven by the same transmit power: gamma_bar_T = P^2 / sigma^2,
/// gamma_bar_U = P^2 exp(-2 alpha l_U) / sigma^2.
MixedLinkConfig at_power(MixedLinkConfig cfg, double power_dbm, double noise_variance);

}  // namespace uwoc
