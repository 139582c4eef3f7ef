#pragma once

#include <vector>

#include "uwoc/rng.hpp"
#include "uwoc/special_fn.hpp"

namespace uwoc {

/// Terrestrial hop: Malaga irradiance, fog-induced gain exp(-t) with
/// t ~ Gamma(k_fog, rate z_fog), and pointing loss (rho2_T, A_T).
///
/// The Malaga density is Amg * sum_m b_m' I^{(alpha+m)/2-1} K_{alpha-m}(2 sqrt(c I))
/// with c = alphaM betaM / (gM betaM + OmegaM). Here b_m stores
/// a_m c^{-(alpha+m)/2}, so that E[I^s] = sum_m (Amg/2) b_m c^{-s}
/// Gamma(alpha+s) Gamma(m+s).
struct MalagaFogParams {
  double alphaM = 1.0;
  int betaM = 1;
  double gM = 0.0;
  double OmegaM = 1.0;  // Omega' (coherent plus coupled power)
  double Amg = 1.0;
  std::vector<double> b_m;
  double k_fog = 1.0;
  double z_fog = 1.0;
  double rho2_T = 1.0;
  double A_T = 1.0;
};

/// Physical inputs behind g and Omega': b0 (scattered power per component),
/// rho (fraction coupled to the line-of-sight), Omega (LOS power) and the
/// phase difference of the two coherent components.
struct MalagaShape {
  double b0 = 0.1079;
  double rho = 0.596;
  double Omega = 1.3265;
  double phase = 1.5707963267948966;
  double g() const;
  double Omega_prime() const;
  bool operator==(const MalagaShape&) const = default;
};

/// Fills Amg and b_m from (alphaM, betaM, gM, OmegaM). betaM must already be
/// an integer.
void compute_malaga_constants(MalagaFogParams& p);

/// Convenience builder: rounds beta to the nearest integer (>= 1).
MalagaFogParams make_malaga_fog(double alphaM, double betaM, double k_fog, double z_fog,
                                double rho2_T, double A_T, const MalagaShape& shape = {});

/// Fog rate from the attenuation coefficient (dB/km) and hop length (m); the
/// 4.343 dB/neper convention of the fog literature.
double fog_rate(double beta_f_db_per_km, double length_m);

void validate_malaga(const MalagaFogParams& p);

double malaga_scale(const MalagaFogParams& p);
double malaga_pdf(const MalagaFogParams& p, double I);
/// log E[I^s].
cplx malaga_log_mellin(const MalagaFogParams& p, cplx s);

/// Inverse-CDF sampler on a 2^16-node log-spaced table of the analytic
/// density. Throws ConvergenceError if the table mass is off by more than 1e-6.
class MalagaSampler {
 public:
  explicit MalagaSampler(const MalagaFogParams& p);
  double operator()(Rng& rng) const;
  double table_mass() const { return mass_; }

 private:
  std::vector<double> logx_;
  std::vector<double> cdf_;
  double mass_ = 0.0;
};

}  // namespace uwoc
