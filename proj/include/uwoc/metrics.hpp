#pragma once

#include <vector>

#include "uwoc/cascade.hpp"

namespace uwoc {

/// Conditional BER delta/(2 Gamma(phi)) sum_n Gamma(phi, q_n gamma).
/// The default {1, 1, 1/2, {1/2}} is OOK, where it equals Q(sqrt(gamma)).
struct ModulationScheme {
  double delta = 1.0;
  double phi = 0.5;
  std::vector<double> q{0.5};
  bool operator==(const ModulationScheme&) const = default;
};

void validate_modulation(const ModulationScheme& mod);
double conditional_ber(const ModulationScheme& mod, double gamma);

enum class DetectionKind { IMDD, HD };
/// e/(2 pi) for IM/DD, 1 for heterodyne.
double capacity_kappa(DetectionKind kind);

/// BER values below this are reported as under the numerical floor.
inline constexpr double kBerFloor = 1e-12;

double outage(const UwocStack& stack, double gamma_bar, double gamma_th,
              const CascadeOptions& opt = {});
/// Sum of the residues at the leading pole of every factor.
double outage_asymptotic(const UwocStack& stack, double gamma_bar, double gamma_th,
                         const CascadeOptions& opt = {});

/// High-SNR exponent: outage and BER fall as gamma_bar^{-DO}. The product
/// channel's density near zero is governed by the rightmost Mellin pole, so
/// DO is half the smallest leading-pole magnitude over layers and pointing.
double diversity_order(const UwocStack& stack);
/// The per-family closed forms as printed (sums of d_i, beta_i, alpha_i or
/// N/2 against rho2/2). They disagree with diversity_order whenever a sum
/// exceeds the smallest single pole; kept for comparison only.
double diversity_order_printed(const UwocStack& stack);

double avg_ber(const UwocStack& stack, double gamma_bar, const ModulationScheme& mod = {},
               const CascadeOptions& opt = {});
double avg_ber_asymptotic(const UwocStack& stack, double gamma_bar,
                          const ModulationScheme& mod = {}, const CascadeOptions& opt = {});

/// E[log2(1 + kappa gamma)] in bits/s/Hz.
double ergodic_capacity(const UwocStack& stack, double gamma_bar, DetectionKind det,
                        const CascadeOptions& opt = {});

// Link budget. Powers in dBm and SNRs in dB appear only at the boundary.
double db_to_linear(double db);
double linear_to_db(double x);
double dbm_to_watts(double dbm);
/// P^2 exp(-2 alpha l) / sigma^2 with unit responsivity.
double link_gamma_bar(double power_dbm, const PathGain& path, double noise_variance);

/// gamma_bar giving mean electrical SNR gamma_bar E[h^2] equal to `mean_snr`.
double gamma_bar_from_mean_snr(const UwocStack& stack, double mean_snr);

/// Least-squares slope of log10(y) against x_db / 10, i.e. minus the decay
/// exponent of y ~ gamma_bar^{-d}.
double loglog_slope(const std::vector<double>& x_db, const std::vector<double>& y);

}  // namespace uwoc
