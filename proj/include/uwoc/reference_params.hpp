#pragma once

#include <vector>

#include "uwoc/turbulence.hpp"

// Published measurement-fit parameter sets used by the presets and tests.
namespace uwoc::ref {

inline std::vector<LayerModel> gg5() {
  const double a[] = {0.6302, 1.0750, 1.0173, 0.7598, 1.0990};
  const double d[] = {1.1780, 3.2048, 1.6668, 2.3270, 4.5550};
  const double p[] = {0.8444, 2.9222, 1.0380, 1.4353, 4.6208};
  std::vector<LayerModel> out;
  for (int i = 0; i < 5; ++i) out.push_back(GGParams{a[i], d[i], p[i]});
  return out;
}

/// gg5 with d_1 raised from 1.1780 to 2.6108.
inline std::vector<LayerModel> gg5_modified_d() {
  auto out = gg5();
  std::get<GGParams>(out[0]).d = 2.6108;
  return out;
}

/// gg5 with layer 3 replaced by (a, d, p) = (0.3557, 5.0965, 1.296).
inline std::vector<LayerModel> gg5_modified_layer3() {
  auto out = gg5();
  out[2] = GGParams{0.3557, 5.0965, 1.296};
  return out;
}

/// Five EGG layers; the GG branch is given through d/p, a, p.
inline std::vector<LayerModel> egg5() {
  const double w[] = {0.2130, 0.2108, 0.1807, 0.1665, 0.4589};
  const double l[] = {0.3291, 0.2694, 0.1641, 0.1207, 0.3449};
  const double dp[] = {1.4299, 0.6020, 0.2334, 0.1559, 1.0421};
  const double a[] = {1.1817, 1.2795, 1.4201, 1.5216, 1.5768};
  const double p[] = {17.1984, 21.1611, 22.5924, 22.8754, 35.9424};
  std::vector<LayerModel> out;
  for (int i = 0; i < 5; ++i) out.push_back(EGGParams{w[i], l[i], a[i], dp[i] * p[i], p[i]});
  return out;
}

/// The two-entry EGG (omega, lambda) set. Its GG branches are not published
/// alongside; they are borrowed from the five-layer set (entry 1 from layer 1,
/// entry 2 from layer 5, whose (omega, lambda) coincide).
inline std::vector<LayerModel> egg2() {
  const auto five = egg5();
  EGGParams first = std::get<EGGParams>(five[0]);
  first.omega = 0.1770;
  first.lambda = 0.4687;
  return {first, five[4]};
}

inline EWParams ew() { return {2.50, 0.70, 0.50}; }
inline GammaGammaParams gamma_gamma() { return {5.0, 1.18}; }

inline constexpr double kA0 = 0.0032;

struct MalagaSet {
  double alpha;
  double beta;
};
inline constexpr MalagaSet kMalaga[3] = {{4.5916, 7.0941}, {2.3378, 4.5323}, {1.4321, 3.4948}};

struct FogSet {
  double k;
  double beta_f;  // dB/km
};
inline constexpr FogSet kFog[2] = {{13.12, 2.0}, {12.06, 5.0}};

inline constexpr double kNoiseVariance = 1e-14;
inline constexpr double kExtinction = 0.056;
inline constexpr double kTerrestrialLength = 400.0;
inline constexpr double kUnderwaterLength = 50.0;

}  // namespace uwoc::ref
