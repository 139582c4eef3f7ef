#pragma once

#include <vector>

#include "uwoc/rng.hpp"
#include "uwoc/special_fn.hpp"
#include "uwoc/turbulence.hpp"

namespace uwoc {

struct UwocStack {
  std::vector<LayerModel> layers;
  PointingError pe;
  PathGain path;
};

void validate_stack(const UwocStack& stack);

/// Instantaneous and average electrical SNR, both linear.
struct SnrPoint {
  double gamma = 0.0;
  double gamma_bar = 1.0;
};

/// How a stack's statistics are evaluated.
///   terms      - sum of Fox-H terms over the unified expansion
///   factorized - one Mellin-Barnes integral of the product of per-layer
///                Mellin transforms (exact for EW; no term-count limit)
///   automatic  - terms, unless the stack has an EW layer (whose truncated
///                binomial series has a spurious small-h tail) or the
///                expansion exceeds the cap
enum class Route { automatic, terms, factorized };

struct CascadeOptions {
  QuadratureConfig quad;
  int ew_trunc = kDefaultEwTrunc;
  std::size_t cap = kDefaultExpansionCap;
  Route route = Route::automatic;
};

Route resolve_route(const std::vector<LayerModel>& layers, const CascadeOptions& opt);

/// Density of h_c = prod h_i.
double cascaded_pdf(const std::vector<LayerModel>& layers, double h,
                    const CascadeOptions& opt = {});

double snr_pdf(const UwocStack& stack, SnrPoint pt, const CascadeOptions& opt = {});
double snr_cdf(const UwocStack& stack, SnrPoint pt, const CascadeOptions& opt = {});

/// h_c * h_p.
double sample_combined(const UwocStack& stack, Rng& rng);

/// E[(h_c h_p)^n].
double combined_moment(const UwocStack& stack, double n);

// Per-term Fox-H kernels of the combined channel h = h_c h_p. Each carries the
// term's Gamma factors; the caller multiplies by rho2 * coefficient and uses
// the argument (E / A0) * h-scale.

/// H^{m+1,0}_{1,q+1}[(1+rho2,1); D, (rho2,1)].
FoxHSpec pdf_term_spec(const UnifiedTerm& t, double rho2);
/// Adds Gamma(-s)/Gamma(1-s) to the density kernel.
FoxHSpec cdf_term_spec(const UnifiedTerm& t, double rho2);

/// log E[h^s] of h = h_c h_p with pole bookkeeping, for the factorized route.
class ChannelMellin {
 public:
  ChannelMellin(const std::vector<LayerModel>& layers, const PointingError& pe);
  /// Without pointing loss (h = h_c).
  explicit ChannelMellin(const std::vector<LayerModel>& layers);
  cplx operator()(cplx s) const;
  double first_pole() const { return first_pole_; }
  /// Leading pole of every factor (per branch for mixtures).
  const std::vector<double>& leading_poles() const { return leading_; }
  /// All poles within `span` of the first one.
  std::vector<double> poles(double span) const;

 private:
  std::vector<LayerMellin> layers_;
  std::vector<double> leading_;
  bool has_pe_ = false;
  PointingError pe_;
  double first_pole_ = 0.0;
};

/// (1/2 pi i) \int exp(M(s) + kernel(s) - s log z) ds over a line inside
/// (max(lo, first pole), hi), placed at the saddle of the real-axis modulus.
LineIntegral mellin_line(const std::function<cplx(cplx)>& log_mellin, double first_pole,
                         const std::function<cplx(cplx)>& log_kernel, double lo, double hi,
                         double log_z, const QuadratureConfig& cfg);

}  // namespace uwoc
