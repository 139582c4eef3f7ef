#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace uwoc {

using cplx = std::complex<double>;

/// Principal branch of log Gamma(z): the analytic continuation from the
/// positive real axis, cut along the non-positive real axis. Throws PoleError
/// at non-positive integers.
cplx log_gamma_complex(cplx z);

/// Gamma(b + B s) with B > 0. The same pair describes every factor of a
/// Mellin-Barnes kernel; its role (numerator/denominator, sign of s) is set
/// by the list it sits in.
struct GammaFactor {
  double b = 0.0;
  double B = 1.0;
  bool operator==(const GammaFactor&) const = default;
};

/// H_{p,q}^{m,n}[(a_k,A_k); (b_k,B_k) | z] as four factor lists:
///   upper_left  -> Gamma(1 - a - A s)     (the n factors)
///   upper_right -> 1 / Gamma(a + A s)     (the p - n factors)
///   lower_left  -> Gamma(b + B s)         (the m factors)
///   lower_right -> 1 / Gamma(1 - b - B s) (the q - m factors)
/// and H(z) = (1/2 pi i) \int Theta(s) z^{-s} ds along Re s = c.
struct FoxHSpec {
  std::vector<GammaFactor> upper_left;
  std::vector<GammaFactor> upper_right;
  std::vector<GammaFactor> lower_left;
  std::vector<GammaFactor> lower_right;
};

struct QuadratureConfig {
  double contour_height = 80.0;  // first truncation of |Im s|; doubled as needed
  double rel_tol = 1e-8;
  std::size_t max_nodes = 1u << 16;
  double pole_margin = 1e-3;
};

/// Open interval of admissible abscissae. Infinite ends mean that side has no
/// poles.
struct ContourStrip {
  double lo;
  double hi;
};

/// Slope-sum data of the Mellin-Barnes theory. The integrand decays like
/// exp(-pi a_star |t| / 2) along a vertical line.
struct FoxHConvergence {
  double a_star;
  double delta;
  double mu;
};

FoxHConvergence foxh_convergence(const FoxHSpec& spec);

/// Strip between the rightmost pole of the lower_left factors and the leftmost
/// pole of the upper_left factors. Throws ContourError naming the offending
/// factor indices when the strip is narrower than 2*pole_margin.
ContourStrip legal_strip(const FoxHSpec& spec, double pole_margin = 1e-3);

/// Midpoint of the legal strip. A side without poles is capped one unit from
/// the other bound; with no poles at all the result is 0.
double choose_contour(const FoxHSpec& spec, const QuadratureConfig& cfg = {});

/// Abscissa inside the legal strip that minimises |Theta(c) z^{-c}| on the real
/// axis (the saddle-point crossing); keeps cancellation along the line small.
double choose_contour(const FoxHSpec& spec, double z, const QuadratureConfig& cfg);

/// log Theta(s).
cplx foxh_log_kernel(const FoxHSpec& spec, cplx s);

struct LineIntegral {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  std::size_t nodes = 0;
  double abscissa = 0.0;
  double height = 0.0;  // final truncation of Im s
};

/// (1 / 2 pi i) \int_{c - i inf}^{c + i inf} g(s) ds for an integrand with
/// g(conj s) = conj g(s). Panels [0,T], [T,2T], ... until the last panel is
/// below rel_tol/10 of the running value.
LineIntegral integrate_vertical(const std::function<cplx(cplx)>& g, double c,
                                const QuadratureConfig& cfg);

/// Minimiser of a real objective over [lo, hi] by grid scan and golden-section
/// refinement; used to place contours at the saddle.
double minimise_on_interval(const std::function<double(double)>& f, double lo, double hi,
                            int grid = 48);

LineIntegral foxh_detailed(const FoxHSpec& spec, double z, const QuadratureConfig& cfg = {},
                           std::optional<double> abscissa = std::nullopt);

double foxh(const FoxHSpec& spec, double z, const QuadratureConfig& cfg = {});

/// Test hook: every univariate and bivariate Fox-H result is multiplied by
/// (1 + rel). Zero outside fault-injection runs.
void set_foxh_perturbation(double rel);
double foxh_perturbation();

/// Meijer G-function; every slope in `spec` must be 1.
double meijerg(const FoxHSpec& spec, double z, const QuadratureConfig& cfg = {});

/// Sum of the residues at the first pole of every lower_left factor, i.e. the
/// leading small-z behaviour. Coincident poles are grouped and their combined
/// residue taken by a trapezoid rule on a small circle, so higher-order poles
/// produce the logarithmic terms without parameter perturbation.
double foxh_leading_residues(const FoxHSpec& spec, double z);

/// Same, for an arbitrary kernel with known left poles.
double leading_residues(const std::function<cplx(cplx)>& g, std::vector<double> first_poles,
                        const std::vector<double>& all_poles);

// ---------------------------------------------------------------------------
// Bivariate Fox-H

/// Gamma(b + w1 s1 + w2 s2).
struct JointFactor {
  GammaFactor factor;  // factor.B is unused; the weights carry the slopes
  double w1 = 0.0;
  double w2 = 0.0;
};

/// (1/2 pi i)^2 \int\int Theta_1(s1) Theta_2(s2) Theta_J(s1,s2) z1^{-s1} z2^{-s2}
/// ds1 ds2, with Theta_J the ratio of the joint numerator/denominator factors.
struct BivariateFoxHSpec {
  std::vector<JointFactor> joint_upper;  // numerator
  std::vector<JointFactor> joint_lower;  // denominator
  FoxHSpec axis1;
  FoxHSpec axis2;
  double z1 = 1.0;
  double z2 = 1.0;
};

struct PlaneIntegral {
  double value = 0.0;
  double error = 0.0;
  std::size_t nodes = 0;
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Budget for nested contour quadrature (outer x inner node product).
inline constexpr std::size_t kPlaneNodeBudget = std::size_t{1} << 22;

/// (1/2 pi i)^2 over Re s1 = c1, Re s2 = c2 for g(conj s1, conj s2) =
/// conj g(s1, s2). Throws ConvergenceError past kPlaneNodeBudget.
PlaneIntegral integrate_plane(const std::function<cplx(cplx, cplx)>& g, double c1, double c2,
                              const QuadratureConfig& cfg);

cplx bivariate_log_kernel(const BivariateFoxHSpec& spec, cplx s1, cplx s2);

/// Contour pair keeping every numerator Gamma argument at least pole_margin
/// to the right of its first pole, chosen to minimise the integrand at t = 0.
std::pair<double, double> choose_bivariate_contour(const BivariateFoxHSpec& spec,
                                                   const QuadratureConfig& cfg);

PlaneIntegral bivariate_foxh_detailed(
    const BivariateFoxHSpec& spec, const QuadratureConfig& cfg = {},
    std::optional<std::pair<double, double>> contour = std::nullopt);

double bivariate_foxh(const BivariateFoxHSpec& spec, const QuadratureConfig& cfg = {});

}  // namespace uwoc
