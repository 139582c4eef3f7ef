#pragma once

#include <cstddef>
#include <functional>

namespace uwoc::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;  // integral of |f|, used to judge cancellation
  std::size_t evals = 0;
  bool converged = false;
};

struct Options {
  double abs_tol = 0.0;
  double rel_tol = 1e-10;
  std::size_t max_evals = 1u << 16;
};

/// Globally adaptive 21-point Gauss-Kronrod on a finite interval. Stops when
/// the summed error estimate drops below max(abs_tol, rel_tol*|I|).
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     const Options& opt = {});

/// Integral over (0, inf) via x = exp(u); `center` is a characteristic scale of
/// the integrand. The u-range grows until the two end panels are negligible.
Result integrate_half_line(const std::function<double(double)>& f, double center,
                           const Options& opt = {});

/// Integral over [lo, hi] with the log substitution, for integrands varying
/// over many decades (lo > 0).
Result integrate_log(const std::function<double(double)>& f, double lo, double hi,
                     const Options& opt = {});

}  // namespace uwoc::quad
