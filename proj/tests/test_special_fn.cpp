#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "uwoc/errors.hpp"
#include "uwoc/quadrature.hpp"
#include "uwoc/special_fn.hpp"

using namespace uwoc;

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240;

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

// G^{2,0}_{0,2}[b1, b2 | z] = 2 z^{(b1+b2)/2} K_{b1-b2}(2 sqrt z).
double bessel_g(double b1, double b2, double z) {
  return 2.0 * std::pow(z, 0.5 * (b1 + b2)) * std::cyl_bessel_k(b1 - b2, 2.0 * std::sqrt(z));
}

}  // namespace

TEST_CASE("log_gamma_complex reference values") {
  CHECK(std::abs(log_gamma_complex(1.0)) < 1e-15);
  CHECK(log_gamma_complex(0.5).real() == doctest::Approx(0.572364942924700087).epsilon(1e-15));

  // 30-digit values from an arbitrary-precision library.
  const cplx a = log_gamma_complex({1.0, 1.0});
  CHECK(std::abs(a - cplx(-0.650923199301856338885, -0.301640320467533197888)) < 1e-14);
  CHECK(std::exp(a.real()) == doctest::Approx(0.521564046864939841158).epsilon(1e-14));

  const cplx b = log_gamma_complex({-2.5, 0.3});
  CHECK(std::abs(b - cplx(-0.432088892613201920515, -9.09334542128974150731)) < 1e-13);

  const cplx c = log_gamma_complex({3.7, -40.0});
  CHECK(std::abs(c - cplx(-50.1051762981118645622, -112.454897674247045436)) < 1e-12);

  const cplx d = log_gamma_complex({0.2, 1000.0});
  CHECK(std::abs(d - cplx(-1571.94971483738658634, 5907.28403675076460531)) < 1e-10);
}

TEST_CASE("log_gamma_complex poles") {
  CHECK_THROWS_AS(log_gamma_complex(0.0), PoleError);
  CHECK_THROWS_AS(log_gamma_complex(-3.0), PoleError);
  CHECK_NOTHROW(log_gamma_complex({-3.0, 1e-9}));
}

TEST_CASE("complex path agrees with lgamma on the real axis") {
  // A tiny imaginary part forces the Lanczos/Stirling/shift branches.
  for (double x = -9.75; x <= 170.0; x += 0.37) {
    if (x == std::floor(x)) continue;
    const double want = std::lgamma(x);
    const double got = log_gamma_complex({x, 1e-200}).real();
    CHECK(std::abs(got - want) <= 1e-13 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("log_gamma_complex recurrence") {
  for (double r : {0.1, 0.3, 1.0, 2.7, 7.0, 12.5, 30.0, 50.0}) {
    for (int k = 0; k < 24; ++k) {
      const cplx z = std::polar(r, -3.0 + 0.25 * k);
      if (std::abs(z.imag()) < 1e-3 && z.real() < 0) continue;
      const cplx lhs = std::exp(log_gamma_complex(z + 1.0) - log_gamma_complex(z));
      CHECK(std::abs(lhs - z) <= 1e-12 * std::abs(z));
    }
  }
}

TEST_CASE("exponential kernel") {
  const FoxHSpec spec{{}, {}, {{0.0, 1.0}}, {}};
  for (double z = 0.05; z <= 20.0; z *= 1.3) CHECK(rel(foxh(spec, z), std::exp(-z)) < 1e-9);
  CHECK(rel(foxh(spec, 1.0), 0.36787944117144233) < 1e-9);
}

TEST_CASE("single Gamma kernel is z^b e^{-z}") {
  for (double b : {0.3, 1.0, 2.5}) {
    const FoxHSpec spec{{}, {}, {{b, 1.0}}, {}};
    for (double z = 0.05; z <= 20.0; z *= 1.4)
      CHECK(rel(foxh(spec, z), std::pow(z, b) * std::exp(-z)) < 1e-9);
  }
}

TEST_CASE("non-unit slope kernel") {
  // H^{1,0}_{0,1}[(b,B) | z] = z^{b/B} exp(-z^{1/B}) / B.
  for (auto [b, B] : {std::pair{0.5, 0.5}, std::pair{1.395, 1.184}, std::pair{0.2, 3.0}}) {
    const FoxHSpec spec{{}, {}, {{b, B}}, {}};
    for (double z : {0.05, 0.4, 1.0, 3.0, 9.0}) {
      const double want = std::pow(z, b / B) * std::exp(-std::pow(z, 1.0 / B)) / B;
      CHECK(rel(foxh(spec, z), want) < 1e-9);
    }
  }
}

TEST_CASE("Bessel reductions") {
  const FoxHSpec k0{{}, {}, {{0.0, 1.0}, {0.0, 1.0}}, {}};
  CHECK(rel(foxh(k0, 1.0), 0.227787745499066871305) < 1e-9);
  const FoxHSpec k5{{}, {}, {{2.5, 1.0}, {-2.5, 1.0}}, {}};
  CHECK(rel(meijerg(k5, 4.0), 0.308685097451994331822) < 1e-9);
  for (auto [b1, b2] : {std::pair{0.0, 0.0}, std::pair{5.0, 1.18}, std::pair{1.3, 0.4}}) {
    const FoxHSpec spec{{}, {}, {{b1, 1.0}, {b2, 1.0}}, {}};
    for (double z = 0.05; z <= 20.0; z *= 1.5)
      CHECK(rel(meijerg(spec, z), bessel_g(b1, b2, z)) < 1e-9);
  }
}

TEST_CASE("Meijer-G identities") {
  const FoxHSpec e{{}, {}, {{0.0, 1.0}}, {}};
  CHECK(rel(meijerg(e, 2.0), 0.1353352832366127) < 1e-9);
  // G^{1,2}_{2,2}[1,1; 1,0 | z] = ln(1+z).
  const FoxHSpec ln{{{1.0, 1.0}, {1.0, 1.0}}, {}, {{1.0, 1.0}}, {{0.0, 1.0}}};
  CHECK(rel(meijerg(ln, 1.0), std::numbers::ln2) < 1e-9);
  for (double z : {0.01, 0.5, 3.0, 40.0}) CHECK(rel(meijerg(ln, z), std::log1p(z)) < 1e-9);
  CHECK_THROWS_AS(meijerg(FoxHSpec{{}, {}, {{0.0, 0.5}}, {}}, 1.0), ParameterError);
}

TEST_CASE("foxh equals meijerg for unit slopes") {
  const FoxHSpec spec{{{0.3, 1.0}}, {{1.2, 1.0}}, {{0.5, 1.0}, {1.1, 1.0}}, {{0.2, 1.0}}};
  for (double z : {0.1, 1.0, 5.0}) CHECK(rel(foxh(spec, z), meijerg(spec, z)) < 1e-10);
}

TEST_CASE("GG density built on foxh normalizes") {
  const double a = 0.6302, d = 1.1780, p = 0.8444;
  const FoxHSpec spec{{}, {}, {{d / p, 1.0 / p}}, {}};
  auto pdf = [&](double x) { return foxh(spec, x / a) / (x * std::tgamma(d / p)); };
  quad::Options opt;
  opt.rel_tol = 1e-9;
  const quad::Result r = quad::integrate_half_line(pdf, a, opt);
  CHECK(std::abs(r.value - 1.0) < 1e-7);
}

TEST_CASE("contour placement") {
  const FoxHSpec one{{}, {}, {{0.0, 1.0}}, {}};
  CHECK(choose_contour(one) == doctest::Approx(0.5));
  CHECK(choose_contour(FoxHSpec{}) == 0.0);
  const FoxHSpec ok{{{0.0, 1.0}}, {}, {{1.0, 1.0}}, {}};
  CHECK(choose_contour(ok) == doctest::Approx(0.0));
  const FoxHSpec bad{{{2.0, 1.0}}, {}, {{1.0, 1.0}}, {}};
  CHECK_THROWS_AS(choose_contour(bad), ContourError);
  try {
    choose_contour(bad);
  } catch (const ContourError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("lower_left[0]") != std::string::npos);
    CHECK(msg.find("upper_left[0]") != std::string::npos);
  }
}

TEST_CASE("divergent specs are rejected") {
  const FoxHSpec spec{{}, {{0.0, 1.0}, {0.0, 1.0}}, {{0.0, 1.0}}, {}};
  CHECK(foxh_convergence(spec).a_star == doctest::Approx(-1.0));
  CHECK_THROWS_AS(foxh(spec, 1.0), ContourError);
}

TEST_CASE("contour shift invariance") {
  const FoxHSpec spec{{{1.0, 1.0}}, {{1.6, 1.0}}, {{1.178, 1.0 / 0.8444}, {0.6, 1.0}}, {{0.0, 1.0}}};
  QuadratureConfig cfg;
  for (double z : {0.01, 0.3, 2.0}) {
    const LineIntegral base = foxh_detailed(spec, z, cfg);
    for (double shift : {-0.5 * cfg.pole_margin, 0.5 * cfg.pole_margin, -0.3, 0.3}) {
      const double c = base.abscissa + shift;
      const ContourStrip s = legal_strip(spec);
      if (c <= s.lo || c >= s.hi) continue;
      const double v = foxh_detailed(spec, z, cfg, c).value;
      CHECK(rel(v, base.value) < cfg.rel_tol);
    }
  }
}

TEST_CASE("leading residues") {
  const FoxHSpec e{{}, {}, {{0.0, 1.0}}, {}};
  CHECK(foxh_leading_residues(e, 1e-4) == doctest::Approx(1.0).epsilon(1e-12));
  // Double pole at 0: residue of Gamma(s)^2 z^{-s} is -ln z - 2 gamma_E.
  const FoxHSpec k0{{}, {}, {{0.0, 1.0}, {0.0, 1.0}}, {}};
  for (double z : {1e-6, 1e-3}) {
    const double want = -std::log(z) - 2.0 * kEulerGamma;
    CHECK(rel(foxh_leading_residues(k0, z), want) < 1e-10);
  }
  // Distinct poles: residues at -0.5 and -1.2 of Gamma(0.5+s)Gamma(1.2+s).
  const FoxHSpec two{{}, {}, {{0.5, 1.0}, {1.2, 1.0}}, {}};
  const double z = 1e-3;
  const double want = std::tgamma(0.7) * std::pow(z, 0.5) + std::tgamma(-0.7) * std::pow(z, 1.2);
  CHECK(rel(foxh_leading_residues(two, z), want) < 1e-10);
}

TEST_CASE("bivariate separable spec factorizes") {
  BivariateFoxHSpec spec;
  spec.axis1 = FoxHSpec{{}, {}, {{0.5, 1.0}}, {}};
  spec.axis2 = FoxHSpec{{}, {}, {{0.0, 1.0}, {1.0, 1.0}}, {}};
  spec.z1 = 0.7;
  spec.z2 = 1.9;
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-7;
  const double want = foxh(spec.axis1, spec.z1, cfg) * foxh(spec.axis2, spec.z2, cfg);
  CHECK(rel(bivariate_foxh(spec, cfg), want) < 2.0 * cfg.rel_tol);
}

TEST_CASE("bivariate joint factor") {
  // (1/2 pi i)^2 \int\int Gamma(s1) Gamma(s2) Gamma(1 - s1 - s2) x^{-s1} y^{-s2}
  //   = 1 / (1 + x + y)  by two nested beta integrals.
  BivariateFoxHSpec spec;
  spec.axis1 = FoxHSpec{{}, {}, {{0.0, 1.0}}, {}};
  spec.axis2 = FoxHSpec{{}, {}, {{0.0, 1.0}}, {}};
  spec.joint_upper.push_back({{1.0, 1.0}, -1.0, -1.0});
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-7;
  for (auto [x, y] : {std::pair{0.5, 2.0}, std::pair{3.0, 0.2}}) {
    spec.z1 = 1.0 / x;
    spec.z2 = 1.0 / y;
    CHECK(rel(bivariate_foxh(spec, cfg), 1.0 / (1.0 + 1.0 / x + 1.0 / y)) < 1e-6);
  }
}
