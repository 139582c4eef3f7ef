#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "uwoc/errors.hpp"
#include "uwoc/mixed_link.hpp"
#include "uwoc/quadrature.hpp"
#include "uwoc/reference_params.hpp"

using namespace uwoc;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

MixedLinkConfig make_cfg(int malaga, int fog, std::vector<LayerModel> layers, double rho2,
                         double k_override = 0.0) {
  MixedLinkConfig c;
  const double k = k_override > 0.0 ? k_override : ref::kFog[fog].k;
  c.towc = make_malaga_fog(ref::kMalaga[malaga].alpha, ref::kMalaga[malaga].beta, k,
                           fog_rate(ref::kFog[fog].beta_f, ref::kTerrestrialLength), rho2, ref::kA0);
  c.stack = {std::move(layers), {rho2, ref::kA0}, {ref::kExtinction, ref::kUnderwaterLength}};
  // Mean SNR of 40 dB on both hops at the pointing scale.
  c.towc_gamma_bar = 1e4 / (ref::kA0 * ref::kA0);
  c.uwoc_gamma_bar = 1e4 / (ref::kA0 * ref::kA0);
  return c;
}

// Typical terrestrial SNR: gamma_bar_T A_T^2.
double towc_scale(const MixedLinkConfig& c) { return c.towc_gamma_bar * c.towc.A_T * c.towc.A_T; }

MixedOptions with_route(MixedRoute r) {
  MixedOptions o;
  o.route = r;
  return o;
}

}  // namespace

TEST_CASE("terrestrial SNR law: Meijer-G and factorized forms, normalization") {
  for (int ms = 0; ms < 3; ++ms) {
    const MixedLinkConfig c = make_cfg(ms, 0, ref::gg5(), 1.0, 13.0);
    CHECK(std::abs(towc_log_mellin(c.towc, 0.0)) < 1e-12);
    const double s = towc_scale(c);
    for (double r : {1e-3, 1e-1, 1.0, 10.0}) {
      CHECK(rel(towc_snr_pdf(c, r * s, TowcRoute::meijer), towc_snr_pdf(c, r * s)) < 1e-7);
      CHECK(rel(towc_snr_cdf(c, r * s, TowcRoute::meijer), towc_snr_cdf(c, r * s)) < 1e-7);
    }
    quad::Options q;
    q.rel_tol = 1e-9;
    const double mass =
        quad::integrate_half_line([&](double g) { return towc_snr_pdf(c, g); }, s, q).value;
    CHECK(std::abs(mass - 1.0) < 1e-4);
    // CDF is the integral of the density.
    const double head =
        quad::integrate_half_line(
            [&](double g) { return g < 0.3 * s ? towc_snr_pdf(c, g) : 0.0; }, 0.01 * s, q)
            .value;
    CHECK(std::abs(head - towc_snr_cdf(c, 0.3 * s)) < 1e-6);
    for (int i = 0; i < 100; ++i)
      CHECK(towc_snr_pdf(c, s * std::pow(10.0, -8.0 + 0.1 * i)) >= 0.0);
  }
}

TEST_CASE("terrestrial BER on both forms") {
  const MixedLinkConfig c = make_cfg(1, 1, ref::gg5(), 6.0, 12.0);
  const ModulationScheme ook;
  CHECK(rel(towc_avg_ber(c, ook, TowcRoute::meijer), towc_avg_ber(c, ook)) < 1e-7);
}

TEST_CASE("fog shape rounding") {
  MixedLinkConfig c = make_cfg(0, 0, ref::gg5(), 1.0);
  CHECK(towc_integer_k(c.towc) == 13);
  CHECK(analytic_towc(c.towc, false).k_fog == 13.0);
  CHECK(analytic_towc(c.towc, true).k_fog == doctest::Approx(13.12));
  CHECK_THROWS_AS(mixed_cdf(c, 1.0, [] {
                    MixedOptions o = with_route(MixedRoute::bivariate);
                    o.exact_fog_shape = true;
                    return o;
                  }()),
                  ParameterError);
}

TEST_CASE("bivariate, factorized and composition routes agree") {
  // Two configurations: weak turbulence + light fog over two EGG layers, and
  // strong turbulence + moderate fog over the GG stack with strong pointing.
  const MixedLinkConfig a = make_cfg(0, 0, ref::egg2(), 1.0);
  const MixedLinkConfig b = make_cfg(2, 1, ref::gg5(), 6.0);
  for (const auto* c : {&a, &b}) {
    const double s = std::min(towc_scale(*c), c->uwoc_gamma_bar * combined_moment(c->stack, 2.0));
    for (double r : {1e-2, 1e-1, 1.0}) {
      const double g = r * s;
      const double f_fac = mixed_cdf(*c, g, with_route(MixedRoute::factorized));
      const double f_cmp = mixed_cdf(*c, g, with_route(MixedRoute::composition));
      const double f_biv = mixed_cdf(*c, g, with_route(MixedRoute::bivariate));
      CAPTURE(r);
      CHECK(rel(f_fac, f_cmp) < 1e-6);
      CHECK(rel(f_biv, f_cmp) < 1e-6);
      const double p_fac = mixed_pdf(*c, g, with_route(MixedRoute::factorized));
      CHECK(rel(p_fac, mixed_pdf_composition(*c, g)) < 1e-6);
      CHECK(rel(mixed_pdf(*c, g, with_route(MixedRoute::bivariate)), p_fac) < 1e-6);
    }
  }
}

TEST_CASE("mixed density axioms and the finite-difference oracle") {
  const MixedLinkConfig c = make_cfg(1, 0, ref::gg5(), 1.0);
  const double s = towc_scale(c);
  quad::Options q;
  q.rel_tol = 1e-5;
  MixedOptions coarse;
  coarse.cascade.quad.rel_tol = 1e-6;
  const double mass =
      quad::integrate_half_line([&](double g) { return mixed_pdf(c, g, coarse); }, s, q).value;
  CHECK(std::abs(mass - 1.0) < 1e-3);
  CHECK(mixed_cdf(c, 0.0) == 0.0);
  CHECK(std::abs(mixed_cdf(c, 1e4 * s) - 1.0) < 1e-3);
  for (double r : {1e-2, 0.3, 2.0}) {
    const double g = r * s, h = 1e-4 * g;
    const double fd = (mixed_cdf(c, g + h) - mixed_cdf(c, g - h)) / (2.0 * h);
    CHECK(rel(fd, mixed_pdf(c, g)) < 1e-3);
  }
  CHECK(mixed_cdf(c, 1.0) < mixed_cdf(c, 10.0));
}

TEST_CASE("mixed BER: closed form against CDF quadrature") {
  const ModulationScheme ook;
  const ModulationScheme two{2.0, 0.5, {0.3, 0.7}};
  const MixedLinkConfig a = make_cfg(2, 1, ref::gg5(), 6.0);
  for (const auto& mod : {ook, two}) {
    const double got = mixed_avg_ber(a, mod);
    double want = 0.0;
    quad::Options q;
    q.rel_tol = 1e-5;
    MixedOptions coarse;
    coarse.cascade.quad.rel_tol = 1e-6;
    for (double qn : mod.q)
      want += std::pow(qn, mod.phi) *
              quad::integrate_half_line(
                  [&](double g) {
                    return std::pow(g, mod.phi - 1.0) * std::exp(-qn * g) * mixed_cdf(a, g, coarse);
                  },
                  1.0 / qn, q)
                  .value;
    want *= mod.delta / (2.0 * std::tgamma(mod.phi));
    CHECK(rel(got, want) < 1e-3);
    CHECK(rel(got, mixed_avg_ber(a, mod, with_route(MixedRoute::bivariate))) < 1e-6);
    CHECK(rel(got, mixed_avg_ber(a, mod, with_route(MixedRoute::composition))) < 1e-6);
    CHECK(got > 0.0);
    CHECK(got <= 0.5 * mod.delta * mod.q.size());
  }
}

TEST_CASE("relay bottleneck and scale structure") {
  const MixedLinkConfig c = make_cfg(0, 0, ref::gg5(), 1.0);
  const double s = towc_scale(c);
  for (double r : {1e-2, 1e-1, 1.0}) {
    const double g = r * s;
    CHECK(mixed_cdf(c, g) >= towc_snr_cdf(c, g));
    // Rescaling gamma_bar_T and gamma together leaves the CDF unchanged.
    MixedLinkConfig d = c;
    d.towc_gamma_bar *= 37.0;
    CHECK(rel(mixed_cdf(d, 37.0 * g), mixed_cdf(c, g)) < 1e-7);
    // C -> 0 makes the relay transparent.
    MixedLinkConfig e = c;
    e.C = 1e-8;
    e.towc = analytic_towc(e.towc, false);
    CHECK(rel(mixed_cdf(e, g), towc_snr_cdf(e, g)) < 1e-4);
  }
}

TEST_CASE("outage falls with transmit power") {
  const MixedLinkConfig c = make_cfg(0, 0, ref::egg2(), 1.0);
  double prev = 1.0;
  for (double p = -10.0; p <= 60.0; p += 10.0) {
    const double v = mixed_outage(at_power(c, p, ref::kNoiseVariance), 1.0);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
  const MixedLinkConfig d = at_power(c, 20.0, ref::kNoiseVariance);
  CHECK(rel(d.towc_gamma_bar, 0.01 / ref::kNoiseVariance) < 1e-12);
  CHECK(rel(d.uwoc_gamma_bar, 0.01 * std::exp(-2.0 * 0.056 * 50.0) / ref::kNoiseVariance) < 1e-12);
}

TEST_CASE("samples obey the relay bound and match the analytic CDF") {
  const MixedLinkConfig c = make_cfg(1, 0, ref::egg2(), 1.0);
  const MixedSampler smp(c);
  constexpr int kN = 200000;
  std::vector<double> g(kN);
  for (int i = 0; i < kN; ++i) {
    Rng r1(5, 1 + i), r2(5, 1 + i);
    const double ht = smp.towc_gain(r1), hu = smp.uwoc_gain(r1);
    const double gt = c.towc_gamma_bar * ht * ht, gu = c.uwoc_gamma_bar * hu * hu;
    const double e2e = smp.snr(r2);
    CHECK_LE(e2e, std::min(gt, gt * gu / c.C) * (1.0 + 1e-12));
    g[i] = e2e;
  }
  std::sort(g.begin(), g.end());
  MixedOptions exact;
  exact.exact_fog_shape = true;
  for (double p : {0.01, 0.1, 0.5, 0.9}) {
    const double x = g[static_cast<std::size_t>(p * kN)];
    CAPTURE(p);
    CHECK(std::abs(mixed_cdf(c, x, exact) / p - 1.0) < 0.05);
  }
}

TEST_CASE("invalid configurations") {
  MixedLinkConfig c = make_cfg(0, 0, ref::gg5(), 1.0);
  c.C = 0.0;
  CHECK_THROWS_AS(validate_mixed(c), ParameterError);
  c = make_cfg(0, 0, ref::gg5(), 1.0);
  c.towc_gamma_bar = -1.0;
  CHECK_THROWS_AS(mixed_cdf(c, 1.0), ParameterError);
  c = make_cfg(0, 0, ref::gg5(), 1.0);
  c.towc.b_m.pop_back();
  CHECK_THROWS_AS(mixed_pdf(c, 1.0), ParameterError);
}
