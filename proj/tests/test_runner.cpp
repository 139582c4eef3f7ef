#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "uwoc/config.hpp"
#include "uwoc/reference_params.hpp"
#include "uwoc/runner.hpp"
#include "uwoc/special_fn.hpp"
#include "uwoc/validation.hpp"

using namespace uwoc;

namespace {

std::size_t count(const std::string& s, char c) { return std::count(s.begin(), s.end(), c); }

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

RunConfig small_uwoc(std::uint64_t trials, unsigned workers) {
  RunConfig c;
  c.name = "small";
  c.curves.push_back({"gg5", ref::gg5(), {1.0, ref::kA0}, std::nullopt});
  c.sweep = {SweepAxis::snr_db, 60.0, 80.0, 10.0};
  c.metrics = {Metric::outage, Metric::ber, Metric::capacity};
  c.gamma_th_db = -40.0;
  c.plan = {trials, 7, workers};
  return c;
}

const Check& check_named(const std::string& name) {
  for (const auto& c : registered_checks())
    if (c.name == name) return c;
  FAIL("no check " << name);
  throw;
}

}  // namespace

TEST_CASE("analytic-only run has no Monte Carlo columns") {
  RunConfig c = preset("fig3b");
  c.plan.trials = 0;
  const RunResult r = run(c);
  CHECK(r.pass);
  const std::string csv = format_csv(c, r, Metric::ber);
  CHECK(first_line(csv) == "curve,snr_db,analytic,asymptotic");
  CHECK(count(csv, '\n') == 1 + c.curves.size() * c.sweep.values().size());
  for (const auto& curve : r.curves) {
    REQUIRE(curve.series.size() == 1);
    for (const auto& row : curve.series[0].rows) CHECK_FALSE(row.mc.has_value());
  }
}

TEST_CASE("CSV bytes do not depend on worker count or repetition") {
  const RunConfig one = small_uwoc(100000, 1);
  const RunConfig four = small_uwoc(100000, 4);
  const RunResult a = run(one), b = run(four), again = run(one);
  for (Metric m : one.metrics) {
    CAPTURE(to_string(m));
    const std::string sa = format_csv(one, a, m);
    CHECK(first_line(sa) == "curve,snr_db,analytic,asymptotic,mc,mc_lo,mc_hi,rel_err");
    CHECK(sa == format_csv(four, b, m));
    CHECK(sa == format_csv(one, again, m));
  }
  CHECK(format_summary(one, a) == format_summary(one, again));
}

TEST_CASE("Monte Carlo columns track the analytic series") {
  const RunConfig c = small_uwoc(1000000, 4);
  const RunResult r = run(c);
  CHECK(r.pass);
  for (const auto& s : r.curves[0].series) {
    REQUIRE(s.check);
    CAPTURE(to_string(s.metric));
    CHECK(s.check->pass);
  }
}

TEST_CASE("BER under the floor is blank, counted, and keeps its asymptote") {
  RunConfig c;
  c.name = "floor";
  c.curves.push_back({"steep", {GGParams{1.0, 20.0, 1.0}}, {40.0, ref::kA0}, std::nullopt});
  c.sweep = {SweepAxis::snr_db, 0.0, 200.0, 20.0};
  c.metrics = {Metric::ber};
  c.plan.trials = 0;
  const RunResult r = run(c);
  const Series& s = r.curves[0].series[0];
  CHECK(s.below_floor > 0);
  CHECK(std::isfinite(s.rows.front().analytic));
  CHECK(std::isnan(s.rows.back().analytic));
  CHECK(std::isfinite(s.rows.back().asymptotic));
  const std::string csv = format_csv(c, r, Metric::ber);
  CHECK(csv.find("steep,200,,") != std::string::npos);
  CHECK(format_summary(c, r).find("\"below_ber_floor\": " + std::to_string(s.below_floor)) !=
        std::string::npos);
}

TEST_CASE("capacity is rejected for a mixed run") {
  RunConfig c = preset("fig5a");
  c.metrics = {Metric::capacity};
  c.curves.resize(1);
  c.sweep = {SweepAxis::power_dbm, 20.0, 20.0, 5.0};
  c.plan.trials = 0;
  CHECK_THROWS(run(c));
}

TEST_CASE("every analytic operation has a Monte Carlo check") {
  CHECK(uncovered_operations(registered_checks()).empty());
  std::vector<Check> partial;
  for (const auto& c : registered_checks())
    if (c.name != "mc_mixed_link") partial.push_back(c);
  CHECK_FALSE(uncovered_operations(partial).empty());
}

TEST_CASE("analytic checks pass and catch an injected Fox-H error") {
  const SuiteOptions opt;
  for (const char* name : {"foxh_exponential", "normalization", "term_vs_factorized",
                           "asymptote_vs_exact", "philox_known_answer", "worker_independence",
                           "log_gamma"}) {
    CAPTURE(name);
    CHECK(check_named(name).run(opt).pass);
  }

  set_foxh_perturbation(1e-2);
  const bool exp_fails = !check_named("foxh_exponential").run(opt).pass;
  const bool norm_fails = !check_named("normalization").run(opt).pass;
  const bool asym_fails = !check_named("asymptote_vs_exact").run(opt).pass;
  const bool philox_ok = check_named("philox_known_answer").run(opt).pass;
  const bool gamma_ok = check_named("log_gamma").run(opt).pass;
  set_foxh_perturbation(0.0);

  CHECK(exp_fails);
  CHECK(norm_fails);
  CHECK(asym_fails);
  CHECK(philox_ok);
  CHECK(gamma_ok);
  CHECK(check_named("foxh_exponential").run(opt).pass);
}

TEST_CASE("suite report lists every check") {
  SuiteReport rep;
  rep.checks.push_back({"a", "m", false, true, "ok"});
  rep.checks.push_back({"b", "m", true, false, "off"});
  rep.uncovered = {"cascade.x"};
  const std::string t = rep.text();
  CHECK(t.find("PASS m/a") != std::string::npos);
  CHECK(t.find("FAIL m/b") != std::string::npos);
  CHECK(t.find("cascade.x") != std::string::npos);
}
