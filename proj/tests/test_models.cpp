#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fceval/models.hpp"

using namespace fceval;

namespace {

std::vector<double> iid_series(int n, std::uint64_t seed) {
  InnovationSpec innov;
  innov.intraday_count = 1;
  return simulate_garch({1.0, 0.0, 0.0}, innov, n, 10, seed, 0).daily_returns;
}

}  // namespace

TEST_CASE("model parsing, labels and parameter counts") {
  CHECK(ModelSpec::parse("garch11").label() == "GARCH(1,1)");
  CHECK(ModelSpec::parse("arch1").label() == "ARCH(1)");
  CHECK(ModelSpec::parse("arch7").label() == "ARCH(7)");
  CHECK(ModelSpec::parse("aparch4_2").label() == "apARCH(2)");
  CHECK(ModelSpec::parse("aparch4_11").label() == "apARCH(1,1)");
  CHECK(ModelSpec::parse("egarch11").label() == "EGARCH(1,1)");
  CHECK(ModelSpec::parse("cgarch11").label() == "CGARCH(1,1)");
  CHECK(ModelSpec::parse("garch11").variance_param_count() == 3);
  CHECK(ModelSpec::parse("arch7").variance_param_count() == 8);
  CHECK(ModelSpec::parse("egarch11").variance_param_count() == 4);
  CHECK(ModelSpec::parse("cgarch11").variance_param_count() == 5);
  CHECK(ModelSpec::parse("arch7").max_lag() == 7);
  CHECK(ModelSpec::parse("garch11").max_lag() == 1);
  CHECK_THROWS_AS(ModelSpec::parse("nope"), ParameterError);
  CHECK_THROWS_AS(ModelSpec::parse("aparch4_9"), ParameterError);
}

TEST_CASE("moment forecasts scale the variance by the innovation moment") {
  const auto nm = InnovationMoments::normal_unit();
  CHECK(moment_forecast(4.0, 2, nm) == doctest::Approx(4.0));
  CHECK(moment_forecast(4.0, 4, nm) == doctest::Approx(48.0));
  CHECK(moment_forecast(4.0, 3, nm) == doctest::Approx(0.0));
  CHECK_THROWS_AS(moment_forecast(-1.0, 2, nm), ParameterError);
  InnovationMoments missing;  // m3/m4 unset
  CHECK_THROWS_AS(moment_forecast(1.0, 4, missing), ParameterError);

  InnovationSpec nig;
  nig.kind = InnovationKind::Nig;
  nig.intraday_count = 100;
  const auto im = InnovationMoments::from_spec(nig);
  CHECK(moment_forecast(1.0, 3, im) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(moment_forecast(1.0, 4, im) == doctest::Approx(17.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("one-step forecast hand examples") {
  const std::vector<double> hist = {1.0, -0.5};

  // ARCH(1): a0 + a1 r^2 = 0.1 + 0.3 * 0.25
  CHECK(one_step_sigma2(ModelSpec::parse("arch1"), {0.1, 0.3}, hist) ==
        doctest::Approx(0.175).epsilon(1e-14));

  // GARCH(1,1): start from the window variance 0.625, two recursion steps
  // 0.6125 then 0.1 + 0.2*0.25 + 0.5*0.6125 = 0.45625
  CHECK(one_step_sigma2(ModelSpec::parse("garch11"), {0.1, 0.2, 0.5}, hist) ==
        doctest::Approx(0.45625).epsilon(1e-14));

  // apARCH(1,1) power 4: m4 = 0.53125, s4 path 0.465625 then 0.3390625
  CHECK(one_step_sigma2(ModelSpec::parse("aparch4_11"), {0.1, 0.1, 0.5}, hist) ==
        doctest::Approx(std::sqrt(0.3390625)).epsilon(1e-14));

  // apARCH pure-ARCH order 1: sqrt(omega + alpha r^4)
  CHECK(one_step_sigma2(ModelSpec::parse("aparch4_1"), {0.1, 0.2}, hist) ==
        doctest::Approx(std::sqrt(0.1 + 0.2 * 0.0625)).epsilon(1e-14));

  CHECK_THROWS_AS(one_step_sigma2(ModelSpec::parse("arch2"), {0.1, 0.2, 0.1},
                                  std::vector<double>{0.5}),
                  ParameterError);
}

TEST_CASE("EGARCH and CGARCH one-step forecasts are positive and respond to shocks") {
  std::vector<double> calm(60, 0.1), shocked(60, 0.1);
  shocked.back() = 3.0;
  const std::vector<double> eg = {0.0, 0.2, 0.0, 0.9};            // omega alpha gamma beta
  const std::vector<double> cg = {0.2, 0.95, 0.05, 0.05, 0.85};   // omega rho phi alpha beta
  const auto egspec = ModelSpec::parse("egarch11");
  const auto cgspec = ModelSpec::parse("cgarch11");
  CHECK(one_step_sigma2(egspec, eg, calm) > 0.0);
  CHECK(one_step_sigma2(cgspec, cg, calm) > 0.0);
  CHECK(one_step_sigma2(egspec, eg, shocked) > one_step_sigma2(egspec, eg, calm));
  CHECK(one_step_sigma2(cgspec, cg, shocked) > one_step_sigma2(cgspec, cg, calm));
}

TEST_CASE("ARCH(1) fit on iid data finds no ARCH effect") {
  const auto r = iid_series(3000, 21);
  const auto fit = fit_qmle(ModelSpec::parse("arch1"), r);
  CHECK(fit.converged);
  REQUIRE(fit.params.size() == 2);
  CHECK(fit.params[1] < 0.06);                              // a1 ~ 0
  CHECK(fit.params[0] == doctest::Approx(1.0).epsilon(0.1));  // a0 ~ Var(r)
}

TEST_CASE("GARCH(1,1) fit recovers simulated parameters") {
  InnovationSpec innov;
  innov.intraday_count = 1;
  const GarchParams truth{0.02, 0.08, 0.85};
  const auto panel = simulate_garch(truth, innov, 8000, 500, 33, 0);
  const auto fit = fit_qmle(ModelSpec::parse("garch11"), panel.daily_returns);
  CHECK(fit.converged);
  REQUIRE(fit.params.size() == 3);
  CHECK(fit.params[1] == doctest::Approx(truth.a1).epsilon(0.5));
  CHECK(fit.params[2] == doctest::Approx(truth.b).epsilon(0.1));
  // persistence is the best-identified combination
  CHECK(fit.params[1] + fit.params[2] == doctest::Approx(0.93).epsilon(0.05));
}

TEST_CASE("warm start converges at least as well as a cold start") {
  const auto r = iid_series(500, 55);
  const auto spec = ModelSpec::parse("garch11");
  const auto cold = fit_qmle(spec, r);
  const auto warm = fit_qmle(spec, r, &cold.params);
  CHECK(warm.converged);
  CHECK(warm.loglik >= cold.loglik - 1e-6);
}

TEST_CASE("constant series does not converge and does not throw") {
  const std::vector<double> r(200, 0.5);
  const auto fit = fit_qmle(ModelSpec::parse("garch11"), r);
  CHECK_FALSE(fit.converged);
}

TEST_CASE("window shorter than the model minimum is rejected") {
  const std::vector<double> r(20, 0.1);
  CHECK_THROWS_AS(fit_qmle(ModelSpec::parse("garch11"), r), ParameterError);
}

TEST_CASE("fitted parameters satisfy the stationarity constraints") {
  const auto r = iid_series(800, 77);
  for (const char* name : {"arch1", "arch2", "garch11", "aparch4_1", "aparch4_11"}) {
    const auto spec = ModelSpec::parse(name);
    const auto fit = fit_qmle(spec, r);
    CAPTURE(name);
    CHECK(fit.params[0] > 0.0);
    double pers = 0.0;
    for (std::size_t i = 1; i < fit.params.size(); ++i) pers += fit.params[i];
    if (spec.family == ModelFamily::Aparch4 || spec.family == ModelFamily::Aparch4Arch) {
      // fourth-power margin uses eps4 * alpha terms
      pers = 0.0;
      for (std::size_t i = 1; i < fit.params.size(); ++i) pers += 3.0 * fit.params[i];
      if (spec.family == ModelFamily::Aparch4) pers = 3.0 * fit.params[1] + fit.params[2];
    }
    CHECK(pers < 1.0);
  }
}

TEST_CASE("rolling forecasts: alignment, refit cadence, determinism") {
  const auto r = iid_series(260, 91);
  RollingConfig cfg;
  cfg.window = 200;
  cfg.refit_every = 10;
  const auto fc = rolling_forecasts(ModelSpec::parse("arch1"), r, cfg, 2,
                                    InnovationMoments::normal_unit());
  REQUIRE(fc.values.size() == 60);
  REQUIRE(fc.refit_flags.size() == 60);
  for (int s = 0; s < 60; ++s) {
    CHECK(fc.refit_flags[s] == (s % 10 == 0 ? 1 : 0));
    CHECK(fc.values[s] > 0.0);
  }
  const auto again = rolling_forecasts(ModelSpec::parse("arch1"), r, cfg, 2,
                                       InnovationMoments::normal_unit());
  CHECK(fc.values == again.values);

  CHECK_THROWS_AS(rolling_forecasts(ModelSpec::parse("arch1"),
                                    std::vector<double>(100, 0.1), cfg, 2,
                                    InnovationMoments::normal_unit()),
                  ParameterError);
}

TEST_CASE("between refits the recursion state still moves with the data") {
  // With refit_every > 1 consecutive forecasts use the same parameters but
  // different histories, so they must not all coincide.
  const auto r = iid_series(300, 101);
  RollingConfig cfg;
  cfg.window = 250;
  cfg.refit_every = 25;
  const auto fc = rolling_forecasts(ModelSpec::parse("garch11"), r, cfg, 2,
                                    InnovationMoments::normal_unit());
  bool any_change = false;
  for (std::size_t s = 1; s < 25 && s < fc.values.size(); ++s)
    if (fc.values[s] != fc.values[0]) any_change = true;
  CHECK(any_change);
}

TEST_CASE("oracle forecast reads the true scale path") {
  InnovationSpec innov;
  innov.intraday_count = 4;
  const auto panel = simulate_garch({0.02, 0.08, 0.85}, innov, 40, 10, 7, 0);
  const auto fc = oracle_forecast(panel, 2, InnovationMoments::normal_unit(), 10);
  REQUIRE(fc.values.size() == 30);
  for (int s = 0; s < 30; ++s)
    CHECK(fc.values[s] ==
          doctest::Approx(panel.sigma_path[10 + s] * panel.sigma_path[10 + s])
              .epsilon(1e-14));

  const auto fc4 = oracle_forecast(panel, 4, InnovationMoments::normal_unit(), 0);
  CHECK(fc4.values[3] ==
        doctest::Approx(3.0 * std::pow(panel.sigma_path[3], 4)).epsilon(1e-13));
}
