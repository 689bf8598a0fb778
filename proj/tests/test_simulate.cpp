#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include "fceval/simulate.hpp"

using namespace fceval;

TEST_CASE("parameter validation") {
  CHECK_NOTHROW((GarchParams{0.02, 0.08, 0.85}).validate());
  CHECK_THROWS_AS((GarchParams{-0.1, 0.08, 0.85}).validate(), ParameterError);
  CHECK_THROWS_AS((GarchParams{0.02, 0.6, 0.5}).validate(), ParameterError);  // a1+b >= 1
  CHECK_NOTHROW((ApArchParams{0.02, 0.08, 0.75}).validate(3.0));
  CHECK_THROWS_AS((ApArchParams{0.02, 0.2, 0.5}).validate(3.0), ParameterError);
}

TEST_CASE("GARCH unconditional variance formula") {
  const GarchParams p{0.02, 0.08, 0.85};
  CHECK(p.unconditional_variance() == doctest::Approx(0.02 / 0.07).epsilon(1e-14));
}

TEST_CASE("apARCH power-4 unconditional fourth moment and sqrt(2) variance target") {
  const ApArchParams p{0.02, 0.08, 0.75};
  // omega / (1 - 3*alpha - beta) = 0.02/0.01 = 2, so sigma^2 has mean ~ sqrt(2)
  CHECK(p.unconditional_sigma4(3.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("NIG recipe: daily member has mean 0, var 1, skew 1, kurt 17/3") {
  const NigParams p = nig_with_variance(2.0, 1.0, 1.0);
  CHECK(p.mean() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(p.variance() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.skewness() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.kurtosis() == doctest::Approx(17.0 / 3.0).epsilon(1e-12));
  CHECK(p.third_moment() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.fourth_moment() == doctest::Approx(17.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("NIG recipe: intraday pieces for m=100 have skew 10, kurt 269.67") {
  const NigParams p = nig_with_variance(2.0, 1.0, 0.01);
  CHECK(p.skewness() == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(p.kurtosis() == doctest::Approx(3.0 + 800.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("convolution closure: sum of m pieces has the daily parameters") {
  InnovationSpec spec;
  spec.kind = InnovationKind::Nig;
  spec.intraday_count = 100;
  const NigParams piece = spec.piece_nig();
  const NigParams daily = spec.daily_nig();
  CHECK(daily.alpha == doctest::Approx(piece.alpha).epsilon(1e-14));
  CHECK(daily.beta == doctest::Approx(piece.beta).epsilon(1e-14));
  CHECK(daily.delta == doctest::Approx(100.0 * piece.delta).epsilon(1e-12));
  CHECK(daily.mu == doctest::Approx(100.0 * piece.mu).epsilon(1e-12));
  CHECK(daily.variance() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spec.daily_moment(2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spec.daily_moment(3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spec.daily_moment(4) == doctest::Approx(17.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("sample_nig matches the target moments by Monte Carlo") {
  const NigParams p = nig_with_variance(2.0, 1.0, 1.0);
  CounterRng rng(77, 0);
  const int n = 200000;
  double s1 = 0, s2 = 0, s3 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_nig(p, rng, 3ull * i);
    s1 += x;
    s2 += x * x;
    s3 += x * x * x;
  }
  CHECK(std::fabs(s1 / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(s3 / n == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("daily return equals the exact sum of the intraday row") {
  InnovationSpec innov;
  innov.intraday_count = 13;
  const auto panel = simulate_garch({0.02, 0.08, 0.85}, innov, 50, 20, 9, 1);
  REQUIRE(panel.days == 50);
  REQUIRE(panel.intraday_count == 13);
  for (int t = 0; t < panel.days; ++t) {
    double acc = 0.0;
    for (double r : panel.day(t)) acc += r;
    CHECK(acc == panel.daily_returns[t]);  // bitwise: same summation order
  }
}

TEST_CASE("GARCH sigma path satisfies the recursion on the returned window") {
  InnovationSpec innov;
  innov.intraday_count = 4;
  const GarchParams p{0.05, 0.1, 0.8};
  const auto panel = simulate_garch(p, innov, 40, 10, 3, 2);
  for (int t = 1; t < panel.days; ++t) {
    const double want =
        p.a0 + p.a1 * panel.daily_returns[t - 1] * panel.daily_returns[t - 1] +
        p.b * panel.sigma_path[t - 1] * panel.sigma_path[t - 1];
    CHECK(panel.sigma_path[t] * panel.sigma_path[t] ==
          doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("apARCH power-4 sigma path satisfies the recursion") {
  InnovationSpec innov;
  innov.intraday_count = 4;
  const ApArchParams p{0.02, 0.08, 0.75};
  const auto panel = simulate_aparch4(p, innov, 40, 10, 3, 2);
  for (int t = 1; t < panel.days; ++t) {
    const double r = panel.daily_returns[t - 1];
    const double s4_prev = std::pow(panel.sigma_path[t - 1], 4);
    const double want = p.omega + p.alpha * r * r * r * r + p.beta * s4_prev;
    CHECK(std::pow(panel.sigma_path[t], 4) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("simulation is deterministic in (seed, stream) and differs across streams") {
  InnovationSpec innov;
  innov.intraday_count = 6;
  const auto a = simulate_garch({0.02, 0.08, 0.85}, innov, 30, 10, 5, 7);
  const auto b = simulate_garch({0.02, 0.08, 0.85}, innov, 30, 10, 5, 7);
  const auto c = simulate_garch({0.02, 0.08, 0.85}, innov, 30, 10, 5, 8);
  CHECK(a.intraday_returns == b.intraday_returns);
  CHECK(a.sigma_path == b.sigma_path);
  CHECK(a.intraday_returns != c.intraday_returns);
}

TEST_CASE("long GARCH simulation matches the unconditional variance") {
  InnovationSpec innov;
  innov.intraday_count = 1;
  const GarchParams p{0.02, 0.08, 0.85};
  const auto panel = simulate_garch(p, innov, 50000, 1000, 11, 0);
  double s2 = 0.0;
  for (double r : panel.daily_returns) s2 += r * r;
  s2 /= panel.days;
  CHECK(s2 == doctest::Approx(p.unconditional_variance()).epsilon(0.05));
}

TEST_CASE("logprice_offsets has m+1 points starting at the day open") {
  InnovationSpec innov;
  innov.intraday_count = 3;
  const auto panel = simulate_garch({0.02, 0.08, 0.85}, innov, 5, 2, 1, 0);
  const auto off = panel.logprice_offsets(2);
  REQUIRE(off.size() == 4);
  CHECK(off[0] == 0.0);
  const auto day = panel.day(2);
  CHECK(off[1] == day[0]);
  CHECK(off[2] == doctest::Approx(day[0] + day[1]).epsilon(1e-15));
  CHECK(off[3] == doctest::Approx(panel.daily_returns[2]).epsilon(1e-15));
}

TEST_CASE("panel CSV and binary caches round-trip exactly") {
  InnovationSpec innov;
  innov.kind = InnovationKind::Nig;
  innov.intraday_count = 7;
  const auto panel = simulate_garch({0.02, 0.08, 0.85}, innov, 25, 10, 13, 4);

  const char* csv = "panel_roundtrip_test.csv";
  write_panel_csv(panel, csv);
  const auto from_csv = read_panel_csv(csv);
  CHECK(from_csv.days == panel.days);
  CHECK(from_csv.intraday_count == panel.intraday_count);
  CHECK(from_csv.intraday_returns == panel.intraday_returns);
  CHECK(from_csv.daily_returns == panel.daily_returns);
  CHECK(from_csv.sigma_path == panel.sigma_path);
  std::remove(csv);

  const char* bin = "panel_roundtrip_test.bin";
  write_panel_binary(panel, bin);
  const auto from_bin = read_panel_binary(bin);
  CHECK(from_bin.intraday_returns == panel.intraday_returns);
  CHECK(from_bin.daily_returns == panel.daily_returns);
  CHECK(from_bin.sigma_path == panel.sigma_path);
  std::remove(bin);
}
