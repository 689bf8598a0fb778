#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fceval/ingest.hpp"

using namespace fceval;

namespace {

const std::string kData = FCEVAL_TEST_DATA_DIR;

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  REQUIRE_MESSAGE(bool(is), "missing fixture: ", path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("timestamp parsing: RFC 3339 and epoch seconds") {
  const auto r = parse_price_lines(
      {"timestamp,close", "2024-01-01T00:00:00Z,100.0", "1704070800,101.0",
       "2024-01-01T03:00:00+01:00,102.0", "2024-01-01 03:00:00Z,103.0"},
      "mem");
  REQUIRE(r.records.size() == 4);
  CHECK(r.records[0].timestamp == 1704067200);
  CHECK(r.records[1].timestamp == 1704070800);  // 01:00 UTC
  CHECK(r.records[2].timestamp == 1704074400);  // 03:00+01:00 = 02:00 UTC
  CHECK(r.records[3].timestamp == 1704078000);  // 03:00 UTC
  CHECK_FALSE(r.reordered);
}

TEST_CASE("parsing errors") {
  CHECK_THROWS_AS(parse_price_lines({}, "mem"), DataError);
  CHECK_THROWS_AS(parse_price_lines({"time,price", "1,2"}, "mem"), DataError);
  CHECK_THROWS_AS(parse_price_lines({"timestamp,close"}, "mem"), DataError);
  CHECK_THROWS_AS(
      parse_price_lines({"timestamp,close", "garbage,100"}, "mem"), DataError);
  CHECK_THROWS_AS(
      parse_price_lines({"timestamp,close", "1000,0.0"}, "mem"), DataError);
  CHECK_THROWS_AS(
      parse_price_lines({"timestamp,close", "1000,-5"}, "mem"), DataError);
  CHECK_THROWS_AS(
      parse_price_lines({"timestamp,close", "1000,100", "1000,101"}, "mem"),
      DataError);
}

TEST_CASE("out-of-order rows are sorted and flagged") {
  const auto r = parse_price_lines(
      {"timestamp,close", "2000,101.0", "1000,100.0", "3000,102.0"}, "mem");
  CHECK(r.reordered);
  CHECK(r.records[0].timestamp == 1000);
  CHECK(r.records[2].timestamp == 3000);
}

TEST_CASE("day bucketing: a return belongs to the UTC day of its own timestamp") {
  // Prices at 23:00 Jan1 and hourly through 02:00 Jan2: returns stamped
  // 00:00, 01:00, 02:00 all belong to Jan 2.
  const auto r = parse_price_lines({"timestamp,close",
                                    "2024-01-01T23:00:00Z,100",
                                    "2024-01-02T00:00:00Z,101",
                                    "2024-01-02T01:00:00Z,102",
                                    "2024-01-02T02:00:00Z,103"},
                                   "mem");
  const auto daily = to_daily(r.records, GapPolicy::Scale);
  REQUIRE(daily.days.size() == 1);
  const auto& d = daily.days[0];
  CHECK(format_utc_date(d.day_start) == "2024-01-02");
  REQUIRE(d.hourly_returns.size() == 3);
  CHECK_FALSE(d.complete);
  const double r1 = std::log(101.0 / 100.0);
  const double r2 = std::log(102.0 / 101.0);
  const double r3 = std::log(103.0 / 102.0);
  CHECK(d.daily_return == doctest::Approx(r1 + r2 + r3).epsilon(1e-15));
  CHECK(d.rv ==
        doctest::Approx((r1 * r1 + r2 * r2 + r3 * r3) * 24.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("drop policy removes incomplete days, scale keeps them") {
  const auto r = parse_prices(kData + "/hourly_prices_gap.csv");
  const auto dropped = to_daily(r.records, GapPolicy::Drop);
  const auto scaled = to_daily(r.records, GapPolicy::Scale);
  CHECK(dropped.days.size() == 2);   // Jan 2, Jan 3
  CHECK(scaled.days.size() == 3);    // plus the half Jan 4
  CHECK(format_utc_date(scaled.days[2].day_start) == "2024-01-04");
  CHECK_FALSE(scaled.days[2].complete);
  CHECK(scaled.days[2].hourly_returns.size() == 12);
  // the complete days agree across policies
  for (int i = 0; i < 2; ++i) {
    CHECK(dropped.days[i].daily_return == scaled.days[i].daily_return);
    CHECK(dropped.days[i].rv == scaled.days[i].rv);
    CHECK(dropped.days[i].complete);
  }
  // the scaled rv of the incomplete day is (24/12) x the raw sum
  double raw = 0.0;
  for (double h : scaled.days[2].hourly_returns) raw += h * h;
  CHECK(scaled.days[2].rv == doctest::Approx(2.0 * raw).epsilon(1e-15));
}

TEST_CASE("only incomplete days plus drop policy is an error") {
  const auto r = parse_price_lines({"timestamp,close",
                                    "2024-01-01T23:00:00Z,100",
                                    "2024-01-02T00:00:00Z,101"},
                                   "mem");
  CHECK_THROWS_AS(to_daily(r.records, GapPolicy::Drop), DataError);
}

TEST_CASE("golden: complete 3-day fixture") {
  const auto r = parse_prices(kData + "/hourly_prices_3days.csv");
  REQUIRE(r.records.size() == 73);
  const auto daily = to_daily(r.records, GapPolicy::Drop);
  REQUIRE(daily.days.size() == 3);
  CHECK(daily_to_csv(daily) == slurp(kData + "/daily_3days.csv"));  // bitwise
  // both policies agree when every day is complete
  CHECK(daily_to_csv(to_daily(r.records, GapPolicy::Scale)) ==
        slurp(kData + "/daily_3days.csv"));
}

TEST_CASE("golden: truncated fixture under both gap policies") {
  const auto r = parse_prices(kData + "/hourly_prices_gap.csv");
  CHECK(daily_to_csv(to_daily(r.records, GapPolicy::Drop)) ==
        slurp(kData + "/daily_gap_drop.csv"));
  CHECK(daily_to_csv(to_daily(r.records, GapPolicy::Scale)) ==
        slurp(kData + "/daily_gap_scale.csv"));
}

TEST_CASE("daily CSV write/read round trip") {
  const auto r = parse_prices(kData + "/hourly_prices_3days.csv");
  const auto daily = to_daily(r.records, GapPolicy::Drop);
  const char* path = "daily_roundtrip_test.csv";
  write_daily_csv(daily, path);
  const auto back = read_daily_csv(path);
  REQUIRE(back.days.size() == daily.days.size());
  for (std::size_t i = 0; i < daily.days.size(); ++i) {
    CHECK(back.days[i].day_start == daily.days[i].day_start);
    CHECK(back.days[i].daily_return == daily.days[i].daily_return);
    CHECK(back.days[i].rv == daily.days[i].rv);
  }
  std::remove(path);
}

TEST_CASE("gap policy names") {
  CHECK(gap_policy_from_name("drop") == GapPolicy::Drop);
  CHECK(gap_policy_from_name("scale") == GapPolicy::Scale);
  CHECK_THROWS_AS(gap_policy_from_name("ffill"), ParameterError);
}
