#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fceval/errors.hpp"

namespace fceval {

struct PriceRecord {
  std::int64_t timestamp = 0;  // UTC epoch seconds, hourly resolution
  double close = 0.0;
};

enum class GapPolicy { Drop, Scale };
GapPolicy gap_policy_from_name(const std::string& name);

struct DailyAlignedSeries {
  struct Day {
    std::int64_t day_start = 0;  // UTC midnight, epoch seconds
    std::vector<double> hourly_returns;
    double daily_return = 0.0;  // left-to-right sum of hourly returns
    double rv = 0.0;            // sum of squared hourly returns (scaled if partial)
    bool complete = false;      // all 24 hourly returns present
  };
  std::vector<Day> days;
};

struct ParseReport {
  std::vector<PriceRecord> records;
  bool reordered = false;  // input rows were out of order and have been sorted
};

// CSV with header `timestamp,close`; timestamps RFC 3339 ("...T...Z" / with
// offset) or plain epoch seconds, auto-detected. Duplicate timestamps are a
// hard error; out-of-order rows are sorted with a warning flag.
ParseReport parse_prices(const std::string& path);
ParseReport parse_price_lines(const std::vector<std::string>& lines,
                              const std::string& context);

// Log returns between consecutive hourly closes, bucketed into UTC calendar
// days. A day is complete when all 24 hourly returns are present; incomplete
// days are dropped or their realized variance is scaled by 24/k.
DailyAlignedSeries to_daily(const std::vector<PriceRecord>& records, GapPolicy policy);

// Output CSV: date,daily_return,rv24 (date as YYYY-MM-DD).
void write_daily_csv(const DailyAlignedSeries& series, const std::string& path);
std::string daily_to_csv(const DailyAlignedSeries& series);
DailyAlignedSeries read_daily_csv(const std::string& path);

std::string format_utc_date(std::int64_t epoch_seconds);

}  // namespace fceval
